#include "subconvex/fftgrid.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace subconvex::fft {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution on distinct
// plans/buffers is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct RealBuf {
    double* p = nullptr;
    explicit RealBuf(std::size_t n) : p(fftw_alloc_real(n)) {
        if (!p) throw ResourceLimit("fft buffer allocation failed");
    }
    ~RealBuf() { fftw_free(p); }
    RealBuf(const RealBuf&) = delete;
    RealBuf& operator=(const RealBuf&) = delete;
};

struct CplxBuf {
    fftw_complex* p = nullptr;
    explicit CplxBuf(std::size_t n) : p(fftw_alloc_complex(n)) {
        if (!p) throw ResourceLimit("fft buffer allocation failed");
    }
    ~CplxBuf() { fftw_free(p); }
    CplxBuf(const CplxBuf&) = delete;
    CplxBuf& operator=(const CplxBuf&) = delete;
};

bool is_pow2(std::size_t m) { return m && (m & (m - 1)) == 0; }

} // namespace

std::vector<double> abs_grid(const sets::IndicatorSlice& slice, std::size_t m) {
    if (!is_pow2(m)) throw InvalidParam("grid size must be a power of two");
    if (m < 2 * (slice.n_max() + 1))
        throw GridTooCoarse("grid size " + std::to_string(m) +
                            " too small for bound " + std::to_string(slice.n_max()));
    RealBuf in(m);
    CplxBuf out(m / 2 + 1);
    for (std::size_t i = 0; i < m; ++i) in.p[i] = 0.0;
    for (std::uint64_t n = 1; n <= slice.n_max(); ++n)
        if (slice.test(n)) in.p[n] = 1.0;

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(plan_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.p, out.p, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(plan_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<double> g(m / 2 + 1);
    for (std::size_t j = 0; j <= m / 2; ++j) {
        double re = out.p[j][0], im = out.p[j][1];
        g[j] = std::sqrt(re * re + im * im);
    }
    return g;
}

std::vector<std::complex<double>>
value_grid(const std::vector<std::complex<double>>& weights, std::size_t m) {
    if (m < weights.size() + 1) throw GridTooCoarse("value grid smaller than data");
    CplxBuf in(m);
    CplxBuf out(m);
    for (std::size_t i = 0; i < m; ++i) in.p[i][0] = in.p[i][1] = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        in.p[n + 1][0] = weights[n].real(); // weight of frequency n+1
        in.p[n + 1][1] = weights[n].imag();
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(plan_mutex());
        // BACKWARD uses e(+jc/M): matches the positive-frequency convention
        plan = fftw_plan_dft_1d(static_cast<int>(m), in.p, out.p,
                                FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(plan_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<std::complex<double>> g(m);
    for (std::size_t j = 0; j < m; ++j) g[j] = {out.p[j][0], out.p[j][1]};
    return g;
}

std::vector<std::complex<double>>
dft_pos(const std::vector<std::complex<double>>& w) {
    std::size_t q = w.size();
    if (q == 0) throw InvalidParam("empty transform");
    CplxBuf in(q);
    CplxBuf out(q);
    for (std::size_t i = 0; i < q; ++i) {
        in.p[i][0] = w[i].real();
        in.p[i][1] = w[i].imag();
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(q), in.p, out.p,
                                FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(plan_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<std::complex<double>> g(q);
    for (std::size_t j = 0; j < q; ++j) g[j] = {out.p[j][0], out.p[j][1]};
    return g;
}

} // namespace subconvex::fft
