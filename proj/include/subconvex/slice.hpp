#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "subconvex/errors.hpp"

namespace subconvex::sets {

// Bitmap indicator of a set intersected with [1, N]. Bit n (1-based) is set
// iff n belongs to the set. Count is maintained incrementally and must always
// equal the popcount of the bitmap.
class IndicatorSlice {
public:
    explicit IndicatorSlice(std::uint64_t n_max)
        : n_max_(n_max), bits_((n_max + 64) / 64, 0) {}

    std::uint64_t n_max() const { return n_max_; }
    std::uint64_t count() const { return count_; }

    bool test(std::uint64_t n) const {
        if (n < 1 || n > n_max_) return false;
        return (bits_[n >> 6] >> (n & 63)) & 1u;
    }

    void set(std::uint64_t n) {
        if (n < 1 || n > n_max_) throw InvalidParam("slice index out of range");
        std::uint64_t& w = bits_[n >> 6];
        std::uint64_t m = 1ull << (n & 63);
        if (!(w & m)) { w |= m; ++count_; }
    }

    void fill_all() {
        for (std::uint64_t n = 1; n <= n_max_; ++n)
            bits_[n >> 6] |= 1ull << (n & 63);
        count_ = n_max_;
    }

    std::vector<std::uint64_t> elements() const {
        std::vector<std::uint64_t> out;
        out.reserve(count_);
        for (std::uint64_t n = 1; n <= n_max_; ++n)
            if (test(n)) out.push_back(n);
        return out;
    }

    std::uint64_t popcount() const {
        std::uint64_t c = 0;
        for (std::uint64_t w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
        return c;
    }

    // Bitwise combinators (operands must share n_max).
    static IndicatorSlice bit_and(const IndicatorSlice& a, const IndicatorSlice& b);
    static IndicatorSlice bit_or(const IndicatorSlice& a, const IndicatorSlice& b);
    static IndicatorSlice bit_diff(const IndicatorSlice& a, const IndicatorSlice& b);
    static IndicatorSlice bit_not(const IndicatorSlice& a);

private:
    void mask_tail_and_recount();

    std::uint64_t n_max_;
    std::vector<std::uint64_t> bits_;
    std::uint64_t count_ = 0;
};

} // namespace subconvex::sets
