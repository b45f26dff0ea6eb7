#include "subconvex/slice.hpp"

namespace subconvex::sets {

namespace {
void require_same(const IndicatorSlice& a, const IndicatorSlice& b) {
    if (a.n_max() != b.n_max())
        throw LengthMismatch("slice bounds differ in bitwise combinator");
}
} // namespace

void IndicatorSlice::mask_tail_and_recount() {
    if (!bits_.empty()) {
        // bit 0 of word 0 (index 0) is never a member
        bits_[0] &= ~1ull;
        std::uint64_t top = n_max_;
        std::uint64_t last_word = top >> 6;
        unsigned used = static_cast<unsigned>(top & 63) + 1;
        if (used < 64)
            bits_[last_word] &= (used == 64) ? ~0ull : ((1ull << used) - 1);
        for (std::size_t w = last_word + 1; w < bits_.size(); ++w) bits_[w] = 0;
    }
    count_ = popcount();
}

IndicatorSlice IndicatorSlice::bit_and(const IndicatorSlice& a, const IndicatorSlice& b) {
    require_same(a, b);
    IndicatorSlice r(a.n_max_);
    for (std::size_t i = 0; i < r.bits_.size(); ++i) r.bits_[i] = a.bits_[i] & b.bits_[i];
    r.mask_tail_and_recount();
    return r;
}

IndicatorSlice IndicatorSlice::bit_or(const IndicatorSlice& a, const IndicatorSlice& b) {
    require_same(a, b);
    IndicatorSlice r(a.n_max_);
    for (std::size_t i = 0; i < r.bits_.size(); ++i) r.bits_[i] = a.bits_[i] | b.bits_[i];
    r.mask_tail_and_recount();
    return r;
}

IndicatorSlice IndicatorSlice::bit_diff(const IndicatorSlice& a, const IndicatorSlice& b) {
    require_same(a, b);
    IndicatorSlice r(a.n_max_);
    for (std::size_t i = 0; i < r.bits_.size(); ++i) r.bits_[i] = a.bits_[i] & ~b.bits_[i];
    r.mask_tail_and_recount();
    return r;
}

IndicatorSlice IndicatorSlice::bit_not(const IndicatorSlice& a) {
    IndicatorSlice r(a.n_max_);
    for (std::size_t i = 0; i < r.bits_.size(); ++i) r.bits_[i] = ~a.bits_[i];
    r.mask_tail_and_recount();
    return r;
}

} // namespace subconvex::sets
