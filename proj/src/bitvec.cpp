#include "qpolar/bitvec.hpp"

#include <cassert>

namespace qpolar {

namespace {

// Repeating mask with the low h bits of every 2h-bit group set, h < 64.
uint64_t low_group_mask(size_t h) {
    uint64_t base = (h == 63) ? 0x7fffffffffffffffull : ((1ull << h) - 1);
    uint64_t m = 0;
    for (size_t off = 0; off < 64; off += 2 * h) m |= base << off;
    return m;
}

}

// Butterfly layer at span h: first half of every 2h block ^= second half.
// The layers act on distinct Kronecker factors and commute, so any order works.
void polar_transform(BitVec& v) {
    size_t n = v.nbits;
    assert(n && (n & (n - 1)) == 0);
    for (size_t h = 1; h < n && h < 64; h <<= 1) {
        uint64_t m = low_group_mask(h);
        for (uint64_t& word : v.w) word ^= (word >> h) & m;
    }
    for (size_t h = 64; h < n; h <<= 1) {
        size_t hw = h / 64;
        for (size_t base = 0; base < v.w.size(); base += 2 * hw)
            for (size_t k = 0; k < hw; k++) v.w[base + k] ^= v.w[base + hw + k];
    }
}

// Transposed layer: second half of every 2h block ^= first half.
void polar_transform_transpose(BitVec& v) {
    size_t n = v.nbits;
    assert(n && (n & (n - 1)) == 0);
    for (size_t h = 1; h < n && h < 64; h <<= 1) {
        uint64_t m = low_group_mask(h) << h;
        for (uint64_t& word : v.w) word ^= (word << h) & m;
    }
    for (size_t h = 64; h < n; h <<= 1) {
        size_t hw = h / 64;
        for (size_t base = 0; base < v.w.size(); base += 2 * hw)
            for (size_t k = 0; k < hw; k++) v.w[base + hw + k] ^= v.w[base + k];
    }
}

BitVec restrict_range(const BitVec& v, size_t lo, size_t hi) {
    assert(lo <= hi && hi <= v.nbits);
    BitVec r = BitVec::make(hi - lo);
    for (size_t i = lo; i < hi; i++)
        if (v.get(i)) r.flip(i - lo);
    return r;
}

BitVec restrict_indices(const BitVec& v, const std::vector<size_t>& idx) {
    BitVec r = BitVec::make(idx.size());
    for (size_t k = 0; k < idx.size(); k++)
        if (v.get(idx[k])) r.flip(k);
    return r;
}

}
