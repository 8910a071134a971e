#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qpolar {

// Packed GF(2) bit vector, 64 bits per word, bit i stored at word i/64, bit i%64.
struct BitVec {
    size_t nbits = 0;
    std::vector<uint64_t> w;

    static BitVec make(size_t n) {
        BitVec v;
        v.nbits = n;
        v.w.assign((n + 63) / 64, 0);
        return v;
    }

    static BitVec unit(size_t n, size_t pos) {
        BitVec v = make(n);
        v.flip(pos);
        return v;
    }

    bool get(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool b) {
        uint64_t m = 1ull << (i & 63);
        if (b) w[i >> 6] |= m; else w[i >> 6] &= ~m;
    }
    void flip(size_t i) { w[i >> 6] ^= 1ull << (i & 63); }

    void xor_with(const BitVec& b) {
        for (size_t k = 0; k < w.size() && k < b.w.size(); k++) w[k] ^= b.w[k];
    }

    size_t popcnt() const {
        size_t s = 0;
        for (uint64_t t : w) s += (size_t)__builtin_popcountll(t);
        return s;
    }

    bool any() const {
        for (uint64_t t : w) if (t) return true;
        return false;
    }

    void clear() { std::fill(w.begin(), w.end(), 0); }

    bool operator==(const BitVec&) const = default;
};

// In-place polar transform x = P_N u over GF(2), where P_N is the n-fold
// Kronecker power of [[1,1],[0,1]].  v.nbits must be a power of two.
void polar_transform(BitVec& v);

// In-place transpose transform x = P_N^T u.
void polar_transform_transpose(BitVec& v);

// Restriction to the half-open index range [lo, hi).
BitVec restrict_range(const BitVec& v, size_t lo, size_t hi);

// Restriction to an explicit index set (result bit k = v[idx[k]]).
BitVec restrict_indices(const BitVec& v, const std::vector<size_t>& idx);

inline size_t weight(const BitVec& v) { return v.popcnt(); }

}
