#include "qpolar/q1_code.hpp"

#include <bit>

#include "qpolar/errors.hpp"

namespace qpolar {

Q1Code construct(int n, const ReliabilityProfile& prof, CodeFamily family) {
    if (prof.n != n) throw UsageError("construct: profile depth mismatch");
    size_t nn = (size_t)1 << n;
    Q1Code best{n, 1};
    double best_p = 2.0;
    for (size_t i = 1; i <= nn; i++) {
        if (family == CodeFamily::shor && (i & (i - 1)) != 0) continue;
        double p = q1_position_ler(prof, (int)i);
        if (p < best_p) {
            best_p = p;
            best.i = (int)i;
        }
    }
    return best;
}

StabilizerSet stabilizers(const Q1Code& code, const BitVec* u, const BitVec* v) {
    size_t nn = code.N();
    StabilizerSet s;
    for (size_t j = (size_t)code.i; j < nn; j++) {      // X-frozen set {i+1..N}, 0-based j
        BitVec g = BitVec::unit(nn, j);
        polar_transform(g);
        s.x_gens.push_back(g);
        int sign = 1;
        if (v && v->nbits > j - (size_t)code.i && v->get(j - (size_t)code.i)) sign = -1;
        s.x_signs.push_back(sign);
    }
    for (size_t j = 0; j + 1 < (size_t)code.i; j++) {   // Z-frozen set {1..i-1}
        BitVec g = BitVec::unit(nn, j);
        polar_transform_transpose(g);
        s.z_gens.push_back(g);
        int sign = 1;
        if (u && u->nbits > j && u->get(j)) sign = -1;
        s.z_signs.push_back(sign);
    }
    return s;
}

std::pair<BitVec, BitVec> logical_operators(const Q1Code& code) {
    size_t nn = code.N();
    BitVec x = BitVec::unit(nn, (size_t)code.i - 1);
    polar_transform(x);
    BitVec z = BitVec::unit(nn, (size_t)code.i - 1);
    polar_transform_transpose(z);
    return {x, z};
}

uint64_t min_x_coset_weight(const Q1Code& code) {
    int w = std::popcount((unsigned)(code.i - 1));
    return 1ull << w;
}

uint64_t min_z_coset_weight(const Q1Code& code) {
    int w = std::popcount((unsigned)(code.i - 1));
    return 1ull << (code.n - w);
}

int min_distance(const Q1Code& code) {
    if (code.n > 14) throw ResourceBoundError("min_distance: depth capped at 14");
    uint64_t dx = min_x_coset_weight(code);
    uint64_t dz = min_z_coset_weight(code);
    return (int)(dx < dz ? dx : dz);
}

uint64_t min_coset_weight_bruteforce(const Q1Code& code, bool x_type) {
    size_t nn = code.N();
    // Free positions spanning the stabilizer group of the requested type.
    std::vector<size_t> free_pos;
    if (x_type) {
        for (size_t j = (size_t)code.i; j < nn; j++) free_pos.push_back(j);
    } else {
        for (size_t j = 0; j + 1 < (size_t)code.i; j++) free_pos.push_back(j);
    }
    if (free_pos.size() > 22)
        throw ResourceBoundError("min_coset_weight_bruteforce: coset too large");

    BitVec cur = BitVec::unit(nn, (size_t)code.i - 1);
    if (x_type) polar_transform(cur); else polar_transform_transpose(cur);

    // Precompute generator images; Gray-code walk XORs one generator per step.
    std::vector<BitVec> gen;
    for (size_t j : free_pos) {
        BitVec g = BitVec::unit(nn, j);
        if (x_type) polar_transform(g); else polar_transform_transpose(g);
        gen.push_back(g);
    }
    uint64_t best = weight(cur);
    uint64_t total = 1ull << free_pos.size();
    for (uint64_t t = 1; t < total; t++) {
        int bit = std::countr_zero(t);
        cur.xor_with(gen[(size_t)bit]);
        uint64_t w = weight(cur);
        if (w < best) best = w;
    }
    return best;
}

std::vector<int> prep_bit_sequence(const Q1Code& code) {
    std::vector<int> b(code.n);
    for (int k = 1; k <= code.n; k++)
        b[(size_t)k - 1] = (int)(((unsigned)(code.i - 1) >> (k - 1)) & 1);
    return b;
}

int leading_zz_levels_skippable(const Q1Code& code, PrepTarget target) {
    if (target == PrepTarget::logical_plus) return 0;
    auto b = prep_bit_sequence(code);
    int s = 0;
    while (s < code.n && b[(size_t)s] == 1) s++;
    return s;
}

}
