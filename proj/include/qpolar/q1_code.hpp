#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qpolar/bitvec.hpp"
#include "qpolar/reliability.hpp"

namespace qpolar {

// CSS polar code with a single information position i (1-based):
// Z-frozen set {1..i-1}, X-frozen set {i+1..N}.
struct Q1Code {
    int n = 0;          // N = 2^n
    int i = 1;
    size_t N() const { return (size_t)1 << n; }
};

enum class CodeFamily { q1, shor };

enum class PrepTarget { logical_zero, logical_plus, generic };

// Pick the information position minimizing the position logical error rate;
// the shor family restricts candidates to powers of two.  Ties break to the
// smallest index.
Q1Code construct(int n, const ReliabilityProfile& prof, CodeFamily family);

struct StabilizerSet {
    std::vector<BitVec> x_gens, z_gens;   // qubit supports, length N each
    std::vector<int> x_signs, z_signs;    // +1/-1, from frozen values if given
};

// X generators P_N e_j for j in the X-frozen set, Z generators P_N^T e_j for
// j in the Z-frozen set.  If frozen vectors are supplied (u over {1..i-1} or
// {1..i}, v over {i+1..N}), generator signs are (-1)^{frozen value}.
StabilizerSet stabilizers(const Q1Code& code, const BitVec* u = nullptr,
                          const BitVec* v = nullptr);

// (logical X support, logical Z support) = (P_N e_i, P_N^T e_i).
std::pair<BitVec, BitVec> logical_operators(const Q1Code& code);

// Exact minimum distance 2^min(w, n-w) with w = popcount(i-1); the X and Z
// coset minimum weights are 2^w and 2^(n-w).
int min_distance(const Q1Code& code);
uint64_t min_x_coset_weight(const Q1Code& code);
uint64_t min_z_coset_weight(const Q1Code& code);

// Brute-force Gray-code sweep of the logical coset; test oracle for small
// cosets only (free dimension capped at 22 bits).
uint64_t min_coset_weight_bruteforce(const Q1Code& code, bool x_type);

// Bits b_1..b_n of i-1, b_n most significant: b_k = 1 means recursion level k
// merges with a Z x Z measurement, b_k = 0 with an X x X measurement.
std::vector<int> prep_bit_sequence(const Q1Code& code);

// Count of leading b_k = 1 levels whose measurements are deterministic on
// Z-basis-initialized qubits; 0 for logical-X targets.
int leading_zz_levels_skippable(const Q1Code& code, PrepTarget target);

}
