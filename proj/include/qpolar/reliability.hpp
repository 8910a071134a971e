#pragma once

#include <cstdint>
#include <vector>

#include "qpolar/channel.hpp"

namespace qpolar {

// Per-position input error probabilities under successive-cancellation
// decoding, in decode order (position index = input index, 0-based).
//
// pe_z is the profile of the Z-basis (standard orientation) code; pe_x is the
// profile of the X-basis code in ITS OWN standard order, i.e. the X-side value
// for input position i (1-based) of the Z-oriented code is pe_x[N - i].
struct ReliabilityProfile {
    int n = 0;
    std::vector<double> pe_z, pe_x;
    std::vector<double> se_z, se_x;     // standard errors (zero for exact BEC values)
};

// Exact erasure-channel recursion: q -> 2q - q^2 (check side), q -> q^2
// (variable side), applied least-significant-bit first over the position bits.
std::vector<double> bec_reliabilities(int n, double eps);

// Genie-aided min-sum density evolution by Monte-Carlo sampling of `pop`
// channel realizations.  Ties (LLR exactly 0) count as half an error.
// Deterministic for fixed (seed, pop), independent of thread count.
std::vector<double> bsc_reliabilities_de(int n, const BscMixture& ch, uint64_t pop,
                                         uint64_t seed, int threads,
                                         std::vector<double>* se_out = nullptr);

ReliabilityProfile erasure_profile(int n, double eps);

// use_corr=false: both sides are BSC(2p/3).  use_corr=true: the X side uses
// the extended mixture that conditions on the X-correction already applied.
ReliabilityProfile depolarizing_profile(int n, double p, bool use_corr,
                                        uint64_t pop, uint64_t seed, int threads);

// Logical error probability of the single-information-position code with
// information position i (1-based): 1 - (1 - pe_z[i]) (1 - pe_x[pi(i)]).
double q1_position_ler(const ReliabilityProfile& prof, int i);

// Standard error of q1_position_ler by propagation of the profile noise.
double q1_position_ler_se(const ReliabilityProfile& prof, int i);

}
