#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qpolar/bitvec.hpp"
#include "qpolar/q1_code.hpp"

namespace qpolar {

// Circuit-level noise: every component (initialization, CNOT, single-qubit
// measurement) fails independently with probability p; a failed CNOT applies
// one of the 15 nontrivial two-qubit Paulis uniformly, a failed init/readout
// flips the prepared/reported value.
struct NoiseModel {
    double p = 0;
};

struct PauliFrame {
    BitVec e_x, e_z;
};

struct PrepOutcome {
    bool accepted = false;
    BitVec u;                  // Z-frozen values (positions 1..i(n)), run order
    BitVec v;                  // X-frozen values (positions i(n)+1..N)
    PauliFrame frame;
    BitVec rep_x, rep_z;       // canonical equivalent representatives
    uint64_t fault_count = 0;  // T_n: components that actually failed
    uint64_t component_count = 0;
    int levels_skipped = 0;
    int logical_value = -1;    // Z eigenvalue bit (logical_zero) or X (logical_plus)
};

struct PrepOptions {
    bool skip_leading = true;  // drop deterministic leading Z x Z levels
    bool track_reps = true;    // maintain canonical representatives
};

// Deterministic fault injection for gadget-level cross-validation.  level 0
// addresses initialization (block = qubit index); levels 1..n address the
// two-qubit measurement gadgets: component 0 ancilla init, 1/2 the two CNOTs,
// 3 the ancilla readout.  Single-qubit components use the xc bit as the flip;
// CNOT components give (xc,zc) on the control wire and (xt,zt) on the target.
struct InjectedFault {
    int level = 0, block = 0, pair = 0, component = 0;
    uint8_t xc = 0, zc = 0, xt = 0, zt = 0;
};

struct PrepSimHooks {
    // Replay mode: observed gadget outcomes in level/block/pair order replace
    // the internally sampled ones.
    const std::vector<uint8_t>* outcomes = nullptr;
    const std::vector<InjectedFault>* faults = nullptr;
    bool no_random_faults = false;
};

// One preparation attempt at information position i for the given target
// (logical_plus runs the recursion to position i-1 and needs i >= 2).
PrepOutcome prepare_noisy(int n, int i, PrepTarget target, NoiseModel noise,
                          std::mt19937_64& rng, const PrepOptions& opts = {},
                          const PrepSimHooks* hooks = nullptr);

PrepOutcome prepare_noiseless(int n, int i, PrepTarget target, std::mt19937_64& rng);

struct PrepRateStats {
    uint64_t attempts = 0, accepted = 0;
    double p_prep = 0, ci_lo = 0, ci_hi = 0;
    double mean_wx = 0, mean_wz = 0;        // mean frame weights over accepted runs
    double qubit_rate_x = 0, qubit_rate_z = 0;  // mean_w / N
};

PrepRateStats estimate_prep_rate(const Q1Code& code, PrepTarget target,
                                 NoiseModel noise, uint64_t attempts,
                                 uint64_t seed, int threads,
                                 const PrepOptions& opts = {});

// Restart-until-accept; throws ResourceBoundError after max_attempts tries.
PrepOutcome prepare_accepted(int n, int i, PrepTarget target, NoiseModel noise,
                             std::mt19937_64& rng, uint64_t max_attempts,
                             const PrepOptions& opts = {});

}
