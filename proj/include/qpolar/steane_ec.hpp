#pragma once

#include <cstdint>
#include <random>

#include "qpolar/prep_sim.hpp"
#include "qpolar/q1_code.hpp"
#include "qpolar/sc_decoder.hpp"

namespace qpolar {

struct EcTrialRecord {
    char basis = 'X';                  // which error type this round corrects
    bool decode1_success = false;
    bool decode2_success = false;
    bool logical_error = false;        // holds iff exactly one decoder failed
};

struct LerEstimate {
    double p_x_l = 0, p_z_l = 0, p_e_l = 0;
    uint64_t trials_x = 0, trials_z = 0;
    uint64_t failures_x = 0, failures_z = 0;
    uint64_t failures_target = 0;
    bool censored = false;
};

// One X-error-correction trial: prepare a logical-Z data block and a logical-X
// ancilla (restart until accepted), extract the X syndrome through a noisy
// transversal CNOT and ancilla Z-readout, SC-decode and correct, then read the
// logical Z value out destructively and SC-decode again.
EcTrialRecord mc_x_trial(const Q1Code& code, NoiseModel noise,
                         std::mt19937_64& rng, ScDecoder& dec,
                         uint64_t max_prep_attempts = 10000000);

// Mirror trial in the transpose orientation correcting Z errors.
EcTrialRecord mc_z_trial(const Q1Code& code, NoiseModel noise,
                         std::mt19937_64& rng, ScDecoder& dec,
                         uint64_t max_prep_attempts = 10000000);

// Run independent X- and Z-trial streams until each accumulates f failures or
// max_trials trials; deterministic for a fixed seed regardless of threads.
LerEstimate estimate_ler_mc(const Q1Code& code, NoiseModel noise, uint64_t f,
                            uint64_t max_trials, uint64_t seed, int threads);

// Density-evolution estimate: measure per-qubit residual rates of accepted
// preparations, map them through the two decoder input-crossover formulas, run
// min-sum density evolution at those crossovers, and combine.
LerEstimate estimate_ler_de(const Q1Code& code, NoiseModel noise,
                            uint64_t prep_runs, uint64_t de_pop, uint64_t seed,
                            int threads);

}
