#pragma once

#include <cstdint>

#include "qpolar/q1_code.hpp"

namespace qpolar {

// Runs one noiseless measurement-based preparation on the dense statevector
// oracle, replays the recorded outcomes through the classical bookkeeping, and
// returns the fidelity between the oracle state and the encoded basis state
// predicted by the recovered frozen vectors.  Requires 2^n <= 8.
double oracle_prep_fidelity(int n, int i, PrepTarget target, uint64_t seed);

}
