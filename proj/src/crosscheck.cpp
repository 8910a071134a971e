#include "qpolar/crosscheck.hpp"

#include "qpolar/errors.hpp"
#include "qpolar/prep_sim.hpp"
#include "qpolar/rng.hpp"
#include "qpolar/statevector.hpp"

namespace qpolar {

double oracle_prep_fidelity(int n, int i, PrepTarget target, uint64_t seed) {
    size_t nn = (size_t)1 << n;
    if (nn > 8) throw UsageError("oracle_prep_fidelity: oracle capped at 8 qubits");

    int j = (target == PrepTarget::logical_plus) ? i - 1 : i;
    auto b = prep_bit_sequence(Q1Code{n, j});

    auto rng = substream(seed, "oracle", (uint64_t)i, (uint64_t)target);
    std::vector<uint8_t> outcomes;
    StateVector oracle = simulate_measurement_prep(n, b, rng, &outcomes);

    PrepSimHooks hooks;
    hooks.outcomes = &outcomes;
    PrepOptions opts;
    opts.skip_leading = false;     // replay consumes every recorded outcome
    opts.track_reps = false;
    std::mt19937_64 dummy(0);
    PrepOutcome out = prepare_noisy(n, i, target, NoiseModel{0.0}, dummy, opts, &hooks);
    if (!out.accepted) return 0.0;

    std::vector<int> basis(nn, 0);
    BitVec vals = BitVec::make(nn);
    for (size_t t = 0; t < nn; t++) {
        if (t < (size_t)j) {
            if (out.u.get(t)) vals.flip(t);
        } else {
            basis[t] = 1;
            if (out.v.get(t - (size_t)j)) vals.flip(t);
        }
    }
    StateVector expected = apply_polar_encoding(n, basis, vals);
    return StateVector::fidelity(oracle, expected);
}

}
