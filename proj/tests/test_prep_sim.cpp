#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpolar/crosscheck.hpp"
#include "qpolar/errors.hpp"
#include "qpolar/prep_sim.hpp"
#include "qpolar/rng.hpp"
#include "qpolar/statevector.hpp"

using namespace qpolar;
using doctest::Approx;

namespace {

// Full quantum reference run of the measurement-based preparation on 2^n data
// qubits plus one reusable gadget ancilla, with deterministic fault injection
// mirroring the classical engine's addressing scheme.
struct QuantumRun {
    std::vector<uint8_t> outcomes;
    StateVector state{};        // 2^n + 1 qubits, ancilla reset to |0> at the end
};

const InjectedFault* find_fault(const std::vector<InjectedFault>& faults, int level,
                                int block, int pair, int comp) {
    for (const auto& f : faults)
        if (f.level == level && f.block == block && f.pair == pair && f.component == comp)
            return &f;
    return nullptr;
}

QuantumRun quantum_prep(int n, int j, const std::vector<InjectedFault>& faults,
                        std::mt19937_64& rng) {
    size_t nn = (size_t)1 << n;
    int anc = (int)nn;
    QuantumRun run;
    run.state = StateVector::zero_state((int)nn + 1);
    StateVector& s = run.state;

    for (size_t q = 0; q < nn; q++)
        if (auto* f = find_fault(faults, 0, (int)q, 0, 0); f && f->xc)
            s.apply_x((int)q);

    auto b = prep_bit_sequence(Q1Code{n, j});
    for (int k = 1; k <= n; k++) {
        size_t kk = (size_t)1 << k, half = kk / 2;
        for (size_t blk = 0; blk < (nn >> k); blk++) {
            size_t off = blk * kk;
            for (size_t jj = 0; jj < half; jj++) {
                int q1 = (int)(off + jj), q2 = (int)(off + jj + half);
                auto* f0 = find_fault(faults, k, (int)blk, (int)jj, 0);
                auto* f1 = find_fault(faults, k, (int)blk, (int)jj, 1);
                auto* f2 = find_fault(faults, k, (int)blk, (int)jj, 2);
                auto* f3 = find_fault(faults, k, (int)blk, (int)jj, 3);
                int out;
                if (b[(size_t)k - 1]) {
                    // Z x Z gadget: ancilla |0>, CNOT(q1->anc), CNOT(q2->anc),
                    // Z readout.  Faults act after their component.
                    if (f0 && f0->xc) s.apply_x(anc);
                    s.apply_cnot(q1, anc);
                    if (f1) {
                        if (f1->xc) s.apply_x(q1);
                        if (f1->zc) s.apply_z(q1);
                        if (f1->xt) s.apply_x(anc);
                        if (f1->zt) s.apply_z(anc);
                    }
                    s.apply_cnot(q2, anc);
                    if (f2) {
                        if (f2->xc) s.apply_x(q2);
                        if (f2->zc) s.apply_z(q2);
                        if (f2->xt) s.apply_x(anc);
                        if (f2->zt) s.apply_z(anc);
                    }
                    out = s.measure_pauli('Z', anc, rng);
                } else {
                    // X x X gadget: ancilla |+>, CNOT(anc->q1), CNOT(anc->q2),
                    // X readout.  The init fault is the Z flip |+> -> |->.
                    s.apply_h(anc);
                    if (f0 && f0->xc) s.apply_z(anc);
                    s.apply_cnot(anc, q1);
                    if (f1) {
                        if (f1->xc) s.apply_x(anc);
                        if (f1->zc) s.apply_z(anc);
                        if (f1->xt) s.apply_x(q1);
                        if (f1->zt) s.apply_z(q1);
                    }
                    s.apply_cnot(anc, q2);
                    if (f2) {
                        if (f2->xc) s.apply_x(anc);
                        if (f2->zc) s.apply_z(anc);
                        if (f2->xt) s.apply_x(q2);
                        if (f2->zt) s.apply_z(q2);
                    }
                    out = s.measure_pauli('X', anc, rng);
                }
                if (f3 && f3->xc) out ^= 1;
                run.outcomes.push_back((uint8_t)out);
                // Reset the ancilla for the next gadget.
                if (s.measure_pauli('Z', anc, rng)) s.apply_x(anc);
            }
        }
    }
    return run;
}

// Embed an n-qubit state as state (x) |0> on n+1 qubits.
StateVector with_ancilla_zero(const StateVector& a) {
    StateVector s;
    s.nq = a.nq + 1;
    s.amp.assign(a.amp.size() * 2, 0.0);
    for (size_t t = 0; t < a.amp.size(); t++) s.amp[2 * t] = a.amp[t];
    return s;
}

StateVector expected_state(int n, int j, const PrepOutcome& out) {
    size_t nn = (size_t)1 << n;
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
    StateVector s = apply_polar_encoding(n, basis, vals);
    for (size_t q = 0; q < nn; q++) {
        if (out.frame.e_x.get(q)) s.apply_x((int)q);
        if (out.frame.e_z.get(q)) s.apply_z((int)q);
    }
    return s;
}

}

TEST_CASE("noiseless preparation always accepts with a clean frame") {
    for (int n = 1; n <= 5; n++) {
        size_t nn = (size_t)1 << n;
        for (int i = 1; (size_t)i <= nn; i += (n < 4 ? 1 : 3)) {
            for (auto target : {PrepTarget::logical_zero, PrepTarget::logical_plus,
                                PrepTarget::generic}) {
                if (target == PrepTarget::logical_plus && i < 2) continue;
                auto rng = substream(4, "ps0", (uint64_t)(n * 100 + i), (uint64_t)target);
                PrepOutcome out = prepare_noiseless(n, i, target, rng);
                REQUIRE(out.accepted);
                CHECK(out.fault_count == 0);
                CHECK_FALSE(out.frame.e_x.any());
                CHECK_FALSE(out.frame.e_z.any());
                int j = (target == PrepTarget::logical_plus) ? i - 1 : i;
                CHECK(out.u.nbits == (size_t)j);
                CHECK(out.v.nbits == nn - (size_t)j);
                CHECK((out.logical_value == 0 || out.logical_value == 1));
                // Component accounting: N inits plus 4 per executed gadget.
                size_t levels = (size_t)n - (size_t)out.levels_skipped;
                CHECK(out.component_count == nn + levels * (nn / 2) * 4);
                CHECK(out.component_count <= nn * (1 + 2 * (size_t)n));
            }
        }
    }
}

TEST_CASE("repeating a seed reproduces the preparation") {
    auto r1 = substream(77, "ps-det");
    auto r2 = substream(77, "ps-det");
    PrepOutcome a = prepare_noisy(4, 7, PrepTarget::logical_zero, NoiseModel{5e-3}, r1);
    PrepOutcome b = prepare_noisy(4, 7, PrepTarget::logical_zero, NoiseModel{5e-3}, r2);
    CHECK(a.accepted == b.accepted);
    CHECK(a.fault_count == b.fault_count);
    if (a.accepted) {
        CHECK(a.u == b.u);
        CHECK(a.v == b.v);
        CHECK(a.frame.e_x == b.frame.e_x);
        CHECK(a.frame.e_z == b.frame.e_z);
    }
}

TEST_CASE("noiseless replay matches the statevector oracle") {
    for (int n = 1; n <= 3; n++) {
        size_t nn = (size_t)1 << n;
        for (int i = 1; (size_t)i <= nn; i++) {
            for (auto target : {PrepTarget::logical_zero, PrepTarget::logical_plus,
                                PrepTarget::generic}) {
                if (target == PrepTarget::logical_plus && i < 2) continue;
                for (uint64_t seed = 0; seed < 20; seed++)
                    CHECK(oracle_prep_fidelity(n, i, target, seed) >= 1 - 1e-9);
            }
        }
    }
}

TEST_CASE("every single-component fault matches the quantum reference") {
    // Enumerate each fault location (init flip, all 15 Paulis at both CNOTs,
    // readout flip) one at a time, run the quantum reference with the same
    // fault, replay its outcomes classically, and demand that either the
    // detection rejects or the tracked frame reproduces the quantum state.
    int n = 3;
    size_t nn = 8;
    for (auto [i, target] : {std::pair{3, PrepTarget::logical_zero},
                             {3, PrepTarget::logical_plus},
                             {5, PrepTarget::generic}}) {
        int j = (target == PrepTarget::logical_plus) ? i - 1 : i;

        std::vector<InjectedFault> cases;
        for (int q = 0; q < (int)nn; q++)
            cases.push_back({0, q, 0, 0, 1, 0, 0, 0});
        for (int k = 1; k <= n; k++)
            for (int blk = 0; blk < (int)(nn >> k); blk++)
                for (int pr = 0; pr < (1 << (k - 1)); pr++) {
                    cases.push_back({k, blk, pr, 0, 1, 0, 0, 0});
                    for (int comp : {1, 2})
                        for (int r = 1; r < 16; r++)
                            cases.push_back({k, blk, pr, comp, (uint8_t)((r >> 3) & 1),
                                             (uint8_t)((r >> 2) & 1), (uint8_t)((r >> 1) & 1),
                                             (uint8_t)(r & 1)});
                    cases.push_back({k, blk, pr, 3, 1, 0, 0, 0});
                }

        size_t accepted = 0, rejected = 0;
        for (size_t ci = 0; ci < cases.size(); ci++) {
            std::vector<InjectedFault> faults{cases[ci]};
            auto qrng = substream(12, "ps-quantum", (uint64_t)(i * 1000) + ci,
                                  (uint64_t)target);
            QuantumRun qr = quantum_prep(n, j, faults, qrng);

            PrepSimHooks hooks;
            hooks.outcomes = &qr.outcomes;
            hooks.faults = &faults;
            hooks.no_random_faults = true;
            PrepOptions opts;
            opts.skip_leading = false;
            opts.track_reps = false;
            std::mt19937_64 dummy(0);
            PrepOutcome out = prepare_noisy(n, i, target, NoiseModel{0.0}, dummy,
                                            opts, &hooks);
            if (!out.accepted) {
                rejected++;
                continue;
            }
            accepted++;
            CHECK(out.fault_count == 1);
            StateVector want = with_ancilla_zero(expected_state(n, j, out));
            double fid = StateVector::fidelity(qr.state, want);
            CHECK(fid == Approx(1.0).epsilon(1e-9));
        }
        // Both branches must be exercised: some faults slip past detection
        // (and are then frame-tracked), others trip it.
        CHECK(accepted > 0);
        CHECK(rejected > 0);
    }
}

TEST_CASE("fault-free replay with a corrupted outcome is rejected") {
    // Flip one recorded outcome of a clean quantum run; the classical replay
    // must reject unless the flipped bit was a free (fresh-randomness) bit.
    int n = 3, i = 8;                   // all Z x Z levels: no free bits at all
    auto qrng = substream(13, "ps-flip");
    QuantumRun qr = quantum_prep(n, i, {}, qrng);
    for (size_t t = 0; t < qr.outcomes.size(); t++) {
        std::vector<uint8_t> outs = qr.outcomes;
        outs[t] ^= 1;
        PrepSimHooks hooks;
        hooks.outcomes = &outs;
        hooks.no_random_faults = true;
        PrepOptions opts;
        opts.skip_leading = false;
        opts.track_reps = false;
        std::mt19937_64 dummy(0);
        PrepOutcome out = prepare_noisy(n, i, PrepTarget::logical_zero,
                                        NoiseModel{0.0}, dummy, opts, &hooks);
        CHECK_FALSE(out.accepted);
    }
}

TEST_CASE("canonical representatives obey the fault-count bound") {
    // weight(rep) <= number of failed components, and the representative
    // differs from the raw frame only by stabilizers of the target state.
    for (auto [n, i, p] : {std::tuple{4, 7, 1e-2}, {4, 7, 3e-2}, {3, 3, 3e-2}}) {
        size_t nn = (size_t)1 << n;
        auto rng = substream(15, "ps-t3", (uint64_t)n, (uint64_t)i);
        size_t accepted = 0;
        for (int t = 0; t < 4000 && accepted < 1500; t++) {
            PrepOutcome out = prepare_noisy(n, i, PrepTarget::logical_zero,
                                            NoiseModel{p}, rng);
            if (!out.accepted) continue;
            accepted++;
            CHECK(weight(out.rep_x) <= out.fault_count);
            CHECK(weight(out.rep_z) <= out.fault_count);
            // rep_x ^ e_x must lie in the span of the X stabilizers
            // {P e_t : t >= i}, i.e. transform back and check the prefix.
            BitVec dx = out.rep_x;
            dx.xor_with(out.frame.e_x);
            polar_transform(dx);
            for (size_t q = 0; q < (size_t)i; q++) CHECK_FALSE(dx.get(q));
            // rep_z ^ e_z lies in the span of {P^T e_t : t < i} (the logical
            // position included: the prepared state is a logical Z eigenstate).
            BitVec dz = out.rep_z;
            dz.xor_with(out.frame.e_z);
            polar_transform_transpose(dz);
            for (size_t q = (size_t)i; q < nn; q++) CHECK_FALSE(dz.get(q));
        }
        CHECK(accepted >= 200);
    }
}

TEST_CASE("acceptance statistics and thread determinism") {
    Q1Code code{4, 7};
    PrepRateStats a = estimate_prep_rate(code, PrepTarget::logical_zero,
                                         NoiseModel{1e-2}, 20000, 3, 1);
    PrepRateStats b = estimate_prep_rate(code, PrepTarget::logical_zero,
                                         NoiseModel{1e-2}, 20000, 3, 3);
    CHECK(a.accepted == b.accepted);
    CHECK(a.mean_wx == b.mean_wx);
    CHECK(a.mean_wz == b.mean_wz);
    CHECK(a.p_prep > 0.2);
    CHECK(a.p_prep < 1.0);
    CHECK(a.ci_lo <= a.p_prep);
    CHECK(a.ci_hi >= a.p_prep);
    CHECK(a.ci_hi - a.ci_lo < 0.05);
    CHECK(a.qubit_rate_x == Approx(a.mean_wx / 16.0));

    PrepRateStats z = estimate_prep_rate(code, PrepTarget::logical_zero,
                                         NoiseModel{0.0}, 1000, 3, 1);
    CHECK(z.p_prep == 1.0);
    CHECK(z.mean_wx == 0.0);
    CHECK(z.mean_wz == 0.0);
}

TEST_CASE("argument validation") {
    std::mt19937_64 rng(0);
    CHECK_THROWS_AS(prepare_noisy(3, 0, PrepTarget::generic, NoiseModel{0}, rng),
                    UsageError);
    CHECK_THROWS_AS(prepare_noisy(3, 9, PrepTarget::generic, NoiseModel{0}, rng),
                    UsageError);
    CHECK_THROWS_AS(prepare_noisy(3, 1, PrepTarget::logical_plus, NoiseModel{0}, rng),
                    UsageError);
    CHECK_THROWS_AS(prepare_noisy(3, 3, PrepTarget::generic, NoiseModel{1.5}, rng),
                    UsageError);
    CHECK_THROWS_AS(prepare_accepted(3, 3, PrepTarget::generic, NoiseModel{0}, rng, 0),
                    ResourceBoundError);
}
