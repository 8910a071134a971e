#include "qpolar/steane_ec.hpp"

#include <algorithm>
#include <cmath>

#include "qpolar/channel.hpp"
#include "qpolar/errors.hpp"
#include "qpolar/parallel.hpp"
#include "qpolar/reliability.hpp"
#include "qpolar/rng.hpp"

namespace qpolar {

namespace {

const PrepOptions kFastPrep{true, false};

}

EcTrialRecord mc_x_trial(const Q1Code& code, NoiseModel noise,
                         std::mt19937_64& rng, ScDecoder& dec,
                         uint64_t max_prep_attempts) {
    size_t nn = code.N();
    size_t i0 = (size_t)code.i - 1;          // 0-based information position
    uint64_t thr = bernoulli_threshold(noise.p);

    PrepOutcome data = prepare_accepted(code.n, code.i, PrepTarget::logical_zero,
                                        noise, rng, max_prep_attempts, kFastPrep);
    PrepOutcome anc = prepare_accepted(code.n, code.i, PrepTarget::logical_plus,
                                       noise, rng, max_prep_attempts, kFastPrep);
    int w = data.logical_value;

    BitVec ex = data.frame.e_x, ez = data.frame.e_z;
    BitVec etot = anc.frame.e_x;             // ancilla prep X errors
    etot.xor_with(ex);                       // data X errors copy onto the ancilla
    ez.xor_with(anc.frame.e_z);              // ancilla Z errors copy back to data
    for (size_t q = 0; q < nn; q++) {
        if (thr && rng() < thr) {            // CNOT(data -> ancilla) fault
            uint64_t r = rng() % 15 + 1;
            if ((r >> 3) & 1) ex.flip(q);    // X on data control
            if ((r >> 2) & 1) ez.flip(q);    // Z on data control
            if ((r >> 1) & 1) etot.flip(q);  // X on ancilla target
            // Z on ancilla target is invisible to the Z readout
        }
        if (thr && rng() < thr) etot.flip(q);  // ancilla readout flip
    }

    // Observed ancilla readout: random codeword with frozen prefix u XOR u',
    // fresh information bit a1 and fresh x bits, XOR the error total.
    BitVec cw = BitVec::make(nn);
    for (size_t t = 0; t < i0; t++)
        if (data.u.get(t) ^ anc.u.get(t)) cw.flip(t);
    int a1 = random_bit(rng);
    if (a1) cw.flip(i0);
    for (size_t t = i0 + 1; t < nn; t++)
        if (random_bit(rng)) cw.flip(t);
    polar_transform(cw);
    BitVec m = cw;
    m.xor_with(etot);

    DecodeTask task;
    task.n = code.n;
    task.llr.resize(nn);
    task.frozen_mask = BitVec::make(nn);
    task.frozen_values = BitVec::make(nn);
    for (size_t t = 0; t < i0; t++) {
        task.frozen_mask.flip(t);
        if (data.u.get(t) ^ anc.u.get(t)) task.frozen_values.flip(t);
    }
    for (size_t t = 0; t < nn; t++) task.llr[t] = m.get(t) ? -1.0 : 1.0;
    DecodeResult d1 = dec.sc_decode(task);
    int ahat = d1.u_hat.get(i0);

    // Correction: XOR off the decoded codeword with the x part zeroed; the
    // leftover x-part difference is an X stabilizer folded into the frame.
    BitVec corr = BitVec::make(nn);
    for (size_t t = 0; t < i0; t++)
        if (data.u.get(t) ^ anc.u.get(t)) corr.flip(t);
    if (ahat) corr.flip(i0);
    polar_transform(corr);
    corr.xor_with(m);
    ex.xor_with(corr);

    // Destructive Z readout of the data block.
    BitVec cw2 = BitVec::make(nn);
    for (size_t t = 0; t < i0; t++)
        if (data.u.get(t)) cw2.flip(t);
    if (w) cw2.flip(i0);
    for (size_t t = i0 + 1; t < nn; t++)
        if (random_bit(rng)) cw2.flip(t);
    polar_transform(cw2);
    BitVec m2 = cw2;
    m2.xor_with(ex);
    for (size_t q = 0; q < nn; q++)
        if (thr && rng() < thr) m2.flip(q);

    DecodeTask task2;
    task2.n = code.n;
    task2.llr.resize(nn);
    task2.frozen_mask = BitVec::make(nn);
    task2.frozen_values = BitVec::make(nn);
    for (size_t t = 0; t < i0; t++) {
        task2.frozen_mask.flip(t);
        if (data.u.get(t)) task2.frozen_values.flip(t);
    }
    for (size_t t = 0; t < nn; t++) task2.llr[t] = m2.get(t) ? -1.0 : 1.0;
    DecodeResult d2 = dec.sc_decode(task2);
    int what = d2.u_hat.get(i0);

    EcTrialRecord rec;
    rec.basis = 'X';
    rec.decode1_success = (ahat == a1);
    rec.decode2_success = (what == (w ^ a1 ^ ahat));
    rec.logical_error = (what != w);
    return rec;
}

EcTrialRecord mc_z_trial(const Q1Code& code, NoiseModel noise,
                         std::mt19937_64& rng, ScDecoder& dec,
                         uint64_t max_prep_attempts) {
    size_t nn = code.N();
    size_t i0 = (size_t)code.i - 1;
    uint64_t thr = bernoulli_threshold(noise.p);

    PrepOutcome data = prepare_accepted(code.n, code.i, PrepTarget::logical_plus,
                                        noise, rng, max_prep_attempts, kFastPrep);
    PrepOutcome anc = prepare_accepted(code.n, code.i, PrepTarget::logical_zero,
                                       noise, rng, max_prep_attempts, kFastPrep);
    int w = data.logical_value;              // logical X eigenvalue bit

    BitVec ex = data.frame.e_x, ez = data.frame.e_z;
    BitVec etot = anc.frame.e_z;             // ancilla prep Z errors
    etot.xor_with(ez);                       // data Z errors copy onto the ancilla
    ex.xor_with(anc.frame.e_x);              // ancilla X errors copy to the data target
    for (size_t q = 0; q < nn; q++) {
        if (thr && rng() < thr) {            // CNOT(ancilla -> data) fault
            uint64_t r = rng() % 15 + 1;
            if ((r >> 2) & 1) etot.flip(q);  // Z on ancilla control
            if ((r >> 1) & 1) ex.flip(q);    // X on data target
            if (r & 1) ez.flip(q);           // Z on data target
            // X on ancilla control is invisible to the X readout
        }
        if (thr && rng() < thr) etot.flip(q);  // ancilla X-readout flip
    }

    // Observed ancilla X readout: transpose-orientation codeword with fresh z
    // bits, fresh information bit a1, frozen suffix v XOR v'.
    BitVec cw = BitVec::make(nn);
    for (size_t t = 0; t < i0; t++)
        if (random_bit(rng)) cw.flip(t);
    int a1 = random_bit(rng);
    if (a1) cw.flip(i0);
    for (size_t t = i0 + 1; t < nn; t++)
        if (data.v.get(t - i0) ^ anc.v.get(t - i0 - 1)) cw.flip(t);
    polar_transform_transpose(cw);
    BitVec m = cw;
    m.xor_with(etot);

    DecodeTask task;
    task.n = code.n;
    task.orientation = DecodeOrientation::reversed;
    task.llr.resize(nn);
    task.frozen_mask = BitVec::make(nn);
    task.frozen_values = BitVec::make(nn);
    for (size_t t = i0 + 1; t < nn; t++) {
        task.frozen_mask.flip(t);
        if (data.v.get(t - i0) ^ anc.v.get(t - i0 - 1)) task.frozen_values.flip(t);
    }
    for (size_t t = 0; t < nn; t++) task.llr[t] = m.get(t) ? -1.0 : 1.0;
    DecodeResult d1 = dec.sc_decode(task);
    int ahat = d1.u_hat.get(i0);

    BitVec corr = BitVec::make(nn);
    if (ahat) corr.flip(i0);
    for (size_t t = i0 + 1; t < nn; t++)
        if (data.v.get(t - i0) ^ anc.v.get(t - i0 - 1)) corr.flip(t);
    polar_transform_transpose(corr);
    corr.xor_with(m);
    ez.xor_with(corr);

    // Destructive X readout of the data block.
    BitVec cw2 = BitVec::make(nn);
    for (size_t t = 0; t < i0; t++)
        if (random_bit(rng)) cw2.flip(t);
    if (w) cw2.flip(i0);
    for (size_t t = i0 + 1; t < nn; t++)
        if (data.v.get(t - i0)) cw2.flip(t);
    polar_transform_transpose(cw2);
    BitVec m2 = cw2;
    m2.xor_with(ez);
    for (size_t q = 0; q < nn; q++)
        if (thr && rng() < thr) m2.flip(q);

    DecodeTask task2;
    task2.n = code.n;
    task2.orientation = DecodeOrientation::reversed;
    task2.llr.resize(nn);
    task2.frozen_mask = BitVec::make(nn);
    task2.frozen_values = BitVec::make(nn);
    for (size_t t = i0 + 1; t < nn; t++) {
        task2.frozen_mask.flip(t);
        if (data.v.get(t - i0)) task2.frozen_values.flip(t);
    }
    for (size_t t = 0; t < nn; t++) task2.llr[t] = m2.get(t) ? -1.0 : 1.0;
    DecodeResult d2 = dec.sc_decode(task2);
    int what = d2.u_hat.get(i0);

    EcTrialRecord rec;
    rec.basis = 'Z';
    rec.decode1_success = (ahat == a1);
    rec.decode2_success = (what == (w ^ a1 ^ ahat));
    rec.logical_error = (what != w);
    return rec;
}

namespace {

struct SideResult {
    uint64_t trials = 0, failures = 0;
    bool censored = false;
    double rate = 0;
};

SideResult run_side(const Q1Code& code, NoiseModel noise, char side, uint64_t f,
                    uint64_t max_trials, uint64_t seed, int threads) {
    const uint64_t chunk_trials = 64;
    const char* stream = (side == 'X') ? "ec-x" : "ec-z";
    size_t nchunks = (size_t)((max_trials + chunk_trials - 1) / chunk_trials);

    struct ChunkRes {
        uint32_t trials = 0;
        std::vector<uint32_t> fail_offsets;
        bool resource_hit = false;
    };

    SideResult res;
    int nt = resolve_threads(threads);
    size_t wave = std::max<size_t>((size_t)nt, 1);
    std::vector<ChunkRes> results(wave);

    uint64_t cum_fail = 0, cum_trials = 0;
    for (size_t base = 0; base < nchunks;) {
        size_t count = std::min(wave, nchunks - base);
        parallel_for_chunks(count, threads, [&](size_t widx) {
            size_t c = base + widx;
            ChunkRes& out = results[widx];
            out = ChunkRes{};
            auto rng = substream(seed, stream, c);
            ScDecoder dec(code.n);
            uint64_t lo = (uint64_t)c * chunk_trials;
            uint64_t hi = std::min<uint64_t>(lo + chunk_trials, max_trials);
            for (uint64_t t = lo; t < hi; t++) {
                EcTrialRecord rec;
                try {
                    rec = (side == 'X') ? mc_x_trial(code, noise, rng, dec)
                                        : mc_z_trial(code, noise, rng, dec);
                } catch (const ResourceBoundError&) {
                    out.resource_hit = true;
                    break;
                }
                out.trials++;
                if (rec.logical_error) out.fail_offsets.push_back((uint32_t)(t - lo));
            }
        });
        bool stop = false;
        for (size_t widx = 0; widx < count && !stop; widx++) {
            const ChunkRes& cr = results[widx];
            for (uint32_t offs : cr.fail_offsets) {
                cum_fail++;
                if (cum_fail >= f) {
                    cum_trials = (uint64_t)(base + widx) * chunk_trials + offs + 1;
                    stop = true;
                    break;
                }
            }
            if (!stop) {
                cum_trials = (uint64_t)(base + widx) * chunk_trials + cr.trials;
                if (cr.resource_hit) {
                    res.censored = true;
                    stop = true;
                }
            }
        }
        base += count;
        if (stop) break;
    }

    res.trials = cum_trials;
    res.failures = cum_fail;
    if (cum_fail >= f && !res.censored) {
        res.rate = (double)f / (double)cum_trials;
    } else {
        res.censored = true;
        res.rate = cum_trials ? (double)cum_fail / (double)cum_trials : 0.0;
    }
    return res;
}

}

LerEstimate estimate_ler_mc(const Q1Code& code, NoiseModel noise, uint64_t f,
                            uint64_t max_trials, uint64_t seed, int threads) {
    if (f < 1) throw UsageError("estimate_ler_mc: f must be positive");
    SideResult x = run_side(code, noise, 'X', f, max_trials, seed, threads);
    SideResult z = run_side(code, noise, 'Z', f, max_trials, seed, threads);
    LerEstimate est;
    est.p_x_l = x.rate;
    est.p_z_l = z.rate;
    est.p_e_l = x.rate + z.rate - x.rate * z.rate;
    est.trials_x = x.trials;
    est.trials_z = z.trials;
    est.failures_x = x.failures;
    est.failures_z = z.failures;
    est.failures_target = f;
    est.censored = x.censored || z.censored;
    return est;
}

namespace {

// Mean per-qubit residual error rates over `runs` accepted preparations,
// measured on the canonical stabilizer-equivalent representative: raw frames
// carry gauge weight (stabilizer components act trivially and do not alter
// syndromes or decoding), so the canonical form is the well-defined rate.
void accepted_frame_rates(const Q1Code& code, PrepTarget target, NoiseModel noise,
                          uint64_t runs, uint64_t seed, int threads,
                          double* rate_x, double* rate_z) {
    const uint64_t chunk_accepted = 256;
    size_t chunks = (size_t)((runs + chunk_accepted - 1) / chunk_accepted);
    struct Partial {
        uint64_t swx = 0, swz = 0;
    };
    std::vector<Partial> partial(chunks);
    parallel_for_chunks(chunks, threads, [&](size_t c) {
        auto rng = substream(seed, "de-prep", c, (uint64_t)target);
        uint64_t lo = (uint64_t)c * chunk_accepted;
        uint64_t hi = std::min<uint64_t>(lo + chunk_accepted, runs);
        for (uint64_t t = lo; t < hi; t++) {
            PrepOutcome out = prepare_accepted(code.n, code.i, target, noise, rng,
                                               10000000, PrepOptions{true, true});
            partial[c].swx += weight(out.rep_x);
            partial[c].swz += weight(out.rep_z);
        }
    });
    uint64_t swx = 0, swz = 0;
    for (const Partial& pt : partial) { swx += pt.swx; swz += pt.swz; }
    *rate_x = (double)swx / ((double)runs * (double)code.N());
    *rate_z = (double)swz / ((double)runs * (double)code.N());
}

double de_position_rate(const Q1Code& code, double crossover, size_t pos0,
                        uint64_t pop, uint64_t seed, int threads) {
    if (crossover <= 0) return 0;
    auto pe = bsc_reliabilities_de(code.n, as_mixture(BscChannel{crossover}), pop,
                                   seed, threads, nullptr);
    return pe[pos0];
}

}

LerEstimate estimate_ler_de(const Q1Code& code, NoiseModel noise,
                            uint64_t prep_runs, uint64_t de_pop, uint64_t seed,
                            int threads) {
    LerEstimate est;
    double p = noise.p;
    if (p <= 0) return est;
    uint64_t runs = prep_runs ? prep_runs : (uint64_t)std::ceil(100.0 / p);

    double px_zero, pz_zero, px_plus, pz_plus;
    accepted_frame_rates(code, PrepTarget::logical_zero, noise, runs, seed,
                         threads, &px_zero, &pz_zero);
    accepted_frame_rates(code, PrepTarget::logical_plus, noise, runs, seed,
                         threads, &px_plus, &pz_plus);

    double cnot = 8.0 * p / 15.0;
    // Decoder 1 sees both preparations' residuals, one CNOT side and one
    // readout; decoder 2 (assuming decoder 1 succeeded) sees the ancilla
    // residual, one CNOT side and two readouts.
    double in1x = 1 - (1 - px_zero) * (1 - px_plus) * (1 - cnot) * (1 - p);
    double in2x = 1 - (1 - px_plus) * (1 - cnot) * (1 - p) * (1 - p);
    double in1z = 1 - (1 - pz_plus) * (1 - pz_zero) * (1 - cnot) * (1 - p);
    double in2z = 1 - (1 - pz_zero) * (1 - cnot) * (1 - p) * (1 - p);

    size_t nn = code.N();
    // The reliability profile is indexed in the LSB-first labeling, while the
    // decoder consumes leaves in natural label order; the genie-aided failure
    // probability of the decoded information position therefore lives at the
    // bit-reversed profile index.  (The N=16 positions are bit-reversal
    // palindromes, so this only matters at N>=64.)
    auto bitrev = [&](size_t v) {
        size_t r = 0;
        for (int b = 0; b < code.n; b++) r |= ((v >> b) & 1u) << (code.n - 1 - b);
        return r;
    };
    size_t pos_x = bitrev((size_t)code.i - 1);  // standard-orientation decodes
    size_t pos_z = bitrev(nn - (size_t)code.i); // transpose orientation, pi(i)
    uint64_t s1 = substream(seed, "de-ler", 1)();
    uint64_t s2 = substream(seed, "de-ler", 2)();
    uint64_t s3 = substream(seed, "de-ler", 3)();
    uint64_t s4 = substream(seed, "de-ler", 4)();
    double o1x = de_position_rate(code, in1x, pos_x, de_pop, s1, threads);
    double o2x = de_position_rate(code, in2x, pos_x, de_pop, s2, threads);
    double o1z = de_position_rate(code, in1z, pos_z, de_pop, s3, threads);
    double o2z = de_position_rate(code, in2z, pos_z, de_pop, s4, threads);

    est.p_x_l = 1 - ((1 - o1x) * (1 - o2x) + o1x * o2x);
    est.p_z_l = 1 - ((1 - o1z) * (1 - o2z) + o1z * o2z);
    est.p_e_l = est.p_x_l + est.p_z_l - est.p_x_l * est.p_z_l;
    return est;
}

}
