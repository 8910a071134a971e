#include "qpolar/prep_sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "qpolar/errors.hpp"
#include "qpolar/parallel.hpp"
#include "qpolar/rng.hpp"

namespace qpolar {

namespace {

struct F4 {
    uint8_t xc = 0, zc = 0, xt = 0, zt = 0;
};

struct Engine {
    int n = 0, j = 0;
    size_t N = 0;
    double p = 0;
    uint64_t thr = 0;
    std::mt19937_64* rng = nullptr;
    const PrepSimHooks* hooks = nullptr;
    bool track_reps = true;

    BitVec ex, ez, rx, rz;
    // Per-block frozen data in flat ping-pong buffers: at each stage every
    // block carries ip Z-frozen and vlen X-frozen bits (ip + vlen = block
    // size), stored contiguously block after block.  Flat storage plus the
    // scratch buffers below keep the rejection-dominated hot path free of
    // heap allocation; the engine itself is reused across attempts.
    std::vector<uint8_t> ubuf, vbuf, unext, vnext;
    size_t ip = 0, vlen = 0;
    uint64_t T = 0, components = 0;
    size_t outcome_cursor = 0;

    std::vector<uint8_t> eanc, ranc, mprime;
    BitVec mv, av;

    // Fault sampling via geometric skipping (components are iid Bernoulli, so
    // the gap to the next fault is geometric), and pooled single random bits:
    // together these replace the one-RNG-call-per-component pattern, which
    // dominated the cost of rejection-heavy parameter points.
    double log1mp = 0;
    uint64_t skip_left = 0;
    uint64_t bitpool = 0;
    int bits_left = 0;

    static void reset_bits(BitVec& b, size_t nb) {
        size_t wds = (nb + 63) / 64;
        b.nbits = nb;
        if (b.w.size() != wds) b.w.resize(wds);
        for (size_t t = 0; t < wds; t++) b.w[t] = 0;
    }

    void draw_skip() {
        if (log1mp == 0.0) { skip_left = ~0ull; return; }   // p below resolution
        double u;
        do { u = uniform01(*rng); } while (u <= 0.0);
        double s = std::floor(std::log(u) / log1mp);
        skip_left = (s >= 9.0e18) ? ~0ull : (uint64_t)s;
    }

    bool rbit() {
        if (bits_left == 0) { bitpool = (*rng)(); bits_left = 64; }
        bits_left--;
        bool b = (bitpool >> 63) != 0;
        bitpool <<= 1;
        return b;
    }

    // Sample (and/or inject) the fault of one component.
    F4 comp_fault(int level, int block, int pair, int comp, bool two_qubit) {
        components++;
        F4 f;
        if (hooks && hooks->faults) {
            for (const InjectedFault& inj : *hooks->faults) {
                if (inj.level == level && inj.block == block && inj.pair == pair &&
                    inj.component == comp) {
                    f.xc ^= inj.xc; f.zc ^= inj.zc; f.xt ^= inj.xt; f.zt ^= inj.zt;
                    T++;
                }
            }
        }
        bool sample = thr != 0 && !(hooks && hooks->no_random_faults);
        if (sample) {
            if (skip_left == 0) {
                T++;
                if (two_qubit) {
                    uint64_t r = (*rng)() % 15 + 1;
                    f.xc ^= (uint8_t)((r >> 3) & 1);
                    f.zc ^= (uint8_t)((r >> 2) & 1);
                    f.xt ^= (uint8_t)((r >> 1) & 1);
                    f.zt ^= (uint8_t)(r & 1);
                } else {
                    f.xc ^= 1;
                }
                draw_skip();
            } else {
                skip_left--;
            }
        }
        return f;
    }

    // Z x Z merge of blocks (2*blk, 2*blk+1) at level k.  The gadget per pair
    // (q1, q2) is: ancilla |0>, CNOT(q1 -> anc), CNOT(q2 -> anc), Z-readout.
    bool zz_merge(int k, int blk, size_t off, size_t half) {
        const uint8_t* u1 = ubuf.data() + 2 * (size_t)blk * ip;
        const uint8_t* u2 = u1 + ip;
        const uint8_t* v1 = vbuf.data() + 2 * (size_t)blk * vlen;
        const uint8_t* v2 = v1 + vlen;

        eanc.resize(half);          // every entry is written below
        if (track_reps) ranc.resize(half);
        bool fast = hooks == nullptr;
        for (size_t jj = 0; jj < half; jj++) {
            size_t q1 = off + jj, q2 = off + half + jj;
            // Fault-free gadget: the skip counter covers all four components.
            if (fast && skip_left >= 4) {
                skip_left -= 4;
                components += 4;
                eanc[jj] = (uint8_t)ex.get(q1) ^ (uint8_t)ex.get(q2);
                if (track_reps) {
                    ranc[jj] = (uint8_t)rx.get(q1) ^ (uint8_t)rx.get(q2);
                    if (rz.get(q1) && rz.get(q2)) { rz.flip(q1); rz.flip(q2); }
                }
                continue;
            }
            F4 fi = comp_fault(k, blk, (int)jj, 0, false);
            F4 c1 = comp_fault(k, blk, (int)jj, 1, true);
            F4 c2 = comp_fault(k, blk, (int)jj, 2, true);
            F4 fm = comp_fault(k, blk, (int)jj, 3, false);
            // X errors reaching the ancilla readout: init fault, both data
            // inputs (copied control -> target), target-side CNOT faults,
            // readout flip.
            eanc[jj] = fi.xc ^ (uint8_t)ex.get(q1) ^ c1.xt ^ (uint8_t)ex.get(q2) ^
                       c2.xt ^ fm.xc;
            if (track_reps)
                ranc[jj] = fi.xc ^ (uint8_t)rx.get(q1) ^ c1.xt ^ (uint8_t)rx.get(q2) ^
                           c2.xt ^ fm.xc;
            // Residual faults on the data wires: control-side CNOT faults stay
            // put; a Z on the ancilla between the CNOTs copies onto q2.
            if (c1.xc) { ex.flip(q1); if (track_reps) rx.flip(q1); }
            if (c2.xc) { ex.flip(q2); if (track_reps) rx.flip(q2); }
            if (c1.zc) { ez.flip(q1); if (track_reps) rz.flip(q1); }
            if (c1.zt ^ c2.zc) { ez.flip(q2); if (track_reps) rz.flip(q2); }
            // Z_q1 Z_q2 just became a stabilizer; drop rep Z weight when both set.
            if (track_reps && rz.get(q1) && rz.get(q2)) { rz.flip(q1); rz.flip(q2); }
        }

        mprime.resize(half);        // every entry is written below
        if (hooks && hooks->outcomes) {
            for (size_t jj = 0; jj < half; jj++)
                mprime[jj] = (*hooks->outcomes)[outcome_cursor++];
        } else {
            // Noiseless law m = P(u', x) with fresh uniform x, then XOR the
            // ancilla error total.
            reset_bits(mv, half);
            for (size_t t = 0; t < ip; t++)
                if (u1[t] ^ u2[t]) mv.flip(t);
            for (size_t t = ip; t < half; t++)
                if (rbit()) mv.flip(t);
            polar_transform(mv);
            for (size_t jj = 0; jj < half; jj++)
                mprime[jj] = (uint8_t)mv.get(jj) ^ eanc[jj];
        }

        // Error detection: P(m') must reproduce u' on the Z-frozen prefix.
        BitVec& a = av;
        reset_bits(a, half);
        for (size_t jj = 0; jj < half; jj++)
            if (mprime[jj]) a.flip(jj);
        polar_transform(a);
        for (size_t t = 0; t < ip; t++)
            if ((uint8_t)a.get(t) != (u1[t] ^ u2[t])) return false;

        // Accepted: read x-hat, fold the undetected ancilla total onto the
        // first half, merge frozen data (u', x-hat, u2) and v1 ^ v2.
        for (size_t jj = 0; jj < half; jj++)
            if (eanc[jj]) ex.flip(off + jj);
        if (track_reps) {
            // (ranc, ranc) across the two halves is an X stabilizer of the
            // merged block; fold onto whichever half stays lighter.
            int w1 = 0, w2 = 0;
            for (size_t jj = 0; jj < half; jj++) {
                w1 += ((uint8_t)rx.get(off + jj) ^ ranc[jj]) + (uint8_t)rx.get(off + half + jj);
                w2 += (uint8_t)rx.get(off + jj) + ((uint8_t)rx.get(off + half + jj) ^ ranc[jj]);
            }
            size_t base = (w1 <= w2) ? off : off + half;
            for (size_t jj = 0; jj < half; jj++)
                if (ranc[jj]) rx.flip(base + jj);
        }

        uint8_t* mu = unext.data() + (size_t)blk * (half + ip);
        uint8_t* mv2 = vnext.data() + (size_t)blk * vlen;
        for (size_t t = 0; t < ip; t++) mu[t] = u1[t] ^ u2[t];
        for (size_t t = ip; t < half; t++) mu[t] = (uint8_t)a.get(t);
        for (size_t t = 0; t < ip; t++) mu[half + t] = u2[t];
        for (size_t t = 0; t < vlen; t++) mv2[t] = v1[t] ^ v2[t];
        return true;
    }

    // X x X merge; gadget per pair: ancilla |+>, CNOT(anc -> q1),
    // CNOT(anc -> q2), X-readout.  Exact dual of zz_merge.
    bool xx_merge(int k, int blk, size_t off, size_t half) {
        const uint8_t* u1 = ubuf.data() + 2 * (size_t)blk * ip;
        const uint8_t* u2 = u1 + ip;
        const uint8_t* v1 = vbuf.data() + 2 * (size_t)blk * vlen;
        const uint8_t* v2 = v1 + vlen;

        eanc.resize(half);          // every entry is written below
        if (track_reps) ranc.resize(half);
        bool fast = hooks == nullptr;
        for (size_t jj = 0; jj < half; jj++) {
            size_t q1 = off + jj, q2 = off + half + jj;
            if (fast && skip_left >= 4) {
                skip_left -= 4;
                components += 4;
                eanc[jj] = (uint8_t)ez.get(q1) ^ (uint8_t)ez.get(q2);
                if (track_reps) {
                    ranc[jj] = (uint8_t)rz.get(q1) ^ (uint8_t)rz.get(q2);
                    if (rx.get(q1) && rx.get(q2)) { rx.flip(q1); rx.flip(q2); }
                }
                continue;
            }
            F4 fi = comp_fault(k, blk, (int)jj, 0, false);   // Z flip on |+> init
            F4 c1 = comp_fault(k, blk, (int)jj, 1, true);    // control = ancilla
            F4 c2 = comp_fault(k, blk, (int)jj, 2, true);
            F4 fm = comp_fault(k, blk, (int)jj, 3, false);   // X-readout flip
            eanc[jj] = fi.xc ^ (uint8_t)ez.get(q1) ^ c1.zc ^ (uint8_t)ez.get(q2) ^
                       c2.zc ^ fm.xc;
            if (track_reps)
                ranc[jj] = fi.xc ^ (uint8_t)rz.get(q1) ^ c1.zc ^ (uint8_t)rz.get(q2) ^
                           c2.zc ^ fm.xc;
            // An X on the ancilla between the CNOTs copies onto q2;
            // target-side faults stay on the data wires.
            if (c1.xt) { ex.flip(q1); if (track_reps) rx.flip(q1); }
            if (c1.xc ^ c2.xt) { ex.flip(q2); if (track_reps) rx.flip(q2); }
            if (c1.zt) { ez.flip(q1); if (track_reps) rz.flip(q1); }
            if (c2.zt) { ez.flip(q2); if (track_reps) rz.flip(q2); }
            if (track_reps && rx.get(q1) && rx.get(q2)) { rx.flip(q1); rx.flip(q2); }
        }

        mprime.resize(half);        // every entry is written below
        if (hooks && hooks->outcomes) {
            for (size_t jj = 0; jj < half; jj++)
                mprime[jj] = (*hooks->outcomes)[outcome_cursor++];
        } else {
            // Noiseless law m = P^T(z, v') with fresh uniform z.
            reset_bits(mv, half);
            for (size_t t = 0; t < ip; t++)
                if (rbit()) mv.flip(t);
            for (size_t t = ip; t < half; t++)
                if (v1[t - ip] ^ v2[t - ip]) mv.flip(t);
            polar_transform_transpose(mv);
            for (size_t jj = 0; jj < half; jj++)
                mprime[jj] = (uint8_t)mv.get(jj) ^ eanc[jj];
        }

        BitVec& a = av;
        reset_bits(a, half);
        for (size_t jj = 0; jj < half; jj++)
            if (mprime[jj]) a.flip(jj);
        polar_transform_transpose(a);
        for (size_t t = ip; t < half; t++)
            if ((uint8_t)a.get(t) != (v1[t - ip] ^ v2[t - ip])) return false;

        for (size_t jj = 0; jj < half; jj++)
            if (eanc[jj]) ez.flip(off + half + jj);
        if (track_reps) {
            int w1 = 0, w2 = 0;
            for (size_t jj = 0; jj < half; jj++) {
                w1 += ((uint8_t)rz.get(off + jj) ^ ranc[jj]) + (uint8_t)rz.get(off + half + jj);
                w2 += (uint8_t)rz.get(off + jj) + ((uint8_t)rz.get(off + half + jj) ^ ranc[jj]);
            }
            size_t base = (w2 <= w1) ? off + half : off;
            for (size_t jj = 0; jj < half; jj++)
                if (ranc[jj]) rz.flip(base + jj);
        }

        uint8_t* mu = unext.data() + (size_t)blk * ip;
        uint8_t* mv2 = vnext.data() + (size_t)blk * (2 * vlen + ip);
        for (size_t t = 0; t < ip; t++) mu[t] = u1[t] ^ u2[t];
        for (size_t t = 0; t < vlen; t++) mv2[t] = v1[t];
        for (size_t t = 0; t < ip; t++) mv2[vlen + t] = (uint8_t)a.get(t);
        for (size_t t = 0; t < vlen; t++) mv2[vlen + ip + t] = v1[t] ^ v2[t];
        return true;
    }

    PrepOutcome run(PrepTarget target, int skip) {
        reset_bits(ex, N); reset_bits(ez, N);
        reset_bits(rx, N); reset_bits(rz, N);
        T = 0; components = 0; outcome_cursor = 0;
        bits_left = 0;
        skip_left = ~0ull;
        if (thr != 0 && !(hooks && hooks->no_random_faults)) draw_skip();

        // Qubit initializations in the Z basis (always all N of them).
        for (size_t q = 0; q < N; q++) {
            if (hooks == nullptr && skip_left > 0) {
                size_t take = (size_t)std::min<uint64_t>(skip_left, N - q);
                skip_left -= take;
                components += take;
                q += take - 1;
                continue;
            }
            F4 f = comp_fault(0, (int)q, 0, 0, false);
            if (f.xc) { ex.flip(q); if (track_reps) rx.flip(q); }
        }

        // Blocks after the skipped leading Z x Z levels are fully Z-frozen
        // all-zero registers.
        ip = (size_t)1 << skip;
        vlen = 0;
        ubuf.assign(N, 0);
        vbuf.clear();

        unsigned bits = (unsigned)(j - 1);
        bool ok = true;
        for (int k = skip + 1; k <= n && ok; k++) {
            size_t kk = (size_t)1 << k, half = kk / 2, nb = N >> k;
            int bk = (int)((bits >> (k - 1)) & 1);
            size_t ip2 = bk ? half + ip : ip;
            size_t vlen2 = bk ? vlen : 2 * vlen + ip;
            unext.resize(nb * ip2);     // merges write every entry
            vnext.resize(nb * vlen2);
            for (size_t blk = 0; blk < nb && ok; blk++) {
                size_t off = blk * kk;
                ok = bk ? zz_merge(k, (int)blk, off, half)
                        : xx_merge(k, (int)blk, off, half);
            }
            if (ok) {
                ubuf.swap(unext);
                vbuf.swap(vnext);
                ip = ip2;
                vlen = vlen2;
            }
        }

        PrepOutcome out;
        out.fault_count = T;
        out.component_count = components;
        out.levels_skipped = skip;
        if (!ok) return out;

        out.accepted = true;
        out.u = BitVec::make(ip);
        for (size_t t = 0; t < ip; t++) if (ubuf[t]) out.u.flip(t);
        out.v = BitVec::make(vlen);
        for (size_t t = 0; t < vlen; t++) if (vbuf[t]) out.v.flip(t);
        out.frame.e_x = ex;
        out.frame.e_z = ez;
        if (track_reps) { out.rep_x = rx; out.rep_z = rz; }
        if (target == PrepTarget::logical_plus) out.logical_value = vlen == 0 ? 0 : vbuf[0];
        else out.logical_value = ip == 0 ? 0 : ubuf[ip - 1];
        return out;
    }
};

}

PrepOutcome prepare_noisy(int n, int i, PrepTarget target, NoiseModel noise,
                          std::mt19937_64& rng, const PrepOptions& opts,
                          const PrepSimHooks* hooks) {
    size_t nn = (size_t)1 << n;
    if (i < 1 || (size_t)i > nn) throw UsageError("prepare_noisy: i out of range");
    if (target == PrepTarget::logical_plus && i < 2)
        throw UsageError("prepare_noisy: logical_plus needs i >= 2");
    if (noise.p < 0 || noise.p > 1) throw UsageError("prepare_noisy: p out of [0,1]");

    static thread_local Engine e;
    e.n = n;
    e.N = nn;
    e.j = (target == PrepTarget::logical_plus) ? i - 1 : i;
    e.p = noise.p;
    e.thr = bernoulli_threshold(noise.p);
    e.log1mp = std::log1p(-noise.p);
    e.rng = &rng;
    e.hooks = hooks;
    e.track_reps = opts.track_reps;

    int skip = 0;
    if (opts.skip_leading && target != PrepTarget::logical_plus)
        skip = leading_zz_levels_skippable(Q1Code{n, i}, target);
    return e.run(target, skip);
}

PrepOutcome prepare_noiseless(int n, int i, PrepTarget target, std::mt19937_64& rng) {
    return prepare_noisy(n, i, target, NoiseModel{0.0}, rng);
}

PrepOutcome prepare_accepted(int n, int i, PrepTarget target, NoiseModel noise,
                             std::mt19937_64& rng, uint64_t max_attempts,
                             const PrepOptions& opts) {
    for (uint64_t t = 0; t < max_attempts; t++) {
        PrepOutcome out = prepare_noisy(n, i, target, noise, rng, opts);
        if (out.accepted) return out;
    }
    throw ResourceBoundError("prepare_accepted: attempt budget exhausted");
}

PrepRateStats estimate_prep_rate(const Q1Code& code, PrepTarget target,
                                 NoiseModel noise, uint64_t attempts,
                                 uint64_t seed, int threads,
                                 const PrepOptions& opts) {
    if (attempts == 0) throw UsageError("estimate_prep_rate: attempts must be positive");
    const uint64_t chunk_size = 1024;
    size_t chunks = (size_t)((attempts + chunk_size - 1) / chunk_size);
    struct Partial {
        uint64_t acc = 0, swx = 0, swz = 0;
    };
    std::vector<Partial> partial(chunks);
    uint64_t ttag = (uint64_t)target;

    parallel_for_chunks(chunks, threads, [&](size_t c) {
        auto rng = substream(seed, "prep", c, ttag);
        uint64_t lo = (uint64_t)c * chunk_size;
        uint64_t hi = std::min<uint64_t>(lo + chunk_size, attempts);
        Partial& pt = partial[c];
        for (uint64_t t = lo; t < hi; t++) {
            PrepOutcome out = prepare_noisy(code.n, code.i, target, noise, rng, opts);
            if (out.accepted) {
                pt.acc++;
                pt.swx += weight(out.frame.e_x);
                pt.swz += weight(out.frame.e_z);
            }
        }
    });

    uint64_t acc = 0, swx = 0, swz = 0;
    for (const Partial& pt : partial) { acc += pt.acc; swx += pt.swx; swz += pt.swz; }

    PrepRateStats st;
    st.attempts = attempts;
    st.accepted = acc;
    double r = (double)attempts;
    double phat = (double)acc / r;
    st.p_prep = phat;
    const double z = 1.959963984540054;
    double z2 = z * z;
    double denom = 1 + z2 / r;
    double center = (phat + z2 / (2 * r)) / denom;
    double hw = (z / denom) * std::sqrt(phat * (1 - phat) / r + z2 / (4 * r * r));
    st.ci_lo = std::max(0.0, center - hw);
    st.ci_hi = std::min(1.0, center + hw);
    if (acc > 0) {
        st.mean_wx = (double)swx / (double)acc;
        st.mean_wz = (double)swz / (double)acc;
        st.qubit_rate_x = st.mean_wx / (double)code.N();
        st.qubit_rate_z = st.mean_wz / (double)code.N();
    }
    return st;
}

}
