#include "qpolar/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "qpolar/errors.hpp"
#include "qpolar/parallel.hpp"
#include "qpolar/rng.hpp"
#include "qpolar/sc_decoder.hpp"

namespace qpolar {

std::vector<double> bec_reliabilities(int n, double eps) {
    if (eps < 0 || eps > 1) throw UsageError("bec_reliabilities: eps out of [0,1]");
    std::vector<double> pe{eps};
    for (int k = 0; k < n; k++) {
        size_t l = pe.size();
        std::vector<double> next(2 * l);
        for (size_t j = 0; j < l; j++) {
            double v = pe[j];
            next[j] = 2 * v - v * v;     // upper branch (check combination)
            next[j + l] = v * v;         // lower branch (variable combination)
        }
        pe.swap(next);
    }
    return pe;
}

namespace {

struct DeShard {
    std::vector<uint64_t> err;          // half-units: 2 per error, 1 per tie
};

// Genie-aided recursion under the all-zero codeword: the correct prior
// decision on every upper branch is 0, so the lower-branch message is a + b.
// Leaf input index equals `off`, as in the decoder.
void genie_rec(double* llr, size_t k, size_t off, size_t stride, double* work,
               std::vector<uint64_t>& err) {
    if (k == 1) {
        if (llr[0] < 0) err[off] += 2;
        else if (llr[0] == 0) err[off] += 1;
        return;
    }
    size_t h = k / 2;
    for (size_t j = 0; j < h; j++) work[j] = minsum_f(llr[2 * j], llr[2 * j + 1]);
    genie_rec(work, h, off, 2 * stride, work + h, err);
    for (size_t j = 0; j < h; j++) work[j] = llr[2 * j] + llr[2 * j + 1];
    genie_rec(work, h, off + stride, 2 * stride, work + h, err);
}

}

std::vector<double> bsc_reliabilities_de(int n, const BscMixture& ch, uint64_t pop,
                                         uint64_t seed, int threads,
                                         std::vector<double>* se_out) {
    size_t nn = (size_t)1 << n;
    if (pop == 0) throw UsageError("bsc_reliabilities_de: pop must be positive");

    // Component LLR magnitudes; q clamped away from 0/1 to stay finite.
    size_t nc = ch.comps.size();
    if (nc == 0) throw UsageError("bsc_reliabilities_de: empty mixture");
    std::vector<double> cum(nc), mag(nc), q(nc);
    double acc = 0;
    for (size_t c = 0; c < nc; c++) {
        acc += ch.comps[c].weight;
        cum[c] = acc;
        double qq = std::clamp(ch.comps[c].q, 1e-300, 1 - 1e-16);
        q[c] = ch.comps[c].q;
        mag[c] = std::log((1 - qq) / qq);
    }
    cum[nc - 1] = 1.0;

    const uint64_t shard_size = 1 << 14;
    size_t shards = (size_t)((pop + shard_size - 1) / shard_size);
    std::vector<DeShard> partial(shards);

    parallel_for_chunks(shards, threads, [&](size_t s) {
        auto rng = substream(seed, "de", s);
        DeShard& out = partial[s];
        out.err.assign(nn, 0);
        std::vector<double> llr(nn), work(nn);
        uint64_t lo = (uint64_t)s * shard_size;
        uint64_t hi = std::min<uint64_t>(lo + shard_size, pop);
        for (uint64_t t = lo; t < hi; t++) {
            for (size_t pos = 0; pos < nn; pos++) {
                size_t c = 0;
                if (nc > 1) {
                    double u = uniform01(rng);
                    while (c + 1 < nc && u >= cum[c]) c++;
                }
                bool flip = uniform01(rng) < q[c];
                llr[pos] = flip ? -mag[c] : mag[c];
            }
            genie_rec(llr.data(), nn, 0, 1, work.data(), out.err);
        }
    });

    std::vector<double> pe(nn);
    std::vector<uint64_t> tot(nn, 0);
    for (size_t s = 0; s < shards; s++)
        for (size_t pos = 0; pos < nn; pos++) tot[pos] += partial[s].err[pos];
    for (size_t pos = 0; pos < nn; pos++) pe[pos] = (double)tot[pos] / (2.0 * (double)pop);
    if (se_out) {
        se_out->resize(nn);
        for (size_t pos = 0; pos < nn; pos++)
            (*se_out)[pos] = std::sqrt(std::max(pe[pos] * (1 - pe[pos]), 0.0) / (double)pop);
    }
    return pe;
}

ReliabilityProfile erasure_profile(int n, double eps) {
    ReliabilityProfile prof;
    prof.n = n;
    prof.pe_z = bec_reliabilities(n, eps);
    prof.pe_x = prof.pe_z;              // erasure statistics are basis-symmetric
    prof.se_z.assign(prof.pe_z.size(), 0.0);
    prof.se_x = prof.se_z;
    return prof;
}

ReliabilityProfile depolarizing_profile(int n, double p, bool use_corr,
                                        uint64_t pop, uint64_t seed, int threads) {
    ReliabilityProfile prof;
    prof.n = n;
    PauliChannel ch = depolarizing(p);
    if (p == 0) {
        prof.pe_z.assign((size_t)1 << n, 0.0);
        prof.pe_x = prof.pe_z;
        prof.se_z = prof.pe_z;
        prof.se_x = prof.pe_z;
        return prof;
    }
    prof.pe_z = bsc_reliabilities_de(n, as_mixture(induced_z_channel(ch)), pop,
                                     seed, threads, &prof.se_z);
    if (use_corr) {
        prof.pe_x = bsc_reliabilities_de(n, extended_x_channel(ch), pop,
                                         seed + 1, threads, &prof.se_x);
    } else {
        // Ignoring correlations the X side is the same BSC(2p/3); reuse the
        // sampled profile.
        prof.pe_x = prof.pe_z;
        prof.se_x = prof.se_z;
    }
    return prof;
}

double q1_position_ler(const ReliabilityProfile& prof, int i) {
    size_t nn = (size_t)1 << prof.n;
    if (i < 1 || (size_t)i > nn) throw UsageError("q1_position_ler: i out of range");
    double pz = prof.pe_z[(size_t)i - 1];
    double px = prof.pe_x[nn - (size_t)i];
    // Expanded form of 1 - (1 - pz)(1 - px); the factored expression rounds
    // to zero once both inputs fall below double rounding, which would make
    // distinct positions tie in the construction argmin.
    return pz + px - pz * px;
}

double q1_position_ler_se(const ReliabilityProfile& prof, int i) {
    size_t nn = (size_t)1 << prof.n;
    double pz = prof.pe_z[(size_t)i - 1];
    double px = prof.pe_x[nn - (size_t)i];
    double sz = prof.se_z.empty() ? 0 : prof.se_z[(size_t)i - 1];
    double sx = prof.se_x.empty() ? 0 : prof.se_x[nn - (size_t)i];
    return std::sqrt((1 - px) * (1 - px) * sz * sz + (1 - pz) * (1 - pz) * sx * sx);
}

}
