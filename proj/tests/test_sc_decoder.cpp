#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpolar/rng.hpp"
#include "qpolar/sc_decoder.hpp"

using namespace qpolar;
using doctest::Approx;

namespace {

BitVec random_vec(size_t n, std::mt19937_64& rng) {
    BitVec v = BitVec::make(n);
    for (size_t t = 0; t < n; t++)
        if (random_bit(rng)) v.flip(t);
    return v;
}

std::vector<double> llr_from_codeword(const BitVec& cw, double mag) {
    std::vector<double> llr(cw.nbits);
    for (size_t t = 0; t < cw.nbits; t++) llr[t] = cw.get(t) ? -mag : mag;
    return llr;
}

}

TEST_CASE("min-sum node functions") {
    CHECK(minsum_f(2.0, -3.0) == Approx(-2.0));
    CHECK(minsum_f(-2.0, -3.0) == Approx(2.0));
    CHECK(minsum_f(0.0, 5.0) == Approx(0.0));
    CHECK(minsum_g(2.0, 3.0, 0) == Approx(5.0));
    CHECK(minsum_g(2.0, 3.0, 1) == Approx(1.0));
}

TEST_CASE("noiseless decoding recovers the input in both orientations") {
    for (int n = 1; n <= 8; n++) {
        size_t nn = (size_t)1 << n;
        ScDecoder dec(n);
        auto rng = substream(3, "sc", (uint64_t)n);
        for (int t = 0; t < 30; t++) {
            BitVec u = random_vec(nn, rng);
            for (auto ori : {DecodeOrientation::standard, DecodeOrientation::reversed}) {
                BitVec cw = u;
                if (ori == DecodeOrientation::standard) polar_transform(cw);
                else polar_transform_transpose(cw);
                DecodeTask task;
                task.n = n;
                task.orientation = ori;
                task.llr = llr_from_codeword(cw, 4.0);
                task.frozen_mask = BitVec::make(nn);
                task.frozen_values = BitVec::make(nn);
                DecodeResult r = dec.sc_decode(task);
                CHECK(r.u_hat == u);
                CHECK(r.codeword_hat == cw);
            }
        }
    }
}

TEST_CASE("codeword estimate is the re-encoded input estimate") {
    int n = 6;
    size_t nn = (size_t)1 << n;
    ScDecoder dec(n);
    auto rng = substream(5, "sc-enc");
    for (int t = 0; t < 40; t++) {
        DecodeTask task;
        task.n = n;
        task.orientation = (t % 2) ? DecodeOrientation::reversed
                                   : DecodeOrientation::standard;
        task.llr.resize(nn);
        for (size_t k = 0; k < nn; k++)
            task.llr[k] = 6.0 * (uniform01(rng) - 0.5);
        task.frozen_mask = random_vec(nn, rng);
        task.frozen_values = random_vec(nn, rng);
        DecodeResult r = dec.sc_decode(task);
        BitVec enc = r.u_hat;
        if (task.orientation == DecodeOrientation::standard) polar_transform(enc);
        else polar_transform_transpose(enc);
        CHECK(r.codeword_hat == enc);
        // Frozen positions are forced regardless of the channel values.
        for (size_t k = 0; k < nn; k++)
            if (task.frozen_mask.get(k))
                CHECK(r.u_hat.get(k) == task.frozen_values.get(k));
    }
}

TEST_CASE("frozen bits rescue a corrupted position") {
    // With the true input frozen everywhere except one position, a single
    // output flip of magnitude below the rest still decodes correctly whenever
    // the free position keeps any usable channel information.
    int n = 4;
    size_t nn = (size_t)1 << n;
    ScDecoder dec(n);
    auto rng = substream(9, "sc-frozen");
    int recovered = 0, total = 0;
    for (int t = 0; t < 200; t++) {
        BitVec u = random_vec(nn, rng);
        size_t info = rng() % nn;
        BitVec cw = u;
        polar_transform(cw);
        auto llr = llr_from_codeword(cw, 4.0);
        size_t hit = rng() % nn;
        llr[hit] = -llr[hit];            // one channel flip
        DecodeTask task;
        task.n = n;
        task.orientation = DecodeOrientation::standard;
        task.llr = llr;
        task.frozen_mask = BitVec::make(nn);
        task.frozen_values = BitVec::make(nn);
        for (size_t k = 0; k < nn; k++) {
            if (k == info) continue;
            task.frozen_mask.flip(k);
            if (u.get(k)) task.frozen_values.flip(k);
        }
        DecodeResult r = dec.sc_decode(task);
        total++;
        if (r.u_hat.get(info) == u.get(info)) recovered++;
    }
    // An equal-magnitude flip can leave the free position tied (an erased
    // input in the erasure picture), so perfect recovery is not expected, but
    // the frozen side information must keep the rate well above coin-flipping.
    CHECK(recovered >= 150);
    CHECK(total == 200);
}

TEST_CASE("leaf ties resolve to zero") {
    int n = 2;
    size_t nn = 4;
    ScDecoder dec(n);
    DecodeTask task;
    task.n = n;
    task.orientation = DecodeOrientation::standard;
    task.llr = {0.0, 0.0, 0.0, 0.0};
    task.frozen_mask = BitVec::make(nn);
    task.frozen_values = BitVec::make(nn);
    DecodeResult r = dec.sc_decode(task);
    CHECK_FALSE(r.u_hat.any());
}

TEST_CASE("orientation symmetry under index reversal") {
    // Decoding the reversed-orientation code equals decoding the standard code
    // on index-reversed inputs and reversing the result.
    int n = 5;
    size_t nn = (size_t)1 << n;
    ScDecoder dec(n);
    auto rng = substream(21, "sc-sym");
    for (int t = 0; t < 30; t++) {
        DecodeTask task;
        task.n = n;
        task.orientation = DecodeOrientation::reversed;
        task.llr.resize(nn);
        for (size_t k = 0; k < nn; k++) task.llr[k] = 5.0 * (uniform01(rng) - 0.5);
        task.frozen_mask = random_vec(nn, rng);
        task.frozen_values = random_vec(nn, rng);
        DecodeResult a = dec.sc_decode(task);

        DecodeTask mirror;
        mirror.n = n;
        mirror.orientation = DecodeOrientation::standard;
        mirror.llr.resize(nn);
        mirror.frozen_mask = BitVec::make(nn);
        mirror.frozen_values = BitVec::make(nn);
        for (size_t k = 0; k < nn; k++) {
            mirror.llr[k] = task.llr[nn - 1 - k];
            if (task.frozen_mask.get(nn - 1 - k)) mirror.frozen_mask.flip(k);
            if (task.frozen_values.get(nn - 1 - k)) mirror.frozen_values.flip(k);
        }
        DecodeResult b = dec.sc_decode(mirror);
        for (size_t k = 0; k < nn; k++) {
            CHECK(a.u_hat.get(k) == b.u_hat.get(nn - 1 - k));
            CHECK(a.codeword_hat.get(k) == b.codeword_hat.get(nn - 1 - k));
        }
    }
}
