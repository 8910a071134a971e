#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpolar/q1_code.hpp"
#include "qpolar/errors.hpp"

using namespace qpolar;

namespace {

size_t overlap_parity(const BitVec& a, const BitVec& b) {
    size_t s = 0;
    for (size_t k = 0; k < a.w.size(); k++)
        s ^= (size_t)__builtin_popcountll(a.w[k] & b.w[k]);
    return s & 1;
}

}

TEST_CASE("erasure construction table at eps = 1e-4") {
    const int expect_q1[] = {2, 7, 4, 23, 8, 87, 16, 343, 32, 1367};
    const int expect_shor[] = {2, 4, 4, 8, 8, 16, 16, 32, 32, 64};
    for (int n = 3; n <= 12; n++) {
        ReliabilityProfile prof = erasure_profile(n, 1e-4);
        Q1Code q1 = construct(n, prof, CodeFamily::q1);
        Q1Code sh = construct(n, prof, CodeFamily::shor);
        CHECK(q1.i == expect_q1[n - 3]);
        CHECK(sh.i == expect_shor[n - 3]);
        // The unrestricted optimum can only be at least as good.
        CHECK(q1_position_ler(prof, q1.i) <= q1_position_ler(prof, sh.i));
    }
}

TEST_CASE("construction tie-break picks the smallest index") {
    ReliabilityProfile prof;
    prof.n = 3;
    prof.pe_z.assign(8, 0.25);
    prof.pe_x.assign(8, 0.25);
    CHECK(construct(3, prof, CodeFamily::q1).i == 1);
    CHECK(construct(3, prof, CodeFamily::shor).i == 1);
}

TEST_CASE("minimum distance closed form agrees with brute force") {
    for (int n = 2; n <= 4; n++) {
        size_t nn = (size_t)1 << n;
        for (int i = 1; (size_t)i <= nn; i++) {
            Q1Code code{n, i};
            uint64_t dx = min_coset_weight_bruteforce(code, true);
            uint64_t dz = min_coset_weight_bruteforce(code, false);
            CHECK(min_x_coset_weight(code) == dx);
            CHECK(min_z_coset_weight(code) == dz);
            CHECK(min_distance(code) == (int)(dx < dz ? dx : dz));
        }
    }
    // Spot check at larger depth where only the Z side is enumerable.
    Q1Code a{6, 8};
    CHECK(min_z_coset_weight(a) == min_coset_weight_bruteforce(a, false));
    CHECK(min_distance(a) == 8);
    Q1Code b{5, 23};                    // popcount(22) = 3: min(2^3, 2^2) = 4
    CHECK(min_distance(b) == 4);
}

TEST_CASE("minimum distance values for the constructed codes") {
    const int i_q1[] = {2, 7, 4, 23, 8, 87, 16, 343, 32, 1367};
    const int expect_d[] = {2, 4, 4, 8, 8, 16, 16, 32, 32, 64};
    for (int n = 3; n <= 12; n++) {
        Q1Code code{n, i_q1[n - 3]};
        CHECK(min_distance(code) == expect_d[n - 3]);
        Q1Code shor{n, 1 << (n / 2)};
        CHECK(min_distance(shor) == expect_d[n - 3]);
    }
    CHECK_THROWS_AS(min_distance(Q1Code{15, 1}), ResourceBoundError);
}

TEST_CASE("stabilizer group structure") {
    for (auto [n, i] : {std::pair{3, 3}, {4, 7}, {4, 4}, {5, 23}}) {
        Q1Code code{n, i};
        size_t nn = code.N();
        StabilizerSet s = stabilizers(code);
        CHECK(s.x_gens.size() == nn - (size_t)i);
        CHECK(s.z_gens.size() == (size_t)i - 1);
        auto [lx, lz] = logical_operators(code);
        // All X generators commute with all Z generators.
        for (const auto& x : s.x_gens)
            for (const auto& z : s.z_gens) CHECK(overlap_parity(x, z) == 0);
        // Logicals commute with the group and anticommute with each other.
        for (const auto& z : s.z_gens) CHECK(overlap_parity(lx, z) == 0);
        for (const auto& x : s.x_gens) CHECK(overlap_parity(x, lz) == 0);
        CHECK(overlap_parity(lx, lz) == 1);
        CHECK(weight(lx) == min_x_coset_weight(code));
        CHECK(weight(lz) == min_z_coset_weight(code));
    }
}

TEST_CASE("stabilizer signs follow the frozen values") {
    Q1Code code{3, 3};
    BitVec u = BitVec::make(2);         // Z-frozen positions 1..2
    u.flip(1);
    BitVec v = BitVec::make(5);         // X-frozen positions 4..8
    v.flip(0);
    v.flip(4);
    StabilizerSet s = stabilizers(code, &u, &v);
    REQUIRE(s.z_signs.size() == 2);
    REQUIRE(s.x_signs.size() == 5);
    CHECK(s.z_signs[0] == 1);
    CHECK(s.z_signs[1] == -1);
    CHECK(s.x_signs[0] == -1);
    CHECK(s.x_signs[1] == 1);
    CHECK(s.x_signs[4] == -1);
}

TEST_CASE("preparation bit sequence and skippable levels") {
    Q1Code a{3, 3};                     // i-1 = 2 -> bits (0, 1, 0)
    CHECK(prep_bit_sequence(a) == std::vector<int>{0, 1, 0});
    Q1Code b{4, 4};                     // i-1 = 3 -> bits (1, 1, 0, 0)
    CHECK(prep_bit_sequence(b) == std::vector<int>{1, 1, 0, 0});
    CHECK(leading_zz_levels_skippable(b, PrepTarget::logical_zero) == 2);
    CHECK(leading_zz_levels_skippable(b, PrepTarget::generic) == 2);
    CHECK(leading_zz_levels_skippable(b, PrepTarget::logical_plus) == 0);
    Q1Code c{6, 8};                     // i-1 = 7 -> bits (1, 1, 1, 0, 0, 0)
    CHECK(leading_zz_levels_skippable(c, PrepTarget::logical_zero) == 3);
    Q1Code d{4, 1};                     // i-1 = 0 -> all X x X levels
    CHECK(leading_zz_levels_skippable(d, PrepTarget::logical_zero) == 0);
    Q1Code e{3, 8};                     // i-1 = 7 -> all Z x Z levels
    CHECK(leading_zz_levels_skippable(e, PrepTarget::logical_zero) == 3);
}
