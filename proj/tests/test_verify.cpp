#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubix/verify.hpp"

using namespace cubix;

namespace {

BinaryCubic raw4(const FieldPtr& f, long p0, long p1, long p2, long p3) {
    return BinaryCubic::from_raw(f->from_long(p0), f->from_long(p1), f->from_long(p2),
                                 f->from_long(p3));
}

} // namespace

TEST_CASE("identity checkers on hand-picked inputs") {
    FieldPtr Q = Field::rationals();
    BinaryCubic p = raw4(Q, 1, -2, 5, 3), q = raw4(Q, 4, 7, -1, 2);
    CHECK(check_eisenstein_symplectic(p, q));
    CHECK(check_eisenstein_classical(p, {Q->from_long(3), Q->from_long(-5)}));
    Mat2 xi{Q->from_long(2), Q->from_long(1), Q->from_long(-4), Q->from_long(-2)};
    CHECK(check_moment_identity(xi, p));
    Mat2 g{Q->from_long(2), Q->from_long(3), Q->from_long(1), Q->from_long(2)};  // det 1
    CHECK(check_equivariance(g, p));
}

TEST_CASE("census over F_5: exact orbit counts") {
    OrbitCensus c = census(Field::prime(5));
    CHECK(c.sl_triple == 1);   // cube map is bijective mod 5
    CHECK(c.sl_double == 1);
    CHECK(c.sl_square == 2);     // one orbit per square M in {1, 4}
    CHECK(c.sl_nonsquare == 6);  // three orbits per nonsquare M in {2, 3}
    CHECK(c.sl_nonzero_disc == 8);
    CHECK(c.gl_square == 1);
    CHECK(c.gl_nonsquare == 2);
    CHECK(c.gl_nonzero_disc == 3);
    // orbit sizes partition the nonzero cubics
    unsigned long total = 0;
    for (const auto& e : c.sl_orbits) total += e.size;
    CHECK(total == 624);
    // orbit-stabilizer over |Sl(2,5)| = 120
    for (const auto& e : c.sl_orbits) CHECK(mpz_class(e.size) * e.stabilizer == 120);
}

TEST_CASE("census over F_7: exact orbit counts and strata") {
    OrbitCensus c = census(Field::prime(7));
    CHECK(c.sl_triple == 3);
    CHECK(c.sl_double == 1);
    CHECK(c.sl_square == 9);
    CHECK(c.sl_nonsquare == 3);
    CHECK(c.sl_nonzero_disc == 12);
    CHECK(c.gl_triple == 3);  // scaling acts by cubes, so cube classes survive
    CHECK(c.gl_double == 1);
    CHECK(c.gl_square == 6);
    CHECK(c.gl_nonsquare == 3);
    CHECK(c.gl_nonzero_disc == 9);
    // the multiple-root strata: 3 cube classes of size 16, one dense orbit of 336
    for (const auto& e : c.sl_orbits) {
        if (e.stratum == StratumKind::TripleRoot) {
            CHECK(e.size == 16);
            CHECK(e.stabilizer == 21);
        }
        if (e.stratum == StratumKind::DoubleRoot) {
            CHECK(e.size == 336);
            CHECK(e.stabilizer == 1);
        }
        CHECK(mpz_class(e.size) * e.stabilizer == 336);
    }
    unsigned long total = 0;
    for (const auto& e : c.sl_orbits) total += e.size;
    CHECK(total == 2400);
}

TEST_CASE("census guards") {
    CHECK_THROWS_AS(census(Field::rationals()), NotPrimeField);
    CHECK_THROWS_AS(census(Field::prime(17)), FieldTooLarge);
}

TEST_CASE("verify_suite passes and is deterministic") {
    for (const FieldPtr& f : {Field::rationals(), Field::prime(7)}) {
        auto r1 = verify_suite(12345, 40, f);
        auto r2 = verify_suite(12345, 40, f);
        REQUIRE(r1.size() == r2.size());
        for (size_t i = 0; i < r1.size(); ++i) {
            CHECK(r1[i].pass());
            CHECK(r1[i].name == r2[i].name);
            CHECK(r1[i].failures == r2[i].failures);
            CHECK(r1[i].trials == 40);
        }
    }
    CHECK_THROWS_AS(verify_suite(1, 0, Field::rationals()), Error);
}

TEST_CASE("failure reports carry witnesses") {
    // pass() is the emptiness of the witness list, nothing else
    TrialReport bad{"synthetic", 3, 1, {"cubic(1,2,3,4)"}, 0.0};
    CHECK(!bad.pass());
    TrialReport good{"synthetic", 3, 1, {}, 0.0};
    CHECK(good.pass());
}
