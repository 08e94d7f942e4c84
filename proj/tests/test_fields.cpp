#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubix/fields.hpp"

using namespace cubix;

TEST_CASE("field construction and guards") {
    FieldPtr Q = Field::rationals();
    CHECK(Q->kind() == FieldKind::Rationals);
    CHECK(Field::prime(7)->kind() == FieldKind::Prime);
    CHECK_THROWS_AS(Field::prime(2), Error);
    CHECK_THROWS_AS(Field::prime(3), Error);
    CHECK_THROWS_AS(Field::prime(9), Error);
    FieldPtr F7 = Field::prime(7);
    FieldPtr F49 = Field::quad_ext(F7, F7->from_long(3));
    CHECK(F49->cardinality() == 49);
    // 3 is a non-residue mod 7; 2 is a residue
    CHECK_THROWS_AS(Field::quad_ext(F7, F7->from_long(2)), Error);
    // no towers beyond one extension
    CHECK_THROWS_AS(Field::quad_ext(F49, F49->from_long(5)), Error);
    FieldPtr Qi = Field::quad_ext(Q, Q->from_long(-1));
    CHECK(Qi->descriptor() == "quad:rat:-1");
}

TEST_CASE("exact arithmetic and division by zero") {
    FieldPtr Q = Field::rationals();
    Elem a = Q->from_rat(mpq_class(2, 3)), b = Q->from_rat(mpq_class(-5, 7));
    CHECK((a + b) == Q->from_rat(mpq_class(-1, 21)));
    CHECK((a * b) == Q->from_rat(mpq_class(-10, 21)));
    CHECK((a / b) == Q->from_rat(mpq_class(-14, 15)));
    CHECK_THROWS_AS(a / Q->zero(), DivisionByZero);
    FieldPtr F7 = Field::prime(7);
    CHECK((F7->from_long(5) * F7->from_long(4)) == F7->from_long(6));
    CHECK(F7->from_long(3).inv() == F7->from_long(5));
    CHECK_THROWS_AS((void)(F7->one() + Q->one()), FieldMismatch);
}

TEST_CASE("quadratic extension arithmetic and conjugation") {
    FieldPtr Q = Field::rationals();
    FieldPtr K = Field::quad_ext(Q, Q->from_long(2));
    Elem x = K->make(Q->from_long(1), Q->from_long(1));  // 1 + sqrt(2)
    Elem y = x * x;                                      // 3 + 2 sqrt(2)
    CHECK(y == K->make(Q->from_long(3), Q->from_long(2)));
    CHECK(quad_conjugate(x) == K->make(Q->from_long(1), Q->from_long(-1)));
    CHECK(quad_norm(x) == Q->from_long(-1));
    CHECK(x * x.inv() == K->one());
    CHECK(is_pure_imaginary(K->make(Q->zero(), Q->from_long(5))));
    CHECK(!is_pure_imaginary(x));
    CHECK(project_to_base(K->make(Q->from_long(4), Q->zero())) == Q->from_long(4));
    CHECK_THROWS_AS(project_to_base(x), InternalCheckFailure);
}

TEST_CASE("square roots in all field kinds") {
    FieldPtr Q = Field::rationals();
    CHECK(*sqrt_in_field(Q->from_rat(mpq_class(9, 4))) == Q->from_rat(mpq_class(3, 2)));
    CHECK(!sqrt_in_field(Q->from_long(2)).has_value());
    FieldPtr F7 = Field::prime(7);
    for (long a = 1; a < 7; ++a) {
        auto r = sqrt_in_field(F7->from_long(a));
        if (r) CHECK(*r * *r == F7->from_long(a));
    }
    // exactly (p-1)/2 nonzero squares
    int sq = 0;
    for (long a = 1; a < 7; ++a) sq += sqrt_in_field(F7->from_long(a)).has_value();
    CHECK(sq == 3);
    // F_49: 24 nonzero squares
    FieldPtr F49 = Field::quad_ext(F7, F7->from_long(3));
    int sq49 = 0;
    for (mpz_class i = 1; i < 49; ++i) {
        Elem e = F49->element_at(i);
        if (e.is_zero()) continue;
        auto r = sqrt_in_field(e);
        if (r) {
            CHECK(*r * *r == e);
            ++sq49;
        }
    }
    CHECK(sq49 == 24);
    // Q(sqrt(2)): recover (1+sqrt 2)^2
    FieldPtr K = Field::quad_ext(Q, Q->from_long(2));
    Elem x = K->make(Q->from_long(1), Q->from_long(1));
    auto r = sqrt_in_field(x * x);
    REQUIRE(r.has_value());
    CHECK(*r * *r == x * x);
}

TEST_CASE("cube roots in all field kinds") {
    FieldPtr Q = Field::rationals();
    CHECK(*cbrt_in_field(Q->from_rat(mpq_class(27, 8))) == Q->from_rat(mpq_class(3, 2)));
    CHECK(*cbrt_in_field(Q->from_long(-8)) == Q->from_long(-2));
    CHECK(!cbrt_in_field(Q->from_long(2)).has_value());
    FieldPtr F7 = Field::prime(7);  // 3 | 6: cube map not bijective
    int cubes = 0;
    for (long a = 1; a < 7; ++a) {
        auto r = cbrt_in_field(F7->from_long(a));
        if (r) {
            CHECK(*r * *r * *r == F7->from_long(a));
            ++cubes;
        }
    }
    CHECK(cubes == 2);
    FieldPtr F5 = Field::prime(5);  // 3 coprime to 4: bijective
    for (long a = 1; a < 5; ++a) {
        auto r = cbrt_in_field(F5->from_long(a));
        REQUIRE(r.has_value());
        CHECK(*r * *r * *r == F5->from_long(a));
    }
    // F_49: 16 nonzero cubes
    FieldPtr F49 = Field::quad_ext(F7, F7->from_long(3));
    int c49 = 0;
    for (mpz_class i = 1; i < 49; ++i) {
        Elem e = F49->element_at(i);
        if (e.is_zero()) continue;
        auto r = cbrt_in_field(e);
        if (r) {
            CHECK(*r * *r * *r == e);
            ++c49;
        }
    }
    CHECK(c49 == 16);
    // Q(sqrt(2)): recover (1+sqrt 2)^3
    FieldPtr K = Field::quad_ext(Q, Q->from_long(2));
    Elem x = K->make(Q->from_long(1), Q->from_long(1));
    auto r = cbrt_in_field(x * x * x);
    REQUIRE(r.has_value());
    CHECK(*r == x);
}

TEST_CASE("cube and square classes") {
    FieldPtr Q = Field::rationals();
    CHECK(cube_class(Q->from_rat(mpq_class(2, 3))) == cube_class(Q->from_long(144)));
    CHECK(cube_class(Q->from_long(8)).is_identity());
    CHECK(cube_class(Q->from_long(-1)).is_identity());
    CHECK(!square_class(Q->from_long(-1)).is_identity());
    CHECK(square_class(Q->from_long(18)) == square_class(Q->from_long(2)));
    CHECK(cube_class(Q->from_long(2)) * cube_class(Q->from_long(4)) ==
          cube_class(Q->from_long(1)));
    CHECK(cube_class(Q->from_long(2)).inverse() == cube_class(Q->from_long(4)));
    FieldPtr F7 = Field::prime(7);
    // k*/k*^3 has order 3 for p = 1 mod 3
    std::vector<CubeClass> cls;
    for (long a = 1; a < 7; ++a) {
        CubeClass c = cube_class(F7->from_long(a));
        bool seen = false;
        for (auto& k : cls) seen = seen || (k == c);
        if (!seen) cls.push_back(c);
    }
    CHECK(cls.size() == 3);
    FieldPtr F5 = Field::prime(5);  // k* = k*^3
    for (long a = 1; a < 5; ++a) CHECK(cube_class(F5->from_long(a)).is_identity());
}

TEST_CASE("hilbert membership in k*_Delta") {
    FieldPtr Q = Field::rationals();
    // Delta = 1: a^2 + b^2 (sums of two squares): 5 in, 3 out
    CHECK(hilbert_membership(Q->from_long(5), Q->from_long(1)));
    CHECK(!hilbert_membership(Q->from_long(3), Q->from_long(1)));
    // Delta = -2: -1 = 1^2 - 2*1^2? a^2 - 2 b^2 = -1 with a=1,b=1
    CHECK(hilbert_membership(Q->from_long(-1), Q->from_long(-2)));
    // Delta = 0: membership reduces to squares
    CHECK(hilbert_membership(Q->from_long(4), Q->zero()));
    CHECK(!hilbert_membership(Q->from_long(3), Q->zero()));
    // -Delta a square: everything is a norm
    CHECK(hilbert_membership(Q->from_long(3), Q->from_long(-4)));
    // finite fields: every element is a value of any nondegenerate binary form
    FieldPtr F7 = Field::prime(7);
    for (long x = 1; x < 7; ++x) CHECK(hilbert_membership(F7->from_long(x), F7->from_long(3)));
    // witnesses
    auto w = norm_form_witness(Q->from_long(5), Q->from_long(1));
    REQUIRE(w.has_value());
    CHECK(w->first * w->first + w->second * w->second * Q->from_long(1) == Q->from_long(5));
}

TEST_CASE("descriptor and element parsing round trips") {
    for (const std::string& d : {"rat", "fp:7", "quad:rat:-1", "quad:fp:7:3"}) {
        FieldPtr f = Field::parse_descriptor(d);
        CHECK(f->descriptor() == d);
    }
    FieldPtr Q = Field::rationals();
    CHECK(Q->parse_element("-3/4") == Q->from_rat(mpq_class(-3, 4)));
    FieldPtr K = Field::parse_descriptor("quad:rat:2");
    CHECK(K->parse_element("1/2+3*w") == K->make(Q->from_rat(mpq_class(1, 2)), Q->from_long(3)));
    CHECK(K->parse_element("-w") == K->make(Q->zero(), Q->from_long(-1)));
    CHECK(K->parse_element("7") == K->make(Q->from_long(7), Q->zero()));
    CHECK_THROWS_AS(Q->parse_element("x"), ParseError);
}

TEST_CASE("canonical quadratic extensions and signs") {
    FieldPtr Q = Field::rationals();
    FieldPtr F7 = Field::prime(7);
    CHECK(canonical_quad_ext_for(F7, F7->from_long(5))->descriptor() == "quad:fp:7:3");
    CHECK(canonical_quad_ext_for(Q, Q->from_long(8))->descriptor() == "quad:rat:2");
    CHECK(canonical_quad_ext_for(Q, Q->from_rat(mpq_class(-4, 3)))->descriptor() ==
          "quad:rat:-3");
    CHECK(canonical_sign(Q->from_long(-5)) == Q->from_long(5));
    CHECK(canonical_sign(F7->from_long(5)) == F7->from_long(2));
}

TEST_CASE("factorization bound is an error, not a guess") {
    // product of two primes beyond the trial division bound
    mpz_class p1("1000003"), p2("1000033");
    CHECK_THROWS_AS(detail::factorize(p1 * p2 * p1 * p2 * p1 * p2 * p1, 1000000),
                    FactorizationBoundExceeded);
}
