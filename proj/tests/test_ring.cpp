#include <doctest.h>

#include <random>

#include "gad/ring.hpp"

using namespace gad;

namespace {

RingElem random_elem(const RingSpec& spec, std::mt19937& rng) {
    std::uniform_int_distribution<long> d(-20, 20);
    if (spec.kind() == RingKind::Rationals) {
        long den = 0;
        while (den == 0) den = d(rng);
        return RingElem(spec, mpq_class(d(rng), den));
    }
    return RingElem(spec, d(rng));
}

}  // namespace

TEST_CASE("canonical forms and basic arithmetic") {
    auto z5 = RingSpec::integers_mod(5);
    CHECK(RingElem(z5, 2) + RingElem(z5, 3) == RingElem::zero(z5));

    auto q = RingSpec::rationals();
    CHECK(RingElem(q, mpq_class(1, 2)) * RingElem(q, mpq_class(2, 3)) ==
          RingElem(q, mpq_class(1, 3)));

    CHECK(RingElem(z5, 12) == RingElem(z5, 2));
    CHECK(RingElem(z5, -1) == RingElem(z5, 4));
}

TEST_CASE("inverse in GF(7) matches brute force") {
    auto f7 = RingSpec::prime_field(7);
    // oracle: search x with 3x = 1 mod 7
    RingElem three(f7, 3);
    RingElem found = RingElem::zero(f7);
    for (long x = 1; x < 7; ++x)
        if (three * RingElem(f7, x) == RingElem::one(f7)) found = RingElem(f7, x);
    CHECK(found == RingElem(f7, 5));
    CHECK(three.inv() == found);
}

TEST_CASE("field detection") {
    CHECK(RingSpec::rationals().is_field());
    CHECK(RingSpec::prime_field(2).is_field());
    CHECK(RingSpec::integers_mod(7).is_field());
    CHECK_FALSE(RingSpec::integers_mod(6).is_field());
    CHECK_FALSE(RingSpec::integers().is_field());
}

TEST_CASE("errors") {
    auto z = RingSpec::integers();
    auto q = RingSpec::rationals();
    CHECK_THROWS_AS(RingElem(z, 1) + RingElem(q, 1), MixedRings);
    CHECK_THROWS_AS(RingElem::zero(q).inv(), DivisionByZero);
    CHECK_THROWS_AS(RingElem(z, 2).inv(), NotAField);
    CHECK_THROWS(RingSpec::integers_mod(1));
    CHECK_THROWS(RingSpec::prime_field(6));
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937 rng(7);
    for (const auto& spec : {RingSpec::integers(), RingSpec::rationals(),
                             RingSpec::integers_mod(6), RingSpec::prime_field(5)}) {
        for (int i = 0; i < 200; ++i) {
            auto a = random_elem(spec, rng);
            auto b = random_elem(spec, rng);
            auto c = random_elem(spec, rng);
            CHECK((a + b) + c == a + (b + c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a * b == b * a);
            CHECK(RingElem::one(spec) * a == a);
        }
    }
}

TEST_CASE("field inverses on random nonzero elements") {
    std::mt19937 rng(11);
    for (const auto& spec : {RingSpec::rationals(), RingSpec::prime_field(13)}) {
        for (int i = 0; i < 100; ++i) {
            auto a = random_elem(spec, rng);
            if (a.is_zero()) continue;
            CHECK(a * a.inv() == RingElem::one(spec));
        }
    }
}

TEST_CASE("spec parsing") {
    CHECK(RingSpec::parse("Z") == RingSpec::integers());
    CHECK(RingSpec::parse("Q") == RingSpec::rationals());
    CHECK(RingSpec::parse("Z/6") == RingSpec::integers_mod(6));
    CHECK(RingSpec::parse("GF(7)") == RingSpec::prime_field(7));
    CHECK_FALSE(RingSpec::parse("GF(6)").has_value());
    CHECK_FALSE(RingSpec::parse("R").has_value());
}
