#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "cellia/rational.hpp"

using cellia::Rational;

TEST_CASE("construction reduces and normalizes sign") {
    CHECK(Rational(6, 9) == Rational(2, 3));
    CHECK(Rational(-6, 9) == Rational(-2, 3));
    CHECK(Rational(6, -9) == Rational(-2, 3));
    CHECK(Rational(-6, -9) == Rational(2, 3));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(0, 7).den() == 1);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
    CHECK(-Rational(1, 2) == Rational(-1, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("ordering is exact") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(2, 3) > Rational(7, 11));
    CHECK(Rational(5, 9) <= Rational(5, 9));
    CHECK(cellia::rat_min(Rational(3, 4), Rational(2, 3)) == Rational(2, 3));
    CHECK(cellia::rat_max(Rational(3, 4), Rational(2, 3)) == Rational(3, 4));
    // Cross multiplication must not lose precision at large values.
    CHECK(Rational(1000000007, 1000000006) > Rational(1000000008, 1000000007));
}

TEST_CASE("string form") {
    CHECK(Rational(4, 2).str() == "2");
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(-1, 3).str() == "-1/3");
    CHECK(Rational(5).is_integer());
    CHECK_FALSE(Rational(5, 3).is_integer());
}

TEST_CASE("overflow is detected, not wrapped") {
    const Rational big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
    CHECK_NOTHROW(big + Rational(1));
}

TEST_CASE("to_double") {
    CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
    CHECK(Rational(-1, 4).to_double() == doctest::Approx(-0.25));
}
