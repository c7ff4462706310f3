#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ainfty/extended_value.hpp"
#include "ainfty/rational.hpp"

using namespace ainfty;

TEST_CASE("rationals canonicalize to lowest terms with positive denominator") {
    CHECK(Rational(2, 6) == Rational(1, 3));
    CHECK(Rational(2, 6).str() == "1/3");
    CHECK(Rational(1, -2).str() == "-1/2");
    CHECK(Rational(0, 7).str() == "0/1");
    CHECK(Rational(-4, -8) == Rational(1, 2));
    CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("parsing accepts p and p/q, rejects everything else") {
    CHECK(Rational::from_string("3/4") == Rational(3, 4));
    CHECK(Rational::from_string("7") == Rational(7));
    CHECK(Rational::from_string("-2/8") == Rational(-1, 4));
    CHECK(Rational::from_string("+5/10") == Rational(1, 2));
    for (const char* bad : {"", "1.5", "1e3", "1/0", "a", " 1", "1 ", "1/-2", "--1", "/3", "3/"})
        CHECK_THROWS_AS(Rational::from_string(bad), ParseError);
    CHECK_FALSE(Rational::try_parse("0.25").has_value());
}

TEST_CASE("arithmetic and comparisons are exact") {
    const Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == b);
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(-a == Rational(-1, 3));
    CHECK(a > b);
    CHECK(b < a);
    CHECK(a >= a);
    CHECK_THROWS_AS(a / Rational(0), Error);
}

TEST_CASE("integer powers, including negative exponents") {
    CHECK(Rational(2, 3).pow_int(3) == Rational(8, 27));
    CHECK(Rational(2, 3).pow_int(-2) == Rational(9, 4));
    CHECK(Rational(5).pow_int(0) == Rational(1));
    CHECK(Rational::pow2(-3) == Rational(1, 8));
    CHECK(Rational::pow2(10) == Rational(1024));
    CHECK_THROWS_AS(Rational(0).pow_int(-1), Error);
}

TEST_CASE("log is accurate far outside double range") {
    CHECK(Rational(8).log() == doctest::Approx(3 * std::log(2.0)).epsilon(1e-14));
    const Rational tiny = Rational::pow2(-5000);
    CHECK(tiny.log() == doctest::Approx(-5000 * std::log(2.0)).epsilon(1e-12));
    const Rational huge = Rational(3).pow_int(4000);
    CHECK(huge.log() == doctest::Approx(4000 * std::log(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(Rational(0).log(), Error);
}

TEST_CASE("hash agrees on equal values") {
    CHECK(Rational(2, 4).hash() == Rational(1, 2).hash());
    CHECK(Rational(-7, 3).hash() == Rational(7, -3).hash());
}

TEST_CASE("extended values order with infinity on top") {
    const auto two = ExtendedValue::exact(Rational(2));
    const auto three = ExtendedValue::exact(Rational(3));
    const auto inf = ExtendedValue::infinity(Backend::Exact);
    CHECK(two < three);
    CHECK(three < inf);
    CHECK(inf == ExtendedValue::infinity(Backend::Floating));
    CHECK(ExtendedValue::cmp(two, two) == 0);
    CHECK(two.rational() == Rational(2));
    CHECK(ExtendedValue::floating(1.5).to_double() == 1.5);
    CHECK_THROWS_AS(inf.rational(), Error);
    CHECK(inf.str() == "inf");
    CHECK(two.str() == "2/1");
}

TEST_CASE("approx_equal uses relative tolerance and matches infinities") {
    const auto a = ExtendedValue::floating(1.0);
    const auto b = ExtendedValue::floating(1.0 + 1e-13);
    CHECK(a.approx_equal(b, 1e-12));
    CHECK_FALSE(a.approx_equal(ExtendedValue::floating(1.1), 1e-12));
    CHECK(ExtendedValue::infinity(Backend::Exact)
              .approx_equal(ExtendedValue::infinity(Backend::Floating), 1e-12));
    CHECK_FALSE(a.approx_equal(ExtendedValue::infinity(Backend::Exact), 1e-12));
}
