#include "kaclab/rational.hpp"

#include "doctest.h"

#include <random>

using kaclab::Rational;

TEST_CASE("rational basics") {
    CHECK(Rational(1, 2) + Rational(3, 2) == Rational(2));
    CHECK(Rational(1, 2) - Rational(3, 2) == Rational(-1));
    CHECK(Rational(1, 2) * Rational(3, 2) == Rational(3, 4));
    CHECK(Rational(1, 2) / Rational(3, 2) == Rational(1, 3));
    CHECK(Rational(-4, -8) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
}

TEST_CASE("rational rendering and parsing") {
    CHECK(Rational(1).str() == "1/1");
    CHECK(Rational(-3, 4).str() == "-3/4");
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("-3/9") == Rational(-1, 3));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("1/3").str() == "1/3");
    CHECK_THROWS(Rational::parse(""));
    CHECK_THROWS(Rational(1, 0));
    CHECK_THROWS(Rational(5, 3) / Rational(0));
}

TEST_CASE("rational field laws on random values") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int64_t> num(-40, 40);
    std::uniform_int_distribution<int64_t> den(1, 24);
    for (int i = 0; i < 500; ++i) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == Rational(0));
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("rational overflow is detected, not wrapped") {
    Rational big(INT64_MAX - 1, 1);
    CHECK_THROWS_AS(big * Rational(3), std::overflow_error);
    CHECK_THROWS_AS(big + big, std::overflow_error);
    CHECK_NOTHROW(big - big);
}
