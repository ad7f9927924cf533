#include <doctest.h>

#include <stdexcept>

#include "gendetect/ratio.hpp"

using namespace gendetect;

TEST_CASE("Ratio::of reduces and normalizes sign") {
    CHECK(Ratio::of(2, 4) == Ratio{1, 2});
    CHECK(Ratio::of(-2, 4) == Ratio{-1, 2});
    CHECK(Ratio::of(2, -4) == Ratio{-1, 2});
    CHECK(Ratio::of(-2, -4) == Ratio{1, 2});
    CHECK(Ratio::of(0, 7) == Ratio{0, 1});
    CHECK_THROWS_AS(Ratio::of(1, 0), std::invalid_argument);
}

TEST_CASE("arithmetic stays exact") {
    CHECK(Ratio::of(1, 3) + Ratio::of(1, 6) == Ratio{1, 2});
    CHECK(Ratio::of(1, 2) * Ratio::of(2, 3) == Ratio{1, 3});
    CHECK(Ratio::of(5, 9).divided_by(5) == Ratio{1, 9});
    CHECK(Ratio::of(3, 4).divided_by(-2) == Ratio{-3, 8});
    CHECK_THROWS_AS(Ratio::of(1, 2).divided_by(0), std::invalid_argument);
}

TEST_CASE("intermediate products wider than 64 bits reduce back down") {
    const long long big = 1LL << 62;
    CHECK(Ratio::of(big, 3) * Ratio::of(3, big) == Ratio{1, 1});
    CHECK(Ratio::of(1, big) + Ratio::of(1, big) == Ratio{1, big / 2});
}

TEST_CASE("overflow raises instead of wrapping") {
    Ratio big = Ratio::of(INT64_MAX, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
    CHECK_THROWS_AS(big + big, std::overflow_error);
}

TEST_CASE("value converts to double") {
    CHECK(Ratio::of(1, 2).value() == doctest::Approx(0.5));
    CHECK(Ratio::of(16, 21).value() == doctest::Approx(16.0 / 21.0));
}
