#include "doctest.h"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

using namespace rectenna;

TEST_CASE("SI suffixes") {
    CHECK(parse_si("100p") == doctest::Approx(100e-12));
    CHECK(parse_si("22k") == 22e3);
    CHECK(parse_si("1.29G") == doctest::Approx(1.29e9));
    CHECK(parse_si("2M") == 2e6);
    CHECK(parse_si("5m") == doctest::Approx(5e-3));
    CHECK(parse_si("-3.5e-2") == -3.5e-2);
    CHECK(parse_si("+40") == 40.0);
    CHECK(parse_si(" 7u ") == doctest::Approx(7e-6));
    CHECK_FALSE(try_parse_si("1kk"));
    CHECK_FALSE(try_parse_si("abc"));
    CHECK_FALSE(try_parse_si(""));
    CHECK_THROWS_AS(parse_si("1x"), ArgumentError);
}

TEST_CASE("six significant digit formatting") {
    CHECK(format_number(70.71067811865476) == "70.7107");
    CHECK(format_number(50.0) == "50");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.23456789e-7) == "1.23457e-07");
}

TEST_CASE("exact formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 2.2e4, 6.02214076e23, -1e-300}) CHECK(parse_si(format_exact(v)) == v);
}
