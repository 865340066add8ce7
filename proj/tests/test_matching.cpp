#include "doctest.h"

#include "rectenna/errors.hpp"
#include "rectenna/matching.hpp"

#include <limits>
#include <random>
#include <sstream>

using namespace rectenna;
using namespace rectenna::matching;

TEST_CASE("matching resistor takes the real part") {
    CHECK(matching_resistor({50.0, 0.0}) == 50.0);
    CHECK(matching_resistor({30.0, 40.0}) == 30.0);
    CHECK(matching_resistor({22000.0, 0.0}) == 22e3);
    CHECK_THROWS_AS(matching_resistor({0.0, 10.0}), ArgumentError);
    CHECK_THROWS_AS(matching_resistor({-5.0, 0.0}), ArgumentError);
}

TEST_CASE("delivered power fraction") {
    CHECK(delivered_power_fraction(50.0, 50.0) == 1.0);
    CHECK(delivered_power_fraction(50.0, 100.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
    CHECK(delivered_power_fraction(50.0, {std::numeric_limits<double>::infinity(), 0.0}) == 0.0);
    CHECK(delivered_power_fraction({10.0, 5.0}, {10.0, -5.0}) == doctest::Approx(1.0));

    // Maximum over a grid of real loads sits at the source resistance.
    const double rs = 73.0;
    double best = -1.0, best_load = 0.0;
    for (double rl = 1.0; rl <= 500.0; rl += 1.0) {
        const double f = delivered_power_fraction(rs, rl);
        if (f > best) best = f, best_load = rl;
    }
    CHECK(best_load == rs);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(0.01, 1e4), im(-1e4, 1e4);
    for (int i = 0; i < 500; ++i) {
        const double f = delivered_power_fraction({re(rng), im(rng)}, {re(rng), im(rng)});
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("resistive converter matches exactly") {
    for (double r : {1.0, 50.0, 123.456, 22e3}) {
        const auto report = match_converter({r, 0.0});
        CHECK(report.chosen_resistor == r);
        CHECK(report.predicted_delivered_fraction == 1.0);
    }
    const auto reactive = match_converter({30.0, 40.0});
    CHECK(reactive.predicted_delivered_fraction == doctest::Approx(1.0 - 1600.0 / (3600.0 + 1600.0)));

    std::ostringstream out;
    write_match_csv_header(out);
    write_match_csv_row(out, reactive);
    CHECK(out.str() == "converter_re_ohm,converter_im_ohm,chosen_resistor_ohm,delivered_fraction\n"
                       "30,40,30,0.692308\n");
}
