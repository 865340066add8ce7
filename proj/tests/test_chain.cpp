#include "doctest.h"

#include "rectenna/chain.hpp"
#include "rectenna/circuit/netlist_io.hpp"
#include "rectenna/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace rectenna;
using namespace rectenna::chain;

namespace {

ChainConfig default_chain() {
    ChainConfig c;
    c.rectifier.diode = circuit::read_diode_model(RECTENNA_DATA_DIR "/sms7621.model");
    return c;
}

void check_ledger(const ChainResult& r) {
    REQUIRE(r.ledger.size() >= 4);
    for (std::size_t i = 0; i < r.ledger.size(); ++i) {
        const auto& e = r.ledger[i];
        CHECK(e.imbalance() <= 1e-6);
        CHECK(e.reflected >= -1e-6 * e.input);
        CHECK(e.dissipated >= -1e-6 * e.input);
        if (i + 1 < r.ledger.size())
            CHECK(r.ledger[i + 1].input == doctest::Approx(e.delivered).epsilon(1e-12));
    }
}

}  // namespace

TEST_CASE("conversion efficiency") {
    CHECK(efficiency(2.5, 2.5) == 100.0);
    CHECK(efficiency(0.0, 3.0) == 0.0);
    const double v_in = reference_voltage(10.0, 50.0, VoltageConvention::rms);
    CHECK(v_in == doctest::Approx(22.3607).epsilon(1e-5));
    CHECK(efficiency(1.823, v_in) == doctest::Approx(8.153).epsilon(1e-4));
    CHECK(reference_voltage(10.0, 50.0, VoltageConvention::peak) == doctest::Approx(std::sqrt(1000.0)));
    CHECK_THROWS_AS(efficiency(1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(efficiency(-1.0, 1.0), ArgumentError);
}

TEST_CASE("combiner tree shape") {
    auto c = default_chain();
    const auto tree = combiner_tree(c, 3.0);
    REQUIRE(tree.size() == 3);
    CHECK(tree[0].source_impedance == 50.0);
    CHECK(tree[2].source_impedance == 3.0);
    CHECK(tree[2].load_impedance == 50.0);
    c.elements = 8;
    CHECK(combiner_tree(c, 3.0).size() == 7);
    c.elements = 3;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c.elements = 4;
    c.frequency = 20e9;
    CHECK_THROWS_AS(c.validate(), RangeError);
}

TEST_CASE("chain with no excitation") {
    auto c = default_chain();
    c.link.incident_power_dbm = -std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(run_chain(c), ArgumentError);
    c.link.incident_power_dbm = -300.0;
    const auto r = run_chain(c, std::complex<double>(1.0, -10.0));
    CHECK(std::abs(r.v_dc) < 1e-12);
}

TEST_CASE("lossless perfectly matched array delivers four element powers") {
    auto c = default_chain();
    const double inf = std::numeric_limits<double>::infinity();
    c.antenna = rf::AntennaModel({{1e9, -inf, 2.0}, {9e9, -inf, 2.0}});
    c.link.incident_power_dbm = 0.0;
    const auto r = run_chain(c, std::complex<double>(20.0, 0.0));
    const double element = 1e-3 * std::pow(10.0, 0.2);
    CHECK(r.ledger[0].reflected == 0.0);
    CHECK(r.ledger[2].stage == "combiner level 2");
    CHECK(r.ledger[2].delivered == doctest::Approx(4.0 * element).epsilon(1e-6));
    CHECK(r.drive_amplitude == doctest::Approx(std::sqrt(8.0 * 4.0 * element * 20.0)).epsilon(1e-6));
    CHECK(r.match.predicted_delivered_fraction == 1.0);
    check_ledger(r);
}

TEST_CASE("ledger bookkeeping on random configurations") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> f(0.9e9, 9e9), p(-30.0, 30.0), rl(1e3, 1e6);
    std::uniform_int_distribution<int> stages(1, 4), levels(1, 3);
    for (int i = 0; i < 4; ++i) {
        auto c = default_chain();
        c.frequency = f(rng);
        c.link.incident_power_dbm = p(rng);
        c.rectifier.stages = stages(rng);
        c.rectifier.load_resistance = rl(rng);
        c.elements = 1 << levels(rng);
        check_ledger(run_chain(c));
    }
}

TEST_CASE("friis link feeds the chain") {
    auto c = default_chain();
    c.link.mode = LinkMode::friis;
    c.link.transmit_power_dbm = 30.0;
    c.link.distance = 2.0;
    const std::complex<double> z{1.0, -13.0};
    const auto r = run_chain(c, z);
    const double expect = rf::friis_received_power(1.0, 0.0, 2.0, 9e9, 2.0) * 4.0;
    CHECK(r.ledger[0].input == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.swept_power == doctest::Approx(1.0));
}

TEST_CASE("power sweep rows and determinism") {
    auto c = default_chain();
    const auto a = sweep_input_power(c, -40.0, 40.0, 10.0);
    REQUIRE(a.rows.size() == 9);
    CHECK(a.rows.front().x == -40.0);
    CHECK(a.rows.back().x == 40.0);
    for (std::size_t i = 1; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].x > a.rows[i - 1].x);
        CHECK(a.rows[i].v_dc >= a.rows[i - 1].v_dc);
        CHECK(a.rows[i].efficiency_pct >= 0.0);
    }
    const auto b = sweep_input_power(c, -40.0, 40.0, 10.0, {.threads = 3});
    std::ostringstream sa, sb;
    write_sweep_csv(sa, a);
    write_sweep_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("# sweep=power config=" + config_hash(c) + "\nx,v_dc_V,efficiency_pct,settled\n", 0) == 0);

    CHECK_THROWS_AS(sweep_input_power(c, 10.0, 0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(sweep_input_power(c, 0.0, 10.0, 0.0), ArgumentError);
}

TEST_CASE("antenna gain shifts the power curve") {
    auto c = default_chain();
    auto boosted = c;
    boosted.antenna = c.antenna.with_gain_offset(3.0);
    const auto base = sweep_input_power(c, 3.0, 15.0, 3.0);
    const auto shifted = sweep_input_power(boosted, 0.0, 12.0, 3.0);
    REQUIRE(base.rows.size() == shifted.rows.size());
    for (std::size_t i = 0; i < base.rows.size(); ++i)
        CHECK(shifted.rows[i].v_dc == doctest::Approx(base.rows[i].v_dc).epsilon(1e-6));
}

TEST_CASE("load sweep argmax") {
    auto c = default_chain();
    const auto one = sweep_load(c, {22e3});
    REQUIRE(one.argmax);
    CHECK(*one.argmax == 0);
    CHECK_THROWS_AS(sweep_load(c, {}), ArgumentError);
    CHECK_THROWS_AS(sweep_load(c, {1e3, 1e3}), ArgumentError);
    CHECK_THROWS_AS(sweep_load(c, {-1.0}), ArgumentError);

    const auto grid = log_grid(100.0, 1e6, 9);
    CHECK(grid.front() == 100.0);
    CHECK(grid.back() == 1e6);
    CHECK(grid[4] == doctest::Approx(1e4));
}
