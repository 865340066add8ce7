#include "doctest.h"

#include "rectenna/config.hpp"
#include "rectenna/errors.hpp"
#include "rectenna/plot.hpp"

#include <sstream>

using namespace rectenna;
using namespace rectenna::cli;

namespace {

std::string key_path_of(std::string_view text) {
    try {
        parse_config(text, RECTENNA_SOURCE_DIR "/configs");
    } catch (const ConfigError& e) {
        return e.key_path();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("empty config gives the built-in defaults") {
    const auto c = parse_config("");
    CHECK(chain::describe(c.chain) == chain::describe(chain::ChainConfig{}));
    CHECK(c.combiner.n_ways == 2);
    CHECK(c.sweep.power_step == 10.0);
    CHECK_FALSE(c.microstrip.z0);
}

TEST_CASE("shipped default config") {
    const auto c = read_config(RECTENNA_SOURCE_DIR "/configs/default.ini");
    CHECK(c.chain.frequency == 9e9);
    CHECK(c.chain.rectifier.load_resistance == 22e3);
    CHECK(c.chain.rectifier.stage_capacitance == doctest::Approx(100e-12));
    CHECK(c.chain.rectifier.diode.name == "SMS7621");
    CHECK(c.chain.rectifier.diode.saturation_current == 4e-8);
    CHECK(c.chain.antenna.bands().size() == 6);
    CHECK(c.microstrip.height == doctest::Approx(1.6e-3));
}

TEST_CASE("config round trip") {
    auto c = read_config(RECTENNA_SOURCE_DIR "/configs/default.ini");
    c.microstrip.z0 = 70.71;
    c.chain.rectifier.diode.series_resistance = 7.25;
    c.chain.link.mode = chain::LinkMode::friis;
    c.chain.rectifier.variant = rectifier::LadderVariant::half_stage;
    const std::string text = serialize_config(c);
    const auto back = parse_config(text, c.base_directory);
    CHECK(serialize_config(back) == text);
    CHECK(chain::describe(back.chain) == chain::describe(c.chain));
    CHECK(back.microstrip.z0 == c.microstrip.z0);
    CHECK(back.chain.rectifier.diode.series_resistance == 7.25);
}

TEST_CASE("config errors carry the key path") {
    CHECK(key_path_of("[rectifier]\nstagez = 3\n") == "rectifier.stagez");
    CHECK(key_path_of("[nonsense]\n") == "nonsense");
    CHECK(key_path_of("stages = 3\n") == "stages");
    CHECK(key_path_of("[rectifier]\nstages = x\n") == "rectifier.stages");
    CHECK(key_path_of("[rectifier]\nstages = 2.5\n") == "rectifier.stages");
    CHECK(key_path_of("[rectifier]\nstages = 3\nstages = 4\n") == "rectifier.stages");
    CHECK(key_path_of("[chain]\nconvention = mean\n") == "chain.convention");
    CHECK(key_path_of("[rectifier]\nstages = 0\n") == "rectifier");
    CHECK(key_path_of("[chain]\nfrequency = 20G\n") == "chain");
    CHECK(key_path_of("[sweep]\npower_step = 0\n") == "sweep.power_step");
    CHECK(key_path_of("[chain]\nantenna_table = missing.csv\n") == "chain.antenna_table");
    CHECK(key_path_of("[rectifier]\ndiode_model = missing.model\n") == "rectifier.diode_model");

    try {
        parse_config("[chain]\nantenna_table = /nowhere/antenna.csv\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/nowhere/antenna.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(read_config("/nowhere/run.ini"), ConfigError);
}

TEST_CASE("SI numbers and overrides") {
    const auto c = parse_config("[rectifier]\nload_resistance = 4.7k\n[diode]\ncj = 0.2p\n[chain]\nfrequency = 900M\n");
    CHECK(c.chain.rectifier.load_resistance == doctest::Approx(4700.0));
    CHECK(c.chain.rectifier.diode.junction_capacitance == doctest::Approx(0.2e-12));
    CHECK(c.chain.frequency == doctest::Approx(900e6));
}

TEST_CASE("svg plot") {
    plot::Figure fig{"t <1>", "x", "y", true, {{"a", {1.0, 10.0, 100.0}, {0.0, 1.0, 0.5}}}};
    std::ostringstream out;
    plot::write_svg(out, fig);
    const auto s = out.str();
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("series a\n1,0\n10,1\n100,0.5\n") != std::string::npos);
    CHECK(s.find("t &lt;1&gt;") != std::string::npos);
    fig.series[0].y.pop_back();
    CHECK_THROWS_AS(plot::write_svg(out, fig), ArgumentError);
}
