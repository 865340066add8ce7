// bindings.cpp - pybind11 module exposing the design, simulation and sweep entry points
#include "rectenna/chain.hpp"
#include "rectenna/circuit/diode.hpp"
#include "rectenna/circuit/netlist_io.hpp"
#include "rectenna/combiner.hpp"
#include "rectenna/config.hpp"
#include "rectenna/errors.hpp"
#include "rectenna/matching.hpp"
#include "rectenna/rectifier.hpp"
#include "rectenna/rf_link.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace rectenna;

namespace {

template <class T>
std::string write_to_string(const T& fn) {
    std::ostringstream out;
    fn(out);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_rectenna, m) {
    m.doc() = "Multiband rectenna chain: combiner design, rectifier simulation and sweeps";

    auto base = py::register_exception<Error>(m, "RectennaError", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
    py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
    auto conv = py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<SettlingError>(m, "SettlingError", conv.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    // Combiner and microstrip.
    py::class_<combiner::WilkinsonDesign>(m, "WilkinsonDesign")
        .def_readonly("n_ways", &combiner::WilkinsonDesign::n_ways)
        .def_readonly("source_impedance", &combiner::WilkinsonDesign::source_impedance)
        .def_readonly("load_impedance", &combiner::WilkinsonDesign::load_impedance)
        .def_readonly("quarter_wave_impedance", &combiner::WilkinsonDesign::quarter_wave_impedance)
        .def_readonly("isolation_resistor", &combiner::WilkinsonDesign::isolation_resistor)
        .def_readonly("center_frequency", &combiner::WilkinsonDesign::center_frequency);
    m.def("design_wilkinson", &combiner::design_wilkinson, py::arg("n_ways"), py::arg("r_s"), py::arg("r_l"),
          py::arg("f0"));
    m.def(
        "wilkinson_sparams",
        [](const combiner::WilkinsonDesign& d, double f) { return combiner::sparams(d, f).entries; },
        py::arg("design"), py::arg("frequency"), "3x3 complex S-matrix (ports: common, split 1, split 2).");

    py::class_<combiner::MicrostripLine>(m, "MicrostripLine")
        .def_readonly("width", &combiner::MicrostripLine::width)
        .def_readonly("effective_eps", &combiner::MicrostripLine::effective_eps)
        .def_readonly("quarter_wave_length", &combiner::MicrostripLine::quarter_wave_length);
    py::class_<combiner::MicrostripAnalysis>(m, "MicrostripAnalysis")
        .def_readonly("z0", &combiner::MicrostripAnalysis::z0)
        .def_readonly("effective_eps", &combiner::MicrostripAnalysis::effective_eps);
    m.def("microstrip_synthesis", &combiner::microstrip_synthesis, py::arg("z0"), py::arg("eps_r"),
          py::arg("substrate_height"), py::arg("f0"));
    m.def("microstrip_analysis", &combiner::microstrip_analysis, py::arg("width"), py::arg("eps_r"),
          py::arg("substrate_height"));

    // RF link and matching.
    m.def("dbm_to_watts", &rf::dbm_to_watts, py::arg("dbm"));
    m.def("watts_to_dbm", &rf::watts_to_dbm, py::arg("watts"));
    m.def("friis_received_power", &rf::friis_received_power, py::arg("p_t"), py::arg("g_t_dbi"),
          py::arg("g_r_dbi"), py::arg("frequency"), py::arg("distance"));
    m.def("mismatch_fraction", &rf::mismatch_fraction, py::arg("return_loss_db"));

    py::class_<matching::MatchReport>(m, "MatchReport")
        .def_readonly("converter_impedance", &matching::MatchReport::converter_impedance)
        .def_readonly("chosen_resistor", &matching::MatchReport::chosen_resistor)
        .def_readonly("predicted_delivered_fraction", &matching::MatchReport::predicted_delivered_fraction);
    m.def("matching_resistor", &matching::matching_resistor, py::arg("z_in"));
    m.def("match_converter", &matching::match_converter, py::arg("z_in"));

    // Diode and rectifier.
    py::class_<circuit::DiodeModel>(m, "DiodeModel")
        .def(py::init<>())
        .def_readwrite("name", &circuit::DiodeModel::name)
        .def_readwrite("saturation_current", &circuit::DiodeModel::saturation_current)
        .def_readwrite("ideality", &circuit::DiodeModel::ideality)
        .def_readwrite("series_resistance", &circuit::DiodeModel::series_resistance)
        .def_readwrite("junction_capacitance", &circuit::DiodeModel::junction_capacitance)
        .def_readwrite("thermal_voltage", &circuit::DiodeModel::thermal_voltage);
    m.def("sms7621", &circuit::sms7621);
    m.def("read_diode_model", &circuit::read_diode_model, py::arg("path"));

    py::class_<rectifier::DoublerConfig>(m, "DoublerConfig")
        .def(py::init<>())
        .def_readwrite("stages", &rectifier::DoublerConfig::stages)
        .def_readwrite("diode", &rectifier::DoublerConfig::diode)
        .def_readwrite("stage_capacitance", &rectifier::DoublerConfig::stage_capacitance)
        .def_readwrite("load_resistance", &rectifier::DoublerConfig::load_resistance)
        .def_property(
            "amplitude", [](const rectifier::DoublerConfig& c) { return c.source.amplitude; },
            [](rectifier::DoublerConfig& c, double v) { c.source.amplitude = v; })
        .def_property(
            "frequency", [](const rectifier::DoublerConfig& c) { return c.source.frequency; },
            [](rectifier::DoublerConfig& c, double v) { c.source.frequency = v; })
        .def_property(
            "source_resistance", [](const rectifier::DoublerConfig& c) { return c.source.series_resistance; },
            [](rectifier::DoublerConfig& c, double v) { c.source.series_resistance = v; });
    m.def("default_ladder", &chain::default_ladder);

    py::class_<rectifier::RectifierResult>(m, "RectifierResult")
        .def_readonly("v_dc", &rectifier::RectifierResult::v_dc)
        .def_readonly("ripple", &rectifier::RectifierResult::ripple)
        .def_readonly("settled", &rectifier::RectifierResult::settled)
        .def_readonly("input_power", &rectifier::RectifierResult::input_power)
        .def_readonly("output_power", &rectifier::RectifierResult::output_power)
        .def_readonly("periods", &rectifier::RectifierResult::periods);
    m.def(
        "simulate_rectifier",
        [](const rectifier::DoublerConfig& c) { return rectifier::simulate(c); },
        py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "estimate_input_impedance",
        [](const rectifier::DoublerConfig& c, double a) { return rectifier::estimate_input_impedance(c, a); },
        py::arg("config"), py::arg("probe_amplitude") = rectifier::kDefaultProbeAmplitude,
        py::call_guard<py::gil_scoped_release>());
    m.def("analytic_output", &rectifier::analytic_output, py::arg("n"), py::arg("v0"), py::arg("r0"),
          py::arg("r_l"));

    // Chain.
    m.def(
        "efficiency", &chain::efficiency, py::arg("v_dc"), py::arg("v_in"),
        "100 * v_dc / v_in in percent.");
    m.def(
        "efficiency_from_power",
        [](double v_dc, double power, double reference) {
            return chain::efficiency(v_dc, chain::reference_voltage(power, reference, chain::VoltageConvention::rms));
        },
        py::arg("v_dc"), py::arg("power"), py::arg("reference") = 50.0);

    py::class_<chain::ChainConfig>(m, "ChainConfig")
        .def(py::init<>())
        .def_readwrite("elements", &chain::ChainConfig::elements)
        .def_readwrite("frequency", &chain::ChainConfig::frequency)
        .def_readwrite("element_impedance", &chain::ChainConfig::element_impedance)
        .def_readwrite("reference_impedance", &chain::ChainConfig::reference_impedance)
        .def_readwrite("rectifier", &chain::ChainConfig::rectifier)
        .def_property(
            "input_power_dbm", [](const chain::ChainConfig& c) { return c.link.swept_dbm(); },
            [](chain::ChainConfig& c, double v) { c.link.set_swept_dbm(v); })
        .def("describe", &chain::describe)
        .def("hash", &chain::config_hash)
        .def("validate", &chain::ChainConfig::validate);

    py::class_<chain::LedgerEntry>(m, "LedgerEntry")
        .def_readonly("stage", &chain::LedgerEntry::stage)
        .def_readonly("input", &chain::LedgerEntry::input)
        .def_readonly("delivered", &chain::LedgerEntry::delivered)
        .def_readonly("reflected", &chain::LedgerEntry::reflected)
        .def_readonly("dissipated", &chain::LedgerEntry::dissipated)
        .def("imbalance", &chain::LedgerEntry::imbalance);
    py::class_<chain::ChainResult>(m, "ChainResult")
        .def_readonly("swept_power", &chain::ChainResult::swept_power)
        .def_readonly("v_dc", &chain::ChainResult::v_dc)
        .def_readonly("efficiency_pct", &chain::ChainResult::efficiency_pct)
        .def_readonly("settled", &chain::ChainResult::settled)
        .def_readonly("match", &chain::ChainResult::match)
        .def_readonly("drive_amplitude", &chain::ChainResult::drive_amplitude)
        .def_readonly("rectifier", &chain::ChainResult::rectifier)
        .def_readonly("ledger", &chain::ChainResult::ledger);
    m.def(
        "run_chain", [](const chain::ChainConfig& c) { return chain::run_chain(c); }, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

    py::class_<chain::SweepRow>(m, "SweepRow")
        .def_readonly("x", &chain::SweepRow::x)
        .def_readonly("v_dc", &chain::SweepRow::v_dc)
        .def_readonly("efficiency_pct", &chain::SweepRow::efficiency_pct)
        .def_readonly("settled", &chain::SweepRow::settled);
    py::class_<chain::SweepResult>(m, "SweepResult")
        .def_readonly("kind", &chain::SweepResult::kind)
        .def_readonly("config_hash", &chain::SweepResult::config_hash)
        .def_readonly("rows", &chain::SweepResult::rows)
        .def_readonly("argmax", &chain::SweepResult::argmax)
        .def("to_csv", [](const chain::SweepResult& r) {
            return write_to_string([&](std::ostream& o) { chain::write_sweep_csv(o, r); });
        });
    m.def(
        "sweep_input_power",
        [](const chain::ChainConfig& c, double from, double to, double step, unsigned threads) {
            return chain::sweep_input_power(c, from, to, step, {threads});
        },
        py::arg("config"), py::arg("from_dbm"), py::arg("to_dbm"), py::arg("step_db"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "sweep_load",
        [](const chain::ChainConfig& c, const std::vector<double>& loads, unsigned threads) {
            return chain::sweep_load(c, loads, {threads});
        },
        py::arg("config"), py::arg("loads"), py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("log_grid", &chain::log_grid, py::arg("lo"), py::arg("hi"), py::arg("n"));

    // Config files.
    py::class_<cli::RunConfig>(m, "RunConfig")
        .def_readwrite("chain", &cli::RunConfig::chain)
        .def_readonly("output_directory", &cli::RunConfig::output_directory)
        .def("serialize", &cli::serialize_config);
    m.def("read_config", &cli::read_config, py::arg("path"));
    m.def(
        "parse_config", [](const std::string& text) { return cli::parse_config(text); }, py::arg("text"));
}
