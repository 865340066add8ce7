// rectenna.cpp - command-line driver for combiner design, rectifier simulation and chain sweeps
#include "rectenna/chain.hpp"
#include "rectenna/circuit/netlist_io.hpp"
#include "rectenna/combiner.hpp"
#include "rectenna/config.hpp"
#include "rectenna/errors.hpp"
#include "rectenna/matching.hpp"
#include "rectenna/plot.hpp"
#include "rectenna/rectifier.hpp"
#include "rectenna/units.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace rectenna;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr double kMeasuredMaxOutput = 1.823;  // V at +40 dBm, 22 kOhm, 9 GHz
constexpr double kMeasuredBestLoad = 22e3;

struct Options {
    std::string config_path;
    std::string out_dir;
    bool plot = false;
    bool seedless = false;
    std::string format = "csv";
};

struct Context {
    cli::RunConfig config;
    fs::path out;
    bool plot = false;

    std::ofstream open(const std::string& name) const {
        fs::create_directories(out);
        std::ofstream f(out / name, std::ios::binary);
        if (!f) throw ArgumentError("cannot write '" + (out / name).string() + "'");
        spdlog::info("writing {}", (out / name).string());
        return f;
    }
};

void row(std::ostream& out, std::string_view key, const std::string& value) {
    out << key;
    for (std::size_t i = key.size(); i < 30; ++i) out << ' ';
    out << value << '\n';
}

double db(std::complex<double> s) { return 20.0 * std::log10(std::abs(s)); }

int design_combiner(const Context& ctx) {
    const auto& c = ctx.config.combiner;
    const auto d = combiner::design_wilkinson(c.n_ways, c.source_impedance, c.load_impedance, c.center_frequency);
    row(std::cout, "n_ways", std::to_string(d.n_ways));
    row(std::cout, "source_impedance_ohm", format_number(d.source_impedance));
    row(std::cout, "load_impedance_ohm", format_number(d.load_impedance));
    row(std::cout, "quarter_wave_impedance_ohm", format_number(d.quarter_wave_impedance));
    row(std::cout, "isolation_resistor_ohm", format_number(d.isolation_resistor));
    row(std::cout, "center_frequency_hz", format_number(d.center_frequency));
    if (d.n_ways != 2) {
        spdlog::warn("S-parameters are evaluated for 2-way designs only; skipping network export");
        return 0;
    }

    std::vector<combiner::SMatrix> data;
    for (int i = 0; i < c.sweep_points; ++i) {
        const double f = c.sweep_points == 1 ? c.sweep_start
                                             : c.sweep_start + (c.sweep_stop - c.sweep_start) * i / (c.sweep_points - 1);
        data.push_back(combiner::sparams(d, f));
    }
    const std::array<double, 3> refs{d.source_impedance, d.load_impedance, d.load_impedance};
    auto s3p = ctx.open("combiner.s3p");
    combiner::write_touchstone(s3p, data, refs);

    auto csv = ctx.open("combiner_sparams.csv");
    csv << "freq_hz,s11_db,s21_db,s31_db,s23_db\n";
    plot::Figure fig{"Wilkinson combiner", "frequency (Hz)", "|S| (dB)", false, {}};
    fig.series = {{"S11", {}, {}}, {"S21", {}, {}}, {"S23", {}, {}}};
    for (const auto& m : data) {
        const auto& s = m.entries;
        csv << format_number(m.frequency) << ',' << format_number(db(s(0, 0))) << ',' << format_number(db(s(1, 0)))
            << ',' << format_number(db(s(2, 0))) << ',' << format_number(db(s(1, 2))) << '\n';
        const std::array<double, 3> ys{db(s(0, 0)), db(s(1, 0)), db(s(1, 2))};
        for (std::size_t k = 0; k < 3; ++k) {
            fig.series[k].x.push_back(m.frequency);
            fig.series[k].y.push_back(std::max(ys[k], -80.0));
        }
    }
    if (ctx.plot) {
        auto svg = ctx.open("combiner_sparams.svg");
        plot::write_svg(svg, fig);
    }
    return 0;
}

int microstrip(const Context& ctx) {
    const auto& c = ctx.config;
    const auto d = combiner::design_wilkinson(c.combiner.n_ways, c.combiner.source_impedance,
                                              c.combiner.load_impedance, c.combiner.center_frequency);
    const double z0 = c.microstrip.z0.value_or(d.quarter_wave_impedance);
    const auto line = combiner::microstrip_synthesis(z0, c.microstrip.eps_r, c.microstrip.height,
                                                     c.combiner.center_frequency);
    const auto check = combiner::microstrip_analysis(line.width, c.microstrip.eps_r, c.microstrip.height);
    row(std::cout, "z0_ohm", format_number(z0));
    row(std::cout, "width_mm", format_number(line.width * 1e3));
    row(std::cout, "effective_eps", format_number(line.effective_eps));
    row(std::cout, "quarter_wave_length_mm", format_number(line.quarter_wave_length * 1e3));
    row(std::cout, "reanalyzed_z0_ohm", format_number(check.z0));
    auto csv = ctx.open("microstrip.csv");
    csv << "z0_ohm,eps_r,height_m,f0_hz,width_m,effective_eps,quarter_wave_length_m\n"
        << format_number(z0) << ',' << format_number(c.microstrip.eps_r) << ',' << format_number(c.microstrip.height)
        << ',' << format_number(c.combiner.center_frequency) << ',' << format_number(line.width) << ','
        << format_number(line.effective_eps) << ',' << format_number(line.quarter_wave_length) << '\n';
    return 0;
}

rectifier::DoublerConfig standalone_ladder(const cli::RunConfig& c) {
    auto r = c.chain.rectifier;
    r.source = {c.rectifier_amplitude, c.chain.frequency, c.rectifier_source_resistance};
    return r;
}

int simulate_rectifier(const Context& ctx) {
    const auto ladder = standalone_ladder(ctx.config);
    const auto netlist = rectifier::build_doubler_ladder(ladder);
    const auto periodic = circuit::solve_periodic(netlist, ladder.source.frequency, ctx.config.chain.periodic,
                                                  ctx.config.chain.solver);
    const auto r = rectifier::simulate(ladder, ctx.config.chain.periodic, ctx.config.chain.solver);
    row(std::cout, "stages", std::to_string(ladder.stages));
    row(std::cout, "v_dc_V", format_number(r.v_dc));
    row(std::cout, "ripple_V", format_number(r.ripple));
    row(std::cout, "settled", r.settled ? "yes" : "no");
    row(std::cout, "input_power_W", format_number(r.input_power));
    row(std::cout, "output_power_W", format_number(r.output_power));
    row(std::cout, "analytic_output_V",
        format_number(rectifier::analytic_output(ladder.stages, ladder.source.amplitude,
                                                 ladder.source.series_resistance, ladder.load_resistance)));
    auto csv = ctx.open("rectifier.csv");
    csv << "stages,amplitude_V,frequency_hz,load_ohm,v_dc_V,ripple_V,input_power_W,output_power_W,settled\n"
        << ladder.stages << ',' << format_number(ladder.source.amplitude) << ','
        << format_number(ladder.source.frequency) << ',' << format_number(ladder.load_resistance) << ','
        << format_number(r.v_dc) << ',' << format_number(r.ripple) << ',' << format_number(r.input_power) << ','
        << format_number(r.output_power) << ',' << (r.settled ? 1 : 0) << '\n';
    auto wave = ctx.open("rectifier_waveform.csv");
    circuit::write_waveform_csv(wave, periodic.waveform);
    auto net = ctx.open("rectifier.cir");
    net << circuit::write_netlist(netlist);
    if (ctx.plot) {
        const auto& w = periodic.waveform;
        plot::Figure fig{"Rectifier steady state", "time (s)", "voltage (V)", false, {}};
        for (const auto& node : {std::string(rectifier::kInputNode), rectifier::output_node(ladder)}) {
            plot::Series s{node, {}, w.voltage(node)};
            for (std::size_t k = 0; k < w.size(); ++k) s.x.push_back(w.time(k));
            fig.series.push_back(std::move(s));
        }
        auto svg = ctx.open("rectifier_waveform.svg");
        plot::write_svg(svg, fig);
    }
    return 0;
}

int zin(const Context& ctx) {
    const auto z = chain::converter_impedance(ctx.config.chain);
    row(std::cout, "frequency_hz", format_number(ctx.config.chain.frequency));
    row(std::cout, "zin_re_ohm", format_number(z.real()));
    row(std::cout, "zin_im_ohm", format_number(z.imag()));
    auto csv = ctx.open("zin.csv");
    csv << "freq_hz,probe_amplitude_V,zin_re_ohm,zin_im_ohm\n"
        << format_number(ctx.config.chain.frequency) << ',' << format_number(ctx.config.chain.probe_amplitude) << ','
        << format_number(z.real()) << ',' << format_number(z.imag()) << '\n';
    return 0;
}

int match(const Context& ctx) {
    const auto report = matching::match_converter(chain::converter_impedance(ctx.config.chain));
    matching::print_match_report(std::cout, report);
    auto csv = ctx.open("match.csv");
    matching::write_match_csv_header(csv);
    matching::write_match_csv_row(csv, report);
    return 0;
}

void plot_sweep(const Context& ctx, const chain::SweepResult& r, const std::string& name, const std::string& x_label,
                bool log_x) {
    plot::Figure fig{name == "sweep_power" ? "Input power sweep" : "Load sweep", x_label, "efficiency (%)", log_x, {}};
    plot::Series eff{"efficiency", {}, {}};
    for (const auto& row : r.rows) {
        eff.x.push_back(row.x);
        eff.y.push_back(row.efficiency_pct);
    }
    fig.series.push_back(std::move(eff));
    auto svg = ctx.open(name + ".svg");
    plot::write_svg(svg, fig);
}

int sweep_power(const Context& ctx) {
    const auto& s = ctx.config.sweep;
    const auto r = chain::sweep_input_power(ctx.config.chain, s.power_from, s.power_to, s.power_step);
    auto csv = ctx.open("sweep_power.csv");
    chain::write_sweep_csv(csv, r);
    for (const auto& row : r.rows)
        if (!row.settled) spdlog::warn("point {} dBm did not settle", format_number(row.x));
    if (!r.rows.empty())
        spdlog::info("v_dc at {} dBm: {} V (measured hardware at +40 dBm: {} V, not reproducible)",
                     format_number(r.rows.back().x), format_number(r.rows.back().v_dc), format_number(kMeasuredMaxOutput));
    if (ctx.plot) plot_sweep(ctx, r, "sweep_power", "input power (dBm)", false);
    return 0;
}

int sweep_load(const Context& ctx) {
    const auto& s = ctx.config.sweep;
    auto cfg = ctx.config.chain;
    cfg.link.set_swept_dbm(s.load_power);
    const auto r = chain::sweep_load(cfg, chain::log_grid(s.load_from, s.load_to, s.load_points));
    auto csv = ctx.open("sweep_load.csv");
    chain::write_sweep_csv(csv, r);
    if (r.argmax)
        std::cout << "argmax_load_ohm " << format_number(r.rows[*r.argmax].x) << " (measured: "
                  << format_number(kMeasuredBestLoad) << ")\n";
    if (ctx.plot) plot_sweep(ctx, r, "sweep_load", "load resistance (ohm)", true);
    return 0;
}

int run_chain(const Context& ctx) {
    const auto r = chain::run_chain(ctx.config.chain);
    row(std::cout, "swept_power_dbm", format_number(ctx.config.chain.link.swept_dbm()));
    row(std::cout, "converter_re_ohm", format_number(r.match.converter_impedance.real()));
    row(std::cout, "converter_im_ohm", format_number(r.match.converter_impedance.imag()));
    row(std::cout, "matching_resistor_ohm", format_number(r.match.chosen_resistor));
    row(std::cout, "drive_amplitude_V", format_number(r.drive_amplitude));
    row(std::cout, "v_dc_V", format_number(r.v_dc));
    row(std::cout, "efficiency_pct", format_number(r.efficiency_pct));
    row(std::cout, "settled", r.settled ? "yes" : "no");
    spdlog::info("measured hardware reference: {} V at +40 dBm, 22 kOhm, 9 GHz (qualitative only)",
                 format_number(kMeasuredMaxOutput));
    auto csv = ctx.open("chain_ledger.csv");
    csv << "stage,input_W,delivered_W,reflected_W,dissipated_W\n";
    for (const auto& e : r.ledger) {
        csv << e.stage << ',' << format_number(e.input) << ',' << format_number(e.delivered) << ','
            << format_number(e.reflected) << ',' << format_number(e.dissipated) << '\n';
        std::cout << "  " << e.stage << ": in " << format_number(e.input) << " W, out " << format_number(e.delivered)
                  << " W, reflected " << format_number(e.reflected) << " W, dissipated "
                  << format_number(e.dissipated) << " W\n";
    }
    return 0;
}

void configure_logging() {
    auto logger = spdlog::stderr_color_st("rectenna");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("RECTENNA_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"RF energy-harvesting chain design and simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config_path, "run configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", opt.out_dir, "output directory (overrides [output] directory)");
    app.add_flag("--plot", opt.plot, "also write SVG plots");
    app.add_flag("--seedless", opt.seedless, "no-op: every computation is deterministic");
    app.add_option("--format", opt.format, "table format")->check(CLI::IsMember({"csv"}));

    const std::map<std::string, std::pair<std::string, std::function<int(const Context&)>>> commands{
        {"design-combiner", {"Wilkinson design equations and S-parameter export", design_combiner}},
        {"microstrip", {"microstrip width for the quarter-wave sections", microstrip}},
        {"simulate-rectifier", {"steady state of the configured ladder", simulate_rectifier}},
        {"zin", {"converter input impedance probe", zin}},
        {"match", {"matching resistor for the converter", match}},
        {"sweep-power", {"DC output and efficiency versus input power", sweep_power}},
        {"sweep-load", {"efficiency versus load resistance", sweep_load}},
        {"chain", {"single end-to-end run with power ledger", run_chain}},
    };
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Context ctx;
        ctx.config = opt.config_path.empty() ? cli::parse_config("") : cli::read_config(opt.config_path);
        ctx.out = opt.out_dir.empty() ? fs::path(ctx.config.output_directory) : fs::path(opt.out_dir);
        ctx.plot = opt.plot;
        spdlog::debug("config hash {}", chain::config_hash(ctx.config.chain));
        return commands.at(command).second(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "rectenna: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "rectenna: solver error in " << command << ": " << e.what() << '\n';
        return kExitSolver;
    } catch (const StructuralError& e) {
        std::cerr << "rectenna: solver error in " << command << ": " << e.what() << '\n';
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "rectenna: error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "rectenna: error: " << e.what() << '\n';
        return 1;
    }
}
