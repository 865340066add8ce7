#include "rectenna/rectifier.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <cmath>
#include <memory>

namespace rectenna::rectifier {

using circuit::Netlist;

void DoublerConfig::validate() const {
    if (stages < 1) throw ArgumentError("stages must be >= 1");
    if (!(stage_capacitance > 0.0) || !std::isfinite(stage_capacitance))
        throw ArgumentError("stage_capacitance must be > 0");
    if (!(load_resistance > 0.0) || !std::isfinite(load_resistance))
        throw ArgumentError("load_resistance must be > 0");
    if (!(source.amplitude >= 0.0) || !std::isfinite(source.amplitude))
        throw ArgumentError("source amplitude must be >= 0");
    if (!(source.frequency > 0.0) || !std::isfinite(source.frequency))
        throw ArgumentError("source frequency must be > 0");
    if (!(source.series_resistance >= 0.0) || !std::isfinite(source.series_resistance))
        throw ArgumentError("source series_resistance must be >= 0");
    diode.validate();
}

namespace {

std::string stage_node(int k, std::string_view pos) {
    return "stage" + std::to_string(k) + "_" + std::string(pos);
}

}  // namespace

std::string output_node(const DoublerConfig& config) {
    if (config.variant == LadderVariant::half_stage)
        return stage_node(config.stages, config.stages % 2 == 1 ? "ac" : "dc");
    return stage_node(config.stages, "dc");
}

Netlist build_doubler_ladder(const DoublerConfig& config) {
    config.validate();
    Netlist net;
    auto diode = std::make_shared<const circuit::DiodeModel>(config.diode);

    const std::string input(kInputNode);
    if (config.source.series_resistance > 0.0) {
        net.add_sine_source(std::string(kSourceName), "src", "0",
                            {config.source.amplitude, config.source.frequency, 0.0, 0.0, 0.0});
        net.add_resistor("R0", "src", input, config.source.series_resistance);
    } else {
        net.add_sine_source(std::string(kSourceName), input, "0",
                            {config.source.amplitude, config.source.frequency, 0.0, 0.0, 0.0});
    }

    const double c = config.stage_capacitance;
    std::string ac_prev = input;  // pump column
    std::string dc_prev = "0";    // storage column

    if (config.variant == LadderVariant::canonical) {
        for (int k = 1; k <= config.stages; ++k) {
            const auto ac = stage_node(k, "ac");
            const auto dc = stage_node(k, "dc");
            const auto tag = std::to_string(k);
            net.add_capacitor("CP" + tag, ac_prev, ac, c);
            net.add_diode("DA" + tag, dc_prev, ac, diode);
            net.add_diode("DB" + tag, ac, dc, diode);
            net.add_capacitor("CS" + tag, dc_prev, dc, c);
            ac_prev = ac;
            dc_prev = dc;
        }
    } else {
        // Alternate pump and storage elements of the same ladder, one
        // diode-capacitor pair per stage.
        for (int k = 1; k <= config.stages; ++k) {
            const auto tag = std::to_string(k);
            if (k % 2 == 1) {
                const auto ac = stage_node(k, "ac");
                net.add_capacitor("CP" + tag, ac_prev, ac, c);
                net.add_diode("DA" + tag, dc_prev, ac, diode);
                ac_prev = ac;
            } else {
                const auto dc = stage_node(k, "dc");
                net.add_capacitor("CS" + tag, dc_prev, dc, c);
                net.add_diode("DB" + tag, ac_prev, dc, diode);
                dc_prev = dc;
            }
        }
    }
    net.add_resistor("RL", output_node(config), "0", config.load_resistance);
    net.validate();
    return net;
}

double analytic_output(int n, double v0, double r0, double r_l) {
    if (n < 1) throw ArgumentError("n must be >= 1");
    if (!(r_l > 0.0)) throw ArgumentError("r_l must be > 0");
    if (!(r0 >= 0.0)) throw ArgumentError("r0 must be >= 0");
    const double nd = static_cast<double>(n);
    return nd * v0 * r_l / (nd * r0 + r_l);
}

namespace {

double mean_power(const std::vector<double>& v, const std::vector<double>& i_into_plus, std::size_t begin,
                  std::size_t end) {
    double sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) sum += -v[k] * i_into_plus[k];
    return sum / static_cast<double>(end - begin);
}

}  // namespace

RectifierResult simulate(const DoublerConfig& config, const circuit::PeriodicOptions& options,
                         const circuit::SolverConfig& solver) {
    const Netlist net = build_doubler_ladder(config);
    const auto periodic = circuit::solve_periodic(net, config.source.frequency, options, solver);
    const auto& wf = periodic.waveform;
    const auto ss = circuit::extract_steady_state(wf, output_node(config), periodic.period);

    RectifierResult out;
    out.v_dc = ss.dc;
    out.ripple = ss.ripple;
    out.settled = ss.settled;
    out.output_power = ss.dc * ss.dc / config.load_resistance;
    out.periods = periodic.transient_periods;
    out.shooting_iterations = periodic.shooting_iterations;

    const auto per = static_cast<std::size_t>(options.samples_per_period);
    const std::size_t end = wf.size() - 1;
    out.input_power = mean_power(wf.voltage(kInputNode), wf.current(kSourceName), end - per, end);
    return out;
}

std::complex<double> probe_impedance(const Netlist& netlist, std::string_view source,
                                     std::string_view port_node, double frequency,
                                     const ProbeOptions& options, const circuit::SolverConfig& solver) {
    if (options.max_settling_periods < 1) throw ArgumentError("max_settling_periods must be >= 1");
    circuit::PeriodicOptions popt;
    popt.samples_per_period = options.samples_per_period;
    popt.max_shooting_iterations = options.max_settling_periods;
    popt.max_periods = 0;  // no plain-transient fallback beyond the budget

    const auto periodic = circuit::solve_periodic(netlist, frequency, popt, solver);
    const auto& wf = periodic.waveform;
    const auto v = wf.voltage(port_node);
    const auto& i = wf.current(source);
    const auto ss = circuit::extract_steady_state(v, wf.dt, periodic.period);
    if (!periodic.shooting_converged && !ss.settled)
        throw SettlingError("input impedance probe did not reach steady state within " +
                                std::to_string(options.max_settling_periods) + " periods",
                            0.0, ss.settled);

    // Whole periods, excluding the duplicated final sample.
    const std::size_t count = wf.size() - 1;
    const double w = 2.0 * kPi * frequency;
    std::complex<double> v1{}, i1{};
    for (std::size_t k = 0; k < count; ++k) {
        const auto phasor = std::polar(1.0, -w * wf.time(k));
        v1 += v[k] * phasor;
        i1 += -i[k] * phasor;  // current leaving the source into the port
    }
    if (std::abs(i1) == 0.0) throw ArgumentError("probe drew no fundamental current");
    return v1 / i1;
}

std::complex<double> estimate_input_impedance(const DoublerConfig& config, double probe_amplitude,
                                              const ProbeOptions& options,
                                              const circuit::SolverConfig& solver) {
    if (!(probe_amplitude > 0.0)) throw ArgumentError("probe_amplitude must be > 0");
    DoublerConfig probe = config;
    probe.source.amplitude = probe_amplitude;
    const Netlist net = build_doubler_ladder(probe);
    return probe_impedance(net, kSourceName, kInputNode, probe.source.frequency, options, solver);
}

}  // namespace rectenna::rectifier
