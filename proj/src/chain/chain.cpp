#include "rectenna/chain.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <sstream>

namespace rectenna::chain {

double efficiency(double v_dc, double v_in) {
    if (!(v_in > 0.0)) throw ArgumentError("efficiency: v_in must be > 0");
    if (!(v_dc >= 0.0)) throw ArgumentError("efficiency: v_dc must be >= 0");
    return 100.0 * v_dc / v_in;
}

double reference_voltage(double power, double reference, VoltageConvention convention) {
    if (!(power >= 0.0) || !(reference > 0.0)) throw ArgumentError("reference voltage needs P >= 0 and R > 0");
    const double rms = std::sqrt(power * reference);
    return convention == VoltageConvention::rms ? rms : std::sqrt(2.0) * rms;
}

rectifier::DoublerConfig default_ladder() {
    rectifier::DoublerConfig r;
    r.diode = circuit::sms7621();
    return r;
}

double LinkConfig::swept_dbm() const {
    return mode == LinkMode::direct ? incident_power_dbm : transmit_power_dbm;
}

void LinkConfig::set_swept_dbm(double dbm) {
    (mode == LinkMode::direct ? incident_power_dbm : transmit_power_dbm) = dbm;
}

void ChainConfig::validate() const {
    if (elements < 2 || (elements & (elements - 1)) != 0)
        throw ArgumentError("element count must be a power of two >= 2");
    if (!(frequency >= antenna.min_frequency() && frequency <= antenna.max_frequency()))
        throw RangeError(fmt::format("frequency {} Hz outside the antenna table [{}, {}] Hz", format_number(frequency),
                                     format_number(antenna.min_frequency()), format_number(antenna.max_frequency())));
    if (!(element_impedance > 0.0) || !(reference_impedance > 0.0))
        throw ArgumentError("element and reference impedances must be > 0");
    if (!std::isfinite(link.swept_dbm())) throw ArgumentError("swept power must be finite");
    if (link.mode == LinkMode::friis && !(link.distance > 0.0)) throw ArgumentError("link distance must be > 0");
    if (!(probe_amplitude > 0.0)) throw ArgumentError("probe amplitude must be > 0");
    rectifier.validate();
}

std::string describe(const ChainConfig& c) {
    std::ostringstream out;
    const auto kv = [&](std::string_view key, double v) { out << key << " = " << format_exact(v) << '\n'; };
    kv("elements", c.elements);
    kv("frequency", c.frequency);
    kv("element_impedance", c.element_impedance);
    kv("reference_impedance", c.reference_impedance);
    out << "convention = " << (c.convention == VoltageConvention::rms ? "rms" : "peak") << '\n';
    out << "link.mode = " << (c.link.mode == LinkMode::direct ? "direct" : "friis") << '\n';
    kv("link.incident_power_dbm", c.link.incident_power_dbm);
    kv("link.transmit_power_dbm", c.link.transmit_power_dbm);
    kv("link.transmit_gain_dbi", c.link.transmit_gain_dbi);
    kv("link.distance", c.link.distance);
    for (const auto& b : c.antenna.bands())
        out << "antenna = " << format_exact(b.frequency) << ' ' << format_exact(b.return_loss_db) << ' '
            << format_exact(b.gain_dbi) << '\n';
    const auto& r = c.rectifier;
    kv("rectifier.stages", r.stages);
    out << "rectifier.variant = " << (r.variant == rectifier::LadderVariant::canonical ? "canonical" : "half_stage")
        << '\n';
    kv("rectifier.stage_capacitance", r.stage_capacitance);
    kv("rectifier.load_resistance", r.load_resistance);
    kv("diode.is", r.diode.saturation_current);
    kv("diode.n", r.diode.ideality);
    kv("diode.rs", r.diode.series_resistance);
    kv("diode.cj", r.diode.junction_capacitance);
    kv("diode.vt", r.diode.thermal_voltage);
    kv("probe.amplitude", c.probe_amplitude);
    kv("probe.samples_per_period", c.probe.samples_per_period);
    kv("probe.max_settling_periods", c.probe.max_settling_periods);
    kv("periodic.samples_per_period", c.periodic.samples_per_period);
    kv("periodic.warmup_periods", c.periodic.warmup_periods);
    kv("periodic.max_shooting_iterations", c.periodic.max_shooting_iterations);
    kv("periodic.verify_periods", c.periodic.verify_periods);
    kv("periodic.max_periods", c.periodic.max_periods);
    kv("solver.current_tolerance", c.solver.current_tolerance);
    kv("solver.voltage_reltol", c.solver.voltage_reltol);
    kv("solver.voltage_abstol", c.solver.voltage_abstol);
    kv("solver.max_iterations", c.solver.max_iterations);
    kv("solver.gmin", c.solver.gmin);
    return out.str();
}

std::string config_hash(const ChainConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : describe(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

std::vector<combiner::WilkinsonDesign> combiner_tree(const ChainConfig& config, double r_match) {
    std::vector<combiner::WilkinsonDesign> tree;
    for (int width = config.elements / 2; width >= 1; width /= 2) {
        const double r_s = width == 1 ? r_match : config.element_impedance;
        for (int i = 0; i < width; ++i)
            tree.push_back(combiner::design_wilkinson(2, r_s, config.element_impedance, config.frequency));
    }
    return tree;
}

double LedgerEntry::imbalance() const {
    if (input == 0.0) return std::abs(delivered) + std::abs(reflected) + std::abs(dissipated);
    return std::abs(input - delivered - reflected - dissipated) / std::abs(input);
}

namespace {

rectifier::DoublerConfig ladder_at(const ChainConfig& config) {
    auto r = config.rectifier;
    r.source.frequency = config.frequency;
    return r;
}

}  // namespace

std::complex<double> converter_impedance(const ChainConfig& config) {
    try {
        return rectifier::estimate_input_impedance(ladder_at(config), config.probe_amplitude, config.probe,
                                                   config.solver);
    } catch (const SettlingError& e) {
        throw SettlingError(std::string("converter impedance probe: ") + e.what(), e.residual(), e.settled());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("converter impedance probe: ") + e.what(), e.residual(), e.time());
    }
}

ChainResult run_chain(const ChainConfig& config, std::optional<std::complex<double>> z_in) {
    config.validate();
    ChainResult out;
    out.swept_power = rf::dbm_to_watts(config.link.swept_dbm());

    // Antenna capture, per element.
    const auto ant = rf::antenna_at(config.antenna, config.frequency);
    const double isotropic =
        config.link.mode == LinkMode::direct
            ? out.swept_power
            : rf::friis_received_power(out.swept_power, config.link.transmit_gain_dbi, 0.0, config.frequency,
                                       config.link.distance);
    const double captured = isotropic * rf::db_to_linear(ant.gain_dbi);
    const double element_power = captured * rf::mismatch_fraction(ant.return_loss_db);
    LedgerEntry antenna{"antenna", config.elements * captured, config.elements * element_power,
                        config.elements * captured * rf::db_to_linear(ant.return_loss_db), 0.0};
    out.ledger.push_back(antenna);

    out.match = matching::match_converter(z_in ? *z_in : converter_impedance(config));
    const double r_match = out.match.chosen_resistor;

    // Coherent in-phase waves up the tree; each level feeds the next.
    const auto tree = combiner_tree(config, r_match);
    std::vector<combiner::Complex> waves(config.elements,
                                         std::sqrt(2.0 * element_power * config.element_impedance));
    std::size_t design = 0;
    double available = 0.0;
    for (int level = 1; waves.size() > 1; ++level) {
        LedgerEntry entry{fmt::format("combiner level {}", level)};
        std::vector<combiner::Complex> next;
        for (std::size_t i = 0; i < waves.size(); i += 2, ++design) {
            const auto& d = tree[design];
            const std::array<combiner::Complex, 2> in{waves[i], waves[i + 1]};
            const auto c = combiner::combine(in, d, config.frequency);
            entry.input += c.input_power;
            entry.delivered += c.output_power;
            entry.reflected += c.reflected_power;
            entry.dissipated += c.dissipated_in_isolation;
            // Re-reference the outgoing wave to the next level's split ports.
            next.push_back(c.output * std::sqrt(config.element_impedance / d.source_impedance));
        }
        available = entry.delivered;
        out.ledger.push_back(entry);
        waves = std::move(next);
    }

    // Matched junction: Thevenin source with the available power behind r_match.
    auto ladder = ladder_at(config);
    out.drive_amplitude = std::sqrt(8.0 * available * r_match);
    ladder.source.amplitude = out.drive_amplitude;
    ladder.source.series_resistance = r_match;
    try {
        out.rectifier = rectifier::simulate(ladder, config.periodic, config.solver);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("rectifier stage: ") + e.what(), e.residual(), e.time());
    }
    out.ledger.push_back({"junction", available, out.rectifier.input_power, available - out.rectifier.input_power, 0.0});
    out.ledger.push_back({"rectifier", out.rectifier.input_power, out.rectifier.output_power, 0.0,
                          out.rectifier.input_power - out.rectifier.output_power});

    out.v_dc = std::max(out.rectifier.v_dc, 0.0);
    out.settled = out.rectifier.settled;
    const double v_in = reference_voltage(out.swept_power, config.reference_impedance, config.convention);
    out.efficiency_pct = efficiency(out.v_dc, v_in);
    return out;
}

}  // namespace rectenna::chain
