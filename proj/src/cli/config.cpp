#include "rectenna/config.hpp"

#include "rectenna/circuit/netlist_io.hpp"
#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rectenna::cli {

namespace {

struct Field {
    std::string section;
    std::string key;
    std::function<void(std::string_view)> set;
    std::function<std::string()> get;
    std::string path() const { return section + "." + key; }
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double number(std::string_view v) {
    if (const auto x = try_parse_si(v); x && std::isfinite(*x)) return *x;
    throw ArgumentError("expected a number, got '" + std::string(v) + "'");
}

int integer(std::string_view v) {
    const double x = number(v);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ArgumentError("expected an integer, got '" + std::string(v) + "'");
    return static_cast<int>(x);
}

template <class T>
Field num(std::string section, std::string key, T& target) {
    return {std::move(section), std::move(key),
            [&target](std::string_view v) {
                if constexpr (std::is_same_v<T, int>)
                    target = integer(v);
                else
                    target = number(v);
            },
            [&target] { return format_exact(static_cast<double>(target)); }};
}

Field text(std::string section, std::string key, std::string& target) {
    return {std::move(section), std::move(key), [&target](std::string_view v) { target = std::string(v); },
            [&target] { return target; }};
}

template <class E>
Field choice(std::string section, std::string key, E& target, std::vector<std::pair<std::string, E>> names) {
    return {std::move(section), std::move(key),
            [&target, names](std::string_view v) {
                for (const auto& [n, e] : names)
                    if (n == v) {
                        target = e;
                        return;
                    }
                std::string allowed;
                for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : ", ") + n;
                throw ArgumentError("expected one of " + allowed + ", got '" + std::string(v) + "'");
            },
            [&target, names] {
                for (const auto& [n, e] : names)
                    if (e == target) return n;
                return std::string();
            }};
}

/// Every configurable key in serialization order. The diode model file is
/// handled separately so it loads before the [diode] overrides.
std::vector<Field> fields(RunConfig& c) {
    auto& ch = c.chain;
    auto& r = ch.rectifier;
    auto& d = r.diode;
    using chain::LinkMode;
    using chain::VoltageConvention;
    using rectifier::LadderVariant;
    std::vector<Field> f{
        num("chain", "frequency", ch.frequency),
        num("chain", "elements", ch.elements),
        num("chain", "element_impedance", ch.element_impedance),
        num("chain", "reference_impedance", ch.reference_impedance),
        choice<VoltageConvention>("chain", "convention", ch.convention,
                                  {{"rms", VoltageConvention::rms}, {"peak", VoltageConvention::peak}}),
        text("chain", "antenna_table", c.antenna_table),

        choice<LinkMode>("link", "mode", ch.link.mode, {{"direct", LinkMode::direct}, {"friis", LinkMode::friis}}),
        num("link", "incident_power_dbm", ch.link.incident_power_dbm),
        num("link", "transmit_power_dbm", ch.link.transmit_power_dbm),
        num("link", "transmit_gain_dbi", ch.link.transmit_gain_dbi),
        num("link", "distance", ch.link.distance),

        num("rectifier", "stages", r.stages),
        choice<LadderVariant>("rectifier", "variant", r.variant,
                              {{"canonical", LadderVariant::canonical}, {"half_stage", LadderVariant::half_stage}}),
        num("rectifier", "stage_capacitance", r.stage_capacitance),
        num("rectifier", "load_resistance", r.load_resistance),
        num("rectifier", "amplitude", c.rectifier_amplitude),
        num("rectifier", "source_resistance", c.rectifier_source_resistance),
        text("rectifier", "diode_model", c.diode_model),

        text("diode", "name", d.name),
        num("diode", "is", d.saturation_current),
        num("diode", "n", d.ideality),
        num("diode", "rs", d.series_resistance),
        num("diode", "cj", d.junction_capacitance),
        num("diode", "vt", d.thermal_voltage),

        num("probe", "amplitude", ch.probe_amplitude),
        num("probe", "samples_per_period", ch.probe.samples_per_period),
        num("probe", "max_settling_periods", ch.probe.max_settling_periods),

        num("solver", "current_tolerance", ch.solver.current_tolerance),
        num("solver", "voltage_reltol", ch.solver.voltage_reltol),
        num("solver", "voltage_abstol", ch.solver.voltage_abstol),
        num("solver", "max_iterations", ch.solver.max_iterations),
        num("solver", "gmin", ch.solver.gmin),
        num("solver", "samples_per_period", ch.periodic.samples_per_period),
        num("solver", "warmup_periods", ch.periodic.warmup_periods),
        num("solver", "max_shooting_iterations", ch.periodic.max_shooting_iterations),
        num("solver", "verify_periods", ch.periodic.verify_periods),
        num("solver", "max_periods", ch.periodic.max_periods),

        num("combiner", "n_ways", c.combiner.n_ways),
        num("combiner", "source_impedance", c.combiner.source_impedance),
        num("combiner", "load_impedance", c.combiner.load_impedance),
        num("combiner", "center_frequency", c.combiner.center_frequency),
        num("combiner", "sweep_start", c.combiner.sweep_start),
        num("combiner", "sweep_stop", c.combiner.sweep_stop),
        num("combiner", "sweep_points", c.combiner.sweep_points),

        {"microstrip", "z0",
         [&c](std::string_view v) {
             c.microstrip.z0 = v == "auto" ? std::nullopt : std::optional<double>(number(v));
         },
         [&c] { return c.microstrip.z0 ? format_exact(*c.microstrip.z0) : std::string("auto"); }},
        num("microstrip", "eps_r", c.microstrip.eps_r),
        num("microstrip", "height", c.microstrip.height),

        num("sweep", "power_from", c.sweep.power_from),
        num("sweep", "power_to", c.sweep.power_to),
        num("sweep", "power_step", c.sweep.power_step),
        num("sweep", "load_from", c.sweep.load_from),
        num("sweep", "load_to", c.sweep.load_to),
        num("sweep", "load_points", c.sweep.load_points),
        num("sweep", "load_power", c.sweep.load_power),

        text("output", "directory", c.output_directory),
    };
    return f;
}

std::filesystem::path resolve(const RunConfig& c, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || c.base_directory.empty() ? path : c.base_directory / path;
}

/// Checks that do not belong to any single key.
void check_semantics(const RunConfig& c) {
    const auto guard = [](const std::string& path, auto&& check) {
        try {
            check();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(path + ": " + e.what(), path);
        }
    };
    guard("rectifier", [&] { c.chain.rectifier.validate(); });
    guard("chain", [&] { c.chain.validate(); });
    if (c.combiner.n_ways < 2) throw ConfigError("combiner.n_ways: must be >= 2", "combiner.n_ways");
    if (!(c.combiner.sweep_start > 0.0) || !(c.combiner.sweep_stop >= c.combiner.sweep_start))
        throw ConfigError("combiner.sweep_stop: needs 0 < sweep_start <= sweep_stop", "combiner.sweep_stop");
    if (c.combiner.sweep_points < 1) throw ConfigError("combiner.sweep_points: must be >= 1", "combiner.sweep_points");
    if (!(c.sweep.power_step > 0.0)) throw ConfigError("sweep.power_step: must be > 0", "sweep.power_step");
    if (!(c.sweep.power_to > c.sweep.power_from))
        throw ConfigError("sweep.power_to: must exceed sweep.power_from", "sweep.power_to");
    if (!(c.sweep.load_from > 0.0) || !(c.sweep.load_to > c.sweep.load_from))
        throw ConfigError("sweep.load_to: needs 0 < load_from < load_to", "sweep.load_to");
    if (c.sweep.load_points < 2) throw ConfigError("sweep.load_points: must be >= 2", "sweep.load_points");
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_directory) {
    RunConfig config;
    config.base_directory = base_directory;
    auto table = fields(config);
    std::map<std::string, const Field*, std::less<>> by_path;
    std::map<std::string, bool, std::less<>> sections;
    for (const auto& f : table) {
        by_path[f.path()] = &f;
        sections[f.section] = true;
    }

    struct Entry {
        const Field* field;
        std::string value;
        int line;
    };
    std::vector<Entry> entries;
    std::map<std::string, int, std::less<>> seen;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        auto s = trim(raw);
        if (s.empty() || s.front() == '#' || s.front() == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(line) + ": unterminated section header", std::string(s));
            section = std::string(trim(s.substr(1, s.size() - 2)));
            if (!sections.count(section))
                throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]", section);
            continue;
        }
        const auto eq = s.find('=');
        const std::string key(trim(s.substr(0, eq)));
        const std::string path = section.empty() ? key : section + "." + key;
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected key = value", path);
        if (section.empty())
            throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' outside any section", key);
        const auto it = by_path.find(path);
        if (it == by_path.end())
            throw ConfigError("line " + std::to_string(line) + ": unknown key " + path, path);
        if (const auto [pos, fresh] = seen.emplace(path, line); !fresh)
            throw ConfigError("line " + std::to_string(line) + ": duplicate key " + path + " (first on line " +
                                  std::to_string(pos->second) + ")",
                              path);
        auto value = trim(s.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        entries.push_back({it->second, std::string(value), line});
    }

    const auto apply = [](const Entry& e) {
        try {
            e.field->set(e.value);
        } catch (const Error& err) {
            throw ConfigError(e.field->path() + " (line " + std::to_string(e.line) + "): " + err.what(),
                              e.field->path());
        }
    };
    // The model file first, so explicit [diode] keys override it.
    for (const auto& e : entries)
        if (e.field->path() == "rectifier.diode_model") apply(e);
    if (!config.diode_model.empty()) {
        const auto path = resolve(config, config.diode_model);
        if (!std::filesystem::exists(path))
            throw ConfigError("rectifier.diode_model: cannot open diode model '" + path.string() + "'",
                              "rectifier.diode_model");
        try {
            config.chain.rectifier.diode = circuit::read_diode_model(path);
        } catch (const Error& err) {
            throw ConfigError(std::string("rectifier.diode_model: ") + err.what(), "rectifier.diode_model");
        }
    }
    for (const auto& e : entries)
        if (e.field->path() != "rectifier.diode_model") apply(e);

    if (!config.antenna_table.empty()) {
        const auto path = resolve(config, config.antenna_table);
        if (!std::filesystem::exists(path))
            throw ConfigError("chain.antenna_table: cannot open antenna table '" + path.string() + "'",
                              "chain.antenna_table");
        try {
            config.chain.antenna = rf::read_antenna_csv(path);
        } catch (const Error& err) {
            throw ConfigError(std::string("chain.antenna_table: ") + err.what(), "chain.antenna_table");
        }
    }
    check_semantics(config);
    return config;
}

RunConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'", path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

std::string serialize_config(const RunConfig& config) {
    RunConfig copy = config;
    std::ostringstream out;
    std::string section;
    for (const auto& f : fields(copy)) {
        if (f.section != section) {
            out << (section.empty() ? "" : "\n") << '[' << f.section << "]\n";
            section = f.section;
        }
        out << f.key << " = " << f.get() << '\n';
    }
    return out.str();
}

}  // namespace rectenna::cli
