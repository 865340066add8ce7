// config.hpp - run configuration text format for the command-line driver
#pragma once

#include "rectenna/chain.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace rectenna::cli {

struct CombinerSection {
    int n_ways = 2;
    double source_impedance = 50.0;
    double load_impedance = 50.0;
    double center_frequency = 9e9;
    double sweep_start = 1e9;
    double sweep_stop = 17e9;
    int sweep_points = 161;
};

struct MicrostripSection {
    std::optional<double> z0;  // defaults to the combiner's quarter-wave impedance
    double eps_r = 4.4;
    double height = 1.6e-3;
};

struct SweepSection {
    double power_from = -40.0;  // dBm
    double power_to = 40.0;
    double power_step = 10.0;
    double load_from = 100.0;  // ohm
    double load_to = 1e6;
    int load_points = 17;
    double load_power = 10.0;  // dBm, drive for the load sweep
};

/// Everything a CLI run needs. Paths are stored as written and resolved
/// against the config file's directory.
struct RunConfig {
    chain::ChainConfig chain;
    std::string antenna_table;  // empty: built-in measured bands
    std::string diode_model;    // empty: the [diode] values alone
    double rectifier_amplitude = 1.0;          // V, simulate-rectifier drive
    double rectifier_source_resistance = 50.0; // ohm, simulate-rectifier R_0
    CombinerSection combiner;
    MicrostripSection microstrip;
    SweepSection sweep;
    std::string output_directory = "out";
    std::filesystem::path base_directory;  // not serialized
};

/// Parses `[section]` / `key = value` text. Numbers accept SI suffixes.
/// Unknown sections or keys, bad values and missing referenced files raise
/// ConfigError carrying the `section.key` path.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_directory = {});
RunConfig read_config(const std::filesystem::path& path);

/// Canonical text; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

}  // namespace rectenna::cli
