// rectifier.hpp - n-stage Villard voltage-doubler ladders
#pragma once

#include "rectenna/circuit/diode.hpp"
#include "rectenna/circuit/netlist.hpp"
#include "rectenna/circuit/solver.hpp"

#include <complex>
#include <string>
#include <string_view>

namespace rectenna::rectifier {

struct SourceSpec {
    double amplitude = 0.0;          // V, peak
    double frequency = 9e9;          // Hz
    double series_resistance = 50.0; // ohm (R_0)
};

enum class LadderVariant {
    canonical,   // 2 diodes + 2 capacitors per stage
    half_stage,  // 1 diode + 1 capacitor per stage
};

struct DoublerConfig {
    int stages = 7;
    circuit::DiodeModel diode;
    double stage_capacitance = 100e-12;
    double load_resistance = 22e3;  // R_L
    SourceSpec source;
    LadderVariant variant = LadderVariant::canonical;

    void validate() const;
};

inline constexpr std::string_view kSourceName = "VRF";
inline constexpr std::string_view kInputNode = "rf_in";

/// Name of the node carrying the DC output (the top of the ladder).
std::string output_node(const DoublerConfig& config);

/// Greinacher/Cockcroft-Walton ladder. Stage k pumps through
/// stage<k>_ac and stores on stage<k>_dc; the sine source drives node `src`
/// and reaches rf_in through R_0 (omitted when R_0 is zero). R_L loads the
/// last stage.
circuit::Netlist build_doubler_ladder(const DoublerConfig& config);

/// n v0 R_L / (n R_0 + R_L): n stages of source magnitude v0 behind R_0
/// loaded by R_L.
double analytic_output(int n, double v0, double r0, double r_l);

struct RectifierResult {
    double v_dc = 0.0;
    double ripple = 0.0;
    bool settled = false;
    double input_power = 0.0;  // W, average power leaving the source terminals
    double output_power = 0.0; // W, v_dc^2 / R_L
    int periods = 0;
    int shooting_iterations = 0;
};

/// Periodic steady state of the ladder under its configured sine drive.
RectifierResult simulate(const DoublerConfig& config, const circuit::PeriodicOptions& options = {},
                         const circuit::SolverConfig& solver = {});

struct ProbeOptions {
    int samples_per_period = 64;
    /// Shooting iterations (one integrated period each) allowed before the
    /// probe gives up.
    int max_settling_periods = 20;
};

inline constexpr double kDefaultProbeAmplitude = 0.1;

/// Fundamental-frequency impedance seen from `source` into `port_node`:
/// single-bin DFT of the port voltage and the current leaving the source,
/// over whole periods of the periodic steady state. Throws SettlingError if
/// the steady state is not reached within the settling budget.
std::complex<double> probe_impedance(const circuit::Netlist& netlist, std::string_view source,
                                     std::string_view port_node, double frequency,
                                     const ProbeOptions& options = {},
                                     const circuit::SolverConfig& solver = {});

/// Input impedance of the configured ladder at the source frequency with the
/// drive replaced by a probe of the given amplitude.
std::complex<double> estimate_input_impedance(const DoublerConfig& config,
                                              double probe_amplitude = kDefaultProbeAmplitude,
                                              const ProbeOptions& options = {},
                                              const circuit::SolverConfig& solver = {});

}  // namespace rectenna::rectifier
