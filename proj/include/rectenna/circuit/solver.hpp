// solver.hpp - modified nodal analysis: DC operating point, transient and
// periodic steady state
#pragma once

#include "rectenna/circuit/netlist.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rectenna::circuit {

enum class IntegrationRule { trapezoidal, backward_euler };

struct SolverConfig {
    double current_tolerance = 1e-9;      // A, KCL residual per node
    double voltage_reltol = 1e-6;         // relative Newton step
    double voltage_abstol = 1e-9;         // V, floor for the relative step test
    int max_iterations = 200;
    /// Conductance placed across every diode junction so reverse-biased
    /// ladders keep a DC path.
    double gmin = 1e-12;
    IntegrationRule integration = IntegrationRule::trapezoidal;
};

struct DcSolution {
    std::map<std::string, double, std::less<>> node_voltages;  // declared nodes, ground included
    std::map<std::string, double, std::less<>> source_currents;  // into the + terminal
    double max_residual = 0.0;  // A
    int iterations = 0;

    double voltage(std::string_view node) const;
};

/// Uniformly sampled node voltages and source currents. Sample k is at k*dt.
struct Waveform {
    double dt = 0.0;
    std::vector<std::string> node_names;               // declared nodes except ground
    std::vector<std::vector<double>> node_voltages;    // [node][sample]
    std::vector<std::string> source_names;
    std::vector<std::vector<double>> source_currents;  // [source][sample], into the + terminal

    std::size_t size() const { return node_voltages.empty() ? 0 : node_voltages.front().size(); }
    double time(std::size_t k) const { return static_cast<double>(k) * dt; }
    /// Ground returns an all-zero series. Throws ArgumentError for unknown nodes.
    std::vector<double> voltage(std::string_view node) const;
    const std::vector<double>& current(std::string_view source) const;
};

enum class InitialState { zero, dc_operating_point };

/// Newton-Raphson DC operating point with capacitors open and sine sources
/// at their offset.
DcSolution solve_dc(const Netlist& netlist, const SolverConfig& config = {});

/// Fixed-step transient from t = 0 to t_end. The first step always uses
/// backward Euler so an inconsistent initial state does not excite the
/// trapezoidal rule's undamped mode.
Waveform run_transient(const Netlist& netlist, double dt, double t_end,
                       const SolverConfig& config = {},
                       InitialState initial = InitialState::zero);

struct SteadyState {
    double dc = 0.0;
    double ripple = 0.0;
    bool settled = false;
};

/// Relative change of the per-period mean below which a waveform counts as
/// settled.
inline constexpr double kSettleTolerance = 1e-4;

/// Mean and peak-to-peak of the final full period; settled when the last two
/// period means differ by less than kSettleTolerance relative. Needs at
/// least three periods of samples.
SteadyState extract_steady_state(std::span<const double> samples, double dt, double period);
SteadyState extract_steady_state(const Waveform& waveform, std::string_view node, double period);

struct PeriodicOptions {
    int samples_per_period = 64;
    int warmup_periods = 4;
    int max_shooting_iterations = 40;
    int verify_periods = 3;
    /// Plain transient fallback budget if shooting fails to converge.
    int max_periods = 2000;
};

struct PeriodicResult {
    Waveform waveform;  // verify_periods periods starting from the periodic state
    double period = 0.0;
    int shooting_iterations = 0;
    bool shooting_converged = false;
    int transient_periods = 0;  // periods integrated in total
};

/// Periodic steady state of a circuit driven at one fundamental frequency.
/// Newton shooting on the one-period state-transition map of the capacitor
/// voltages and currents, followed by verify_periods of ordinary transient.
PeriodicResult solve_periodic(const Netlist& netlist, double frequency,
                              const PeriodicOptions& options = {},
                              const SolverConfig& config = {});

}  // namespace rectenna::circuit
