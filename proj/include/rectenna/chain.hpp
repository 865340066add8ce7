// chain.hpp - antenna -> combiner tree -> matched rectifier pipeline and sweeps
#pragma once

#include "rectenna/circuit/solver.hpp"
#include "rectenna/combiner.hpp"
#include "rectenna/matching.hpp"
#include "rectenna/rectifier.hpp"
#include "rectenna/rf_link.hpp"

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rectenna::chain {

enum class VoltageConvention { rms, peak };

/// 100 v_dc / v_in. Throws ArgumentError unless v_in > 0 and v_dc >= 0.
double efficiency(double v_dc, double v_in);

/// Source voltage for `power` watts into `reference` ohm: sqrt(P R) (rms)
/// or sqrt(2 P R) (peak).
double reference_voltage(double power, double reference, VoltageConvention convention);

enum class LinkMode { direct, friis };

/// Seven canonical stages of SMS7621 diodes, 100 pF, 22 kOhm load.
rectifier::DoublerConfig default_ladder();

struct LinkConfig {
    LinkMode mode = LinkMode::direct;
    /// direct: isotropic power incident on each element, before antenna gain
    double incident_power_dbm = 0.0;
    /// friis: transmitter side
    double transmit_power_dbm = 30.0;
    double transmit_gain_dbi = 0.0;
    double distance = 1.0;  // m

    /// The swept quantity: incident power (direct) or transmit power (friis).
    double swept_dbm() const;
    void set_swept_dbm(double dbm);
};

struct ChainConfig {
    rf::AntennaModel antenna = rf::AntennaModel::measured_default();
    int elements = 4;
    double frequency = 9e9;
    double element_impedance = 50.0;    // antenna ports and split-port references
    double reference_impedance = 50.0;  // efficiency reference
    VoltageConvention convention = VoltageConvention::rms;
    LinkConfig link;
    rectifier::DoublerConfig rectifier = default_ladder();  // source fields are overwritten by the chain
    double probe_amplitude = rectifier::kDefaultProbeAmplitude;
    rectifier::ProbeOptions probe;
    circuit::PeriodicOptions periodic;
    circuit::SolverConfig solver;

    void validate() const;
};

/// Canonical `key = value` dump; stable across runs, used for hashing.
std::string describe(const ChainConfig& config);
/// 16 hex digits (FNV-1a over describe()).
std::string config_hash(const ChainConfig& config);

/// Binary tree of two-way designs, leaves first. Inner levels are
/// element_impedance on both sides; the root's common port is r_match.
std::vector<combiner::WilkinsonDesign> combiner_tree(const ChainConfig& config, double r_match);

struct LedgerEntry {
    std::string stage;
    double input = 0.0;      // W
    double delivered = 0.0;  // W, passed to the next stage
    double reflected = 0.0;  // W
    double dissipated = 0.0; // W

    /// |input - delivered - reflected - dissipated| / input (0 when input is 0)
    double imbalance() const;
};

struct ChainResult {
    double swept_power = 0.0;  // W, swept input power
    double v_dc = 0.0;
    double efficiency_pct = 0.0;
    bool settled = false;
    matching::MatchReport match;
    double drive_amplitude = 0.0;  // V, open-circuit peak of the junction source
    rectifier::RectifierResult rectifier;
    std::vector<LedgerEntry> ledger;
};

/// Converter impedance probe for the configured ladder at the chain frequency.
std::complex<double> converter_impedance(const ChainConfig& config);

/// Full pipeline. `z_in` skips the converter probe when given. Solver
/// failures are rethrown as ConvergenceError naming the stage.
ChainResult run_chain(const ChainConfig& config, std::optional<std::complex<double>> z_in = std::nullopt);

struct SweepRow {
    double x = 0.0;
    double v_dc = 0.0;
    double efficiency_pct = 0.0;
    bool settled = false;
};

struct SweepResult {
    std::string kind;  // "power" or "load"
    std::string config_hash;
    std::vector<SweepRow> rows;
    std::optional<std::size_t> argmax;  // load sweeps: best settled efficiency
};

struct SweepOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

/// One run_chain per point in dBm; the converter impedance is probed once.
SweepResult sweep_input_power(const ChainConfig& config, double from_dbm, double to_dbm, double step_db,
                              const SweepOptions& options = {});

/// One run_chain per load with the ladder re-probed and re-matched at each.
SweepResult sweep_load(const ChainConfig& config, const std::vector<double>& loads,
                       const SweepOptions& options = {});

/// `n` points from `lo` to `hi`, evenly spaced in log.
std::vector<double> log_grid(double lo, double hi, int n);

/// `# sweep=<kind> config=<hash>` then `x,v_dc_V,efficiency_pct,settled`.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace rectenna::chain
