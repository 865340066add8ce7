// combiner.hpp - Wilkinson power combiner design and network evaluation
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

namespace rectenna::combiner {

using Complex = std::complex<double>;

/// N-way Wilkinson with a star isolation network: each split port reaches a
/// common floating node through `isolation_resistor`.
struct WilkinsonDesign {
    int n_ways = 2;
    double source_impedance = 50.0;  // R_S, common port
    double load_impedance = 50.0;    // R_L, each split port
    double quarter_wave_impedance = 0.0;
    double isolation_resistor = 0.0;
    double center_frequency = 0.0;
};

/// Z = sqrt(N R_L R_S) per quarter-wave arm, R = R_L per star arm.
WilkinsonDesign design_wilkinson(int n_ways, double r_s, double r_l, double f0);

/// Port 1 is the common port (reference R_S), ports 2..N+1 the split
/// ports (reference R_L). Power waves with real references.
struct SMatrix {
    double frequency = 0.0;
    Eigen::MatrixXcd entries;
};

/// Ideal lossless lines of electrical length 90 deg * f / f0, evaluated by
/// even/odd-mode decomposition. Two-way designs only; UnsupportedError
/// otherwise.
SMatrix sparams(const WilkinsonDesign& design, double frequency);

struct CombineResult {
    Complex output;  // V, peak voltage phasor at the common port into R_S
    double input_power = 0.0;      // W, sum of incident split-port powers
    double output_power = 0.0;     // W
    double reflected_power = 0.0;  // W, leaving the split ports
    double dissipated_in_isolation = 0.0;  // W
};

/// `inputs` are incident peak voltage waves at the split ports, referenced
/// to R_L (incident power |a|^2 / (2 R_L)). The common port is terminated
/// in R_S. Isolation dissipation is computed from the resistor voltages.
CombineResult combine(std::span<const Complex> inputs, const WilkinsonDesign& design, double frequency);

struct MicrostripLine {
    double width = 0.0;                // m
    double effective_eps = 0.0;
    double quarter_wave_length = 0.0;  // m
};

/// Wheeler closed-form width synthesis; effective permittivity from the
/// Hammerstad-Jensen model at that width. z0 must lie in [10, 200] ohm.
MicrostripLine microstrip_synthesis(double z0, double eps_r, double substrate_height, double f0);

struct MicrostripAnalysis {
    double z0 = 0.0;
    double effective_eps = 0.0;
};

/// Hammerstad-Jensen quasi-static analysis of a zero-thickness strip.
MicrostripAnalysis microstrip_analysis(double width, double eps_r, double substrate_height);

/// Touchstone v1 (`# Hz S RI R <ref>`), one frequency block per SMatrix.
/// Per-port reference impedances go in `!` comments since v1 carries one.
void write_touchstone(std::ostream& out, std::span<const SMatrix> data, std::span<const double> port_refs);

}  // namespace rectenna::combiner
