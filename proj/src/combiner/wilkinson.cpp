#include "rectenna/combiner.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <cmath>
#include <ostream>

namespace rectenna::combiner {

namespace {

constexpr Complex j{0.0, 1.0};

/// Input impedance of a lossless line of impedance zc and electrical length
/// theta terminated in z_load. Stays finite at theta = 90 deg.
Complex line_input(double zc, double theta, Complex z_load) {
    const double c = std::cos(theta), s = std::sin(theta);
    return zc * (z_load * c + j * zc * s) / (zc * c + j * z_load * s);
}

Complex reflection(Complex z, double ref) { return (z - ref) / (z + ref); }

}  // namespace

WilkinsonDesign design_wilkinson(int n_ways, double r_s, double r_l, double f0) {
    if (n_ways < 2) throw ArgumentError("n_ways must be >= 2");
    if (!(r_s > 0.0) || !(r_l > 0.0) || !(f0 > 0.0) || !std::isfinite(r_s) || !std::isfinite(r_l) ||
        !std::isfinite(f0))
        throw ArgumentError("impedances and center frequency must be positive");
    WilkinsonDesign d;
    d.n_ways = n_ways;
    d.source_impedance = r_s;
    d.load_impedance = r_l;
    d.quarter_wave_impedance = std::sqrt(static_cast<double>(n_ways) * r_l * r_s);
    d.isolation_resistor = r_l;
    d.center_frequency = f0;
    return d;
}

SMatrix sparams(const WilkinsonDesign& d, double frequency) {
    if (d.n_ways != 2)
        throw UnsupportedError("S-parameters are only evaluated for 2-way combiners");
    if (!(frequency > 0.0)) throw ArgumentError("frequency must be > 0");

    const double theta = 0.5 * kPi * frequency / d.center_frequency;
    const double zq = d.quarter_wave_impedance;
    const double rs = d.source_impedance, rl = d.load_impedance, r = d.isolation_resistor;

    // Even mode: no current in the star, common port split into two 2 R_S halves.
    const Complex zin_even = line_input(zq, theta, 2.0 * rs);
    const Complex gamma_even = reflection(zin_even, rl);
    // Odd mode: star node and common port at virtual ground.
    const Complex z_short = j * zq * std::sin(theta) / std::cos(theta);
    const Complex zin_odd = std::abs(std::cos(theta)) < 1e-300 ? Complex(r) : r * z_short / (r + z_short);
    const Complex gamma_odd = reflection(zin_odd, rl);

    const Complex zin_common = 0.5 * line_input(zq, theta, rl);
    const Complex s11 = reflection(zin_common, rs);

    // Even half circuit as a two-port from the 2 R_S half port to port 2.
    const double za = 2.0 * rs, zb = rl;
    const Complex a = std::cos(theta), b = j * zq * std::sin(theta), c = j * std::sin(theta) / zq,
                  dd = std::cos(theta);
    const Complex s21_half = 2.0 * std::sqrt(za * zb) / (a * zb + b + c * za * zb + dd * za);
    const Complex s21 = s21_half / std::sqrt(2.0);

    SMatrix out;
    out.frequency = frequency;
    out.entries.resize(3, 3);
    out.entries << s11, s21, s21,
                   s21, 0.5 * (gamma_even + gamma_odd), 0.5 * (gamma_even - gamma_odd),
                   s21, 0.5 * (gamma_even - gamma_odd), 0.5 * (gamma_even + gamma_odd);
    return out;
}

CombineResult combine(std::span<const Complex> inputs, const WilkinsonDesign& d, double frequency) {
    if (static_cast<int>(inputs.size()) != d.n_ways)
        throw ArgumentError("combine needs one input per split port (" + std::to_string(d.n_ways) + ")");
    const SMatrix s = sparams(d, frequency);
    const double rs = d.source_impedance, rl = d.load_impedance;

    Eigen::VectorXcd a(3);
    a << 0.0, inputs[0] / std::sqrt(rl), inputs[1] / std::sqrt(rl);
    const Eigen::VectorXcd b = s.entries * a;

    CombineResult out;
    out.output = std::sqrt(rs) * b[0];
    out.input_power = 0.5 * (std::norm(a[1]) + std::norm(a[2]));
    out.output_power = 0.5 * std::norm(b[0]);
    out.reflected_power = 0.5 * (std::norm(b[1]) + std::norm(b[2]));
    const Complex v2 = std::sqrt(rl) * (a[1] + b[1]);
    const Complex v3 = std::sqrt(rl) * (a[2] + b[2]);
    // Two equal star arms: the star node sits at the mean of the port voltages.
    out.dissipated_in_isolation = std::norm(v2 - v3) / (4.0 * d.isolation_resistor);
    return out;
}

void write_touchstone(std::ostream& out, std::span<const SMatrix> data, std::span<const double> port_refs) {
    if (data.empty()) throw ArgumentError("no S-matrices to write");
    const auto ports = data.front().entries.rows();
    if (static_cast<Eigen::Index>(port_refs.size()) != ports)
        throw ArgumentError("one reference impedance per port is required");
    out << "! rectenna Wilkinson combiner, ideal lossless lines\n! port reference impedances (ohm):";
    for (double r : port_refs) out << ' ' << format_number(r);
    out << "\n# Hz S RI R " << format_number(port_refs.front()) << '\n';
    for (const auto& m : data) {
        for (Eigen::Index row = 0; row < ports; ++row) {
            out << (row == 0 ? format_number(m.frequency) : std::string(" "));
            for (Eigen::Index col = 0; col < ports; ++col)
                out << ' ' << format_number(m.entries(row, col).real()) << ' '
                    << format_number(m.entries(row, col).imag());
            out << '\n';
        }
    }
}

}  // namespace rectenna::combiner
