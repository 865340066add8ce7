#include "rectenna/combiner.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <cmath>

namespace rectenna::combiner {

namespace {

constexpr double kFreeSpaceImpedance = 376.730313668;

/// Wheeler width-to-height ratio for a target impedance.
double synthesize_ratio(double z0, double er) {
    const double a = z0 / 60.0 * std::sqrt((er + 1.0) / 2.0) + (er - 1.0) / (er + 1.0) * (0.23 + 0.11 / er);
    const double narrow = 8.0 * std::exp(a) / (std::exp(2.0 * a) - 2.0);
    if (narrow > 0.0 && narrow <= 2.0) return narrow;
    const double b = 377.0 * kPi / (2.0 * z0 * std::sqrt(er));
    return 2.0 / kPi *
           (b - 1.0 - std::log(2.0 * b - 1.0) +
            (er - 1.0) / (2.0 * er) * (std::log(b - 1.0) + 0.39 - 0.61 / er));
}

}  // namespace

MicrostripAnalysis microstrip_analysis(double width, double eps_r, double h) {
    if (!(width > 0.0) || !(h > 0.0)) throw ArgumentError("width and substrate height must be > 0");
    if (!(eps_r >= 1.0)) throw ArgumentError("eps_r must be >= 1");
    const double u = width / h;
    const double a = 1.0 + std::log((std::pow(u, 4) + std::pow(u / 52.0, 2)) / (std::pow(u, 4) + 0.432)) / 49.0 +
                     std::log(1.0 + std::pow(u / 18.1, 3)) / 18.7;
    const double b = 0.564 * std::pow((eps_r - 0.9) / (eps_r + 3.0), 0.053);
    const double eff = (eps_r + 1.0) / 2.0 + (eps_r - 1.0) / 2.0 * std::pow(1.0 + 10.0 / u, -a * b);
    const double f = 6.0 + (2.0 * kPi - 6.0) * std::exp(-std::pow(30.666 / u, 0.7528));
    const double z_air = kFreeSpaceImpedance / (2.0 * kPi) * std::log(f / u + std::sqrt(1.0 + 4.0 / (u * u)));
    return {z_air / std::sqrt(eff), eff};
}

MicrostripLine microstrip_synthesis(double z0, double eps_r, double h, double f0) {
    if (!(z0 >= 10.0 && z0 <= 200.0)) throw ArgumentError("z0 must be within [10, 200] ohm");
    if (!(eps_r >= 1.0)) throw ArgumentError("eps_r must be >= 1");
    if (!(h > 0.0)) throw ArgumentError("substrate height must be > 0");
    if (!(f0 > 0.0)) throw ArgumentError("f0 must be > 0");

    MicrostripLine line;
    line.width = synthesize_ratio(z0, eps_r) * h;
    line.effective_eps = microstrip_analysis(line.width, eps_r, h).effective_eps;
    line.quarter_wave_length = kSpeedOfLight / (4.0 * f0 * std::sqrt(line.effective_eps));
    return line;
}

}  // namespace rectenna::combiner
