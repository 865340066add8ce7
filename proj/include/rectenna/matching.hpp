// matching.hpp - connector-less resistor matching at the combiner branch
#pragma once

#include <complex>
#include <iosfwd>

namespace rectenna::matching {

using Impedance = std::complex<double>;

/// Resistor value mounted at the combining leg for a converter input
/// impedance: its real part. A resistor cannot cancel reactance; the
/// remainder shows up in MatchReport::predicted_delivered_fraction.
double matching_resistor(Impedance z_in);

/// 1 - |Gamma|^2 for the power-wave reflection coefficient
/// (z_load - conj(z_source)) / (z_load + z_source). An infinite load gives 0.
double delivered_power_fraction(Impedance z_source, Impedance z_load);

struct MatchReport {
    Impedance converter_impedance;
    double chosen_resistor = 0.0;
    double predicted_delivered_fraction = 0.0;
};

MatchReport match_converter(Impedance z_in);

/// `converter_re_ohm,converter_im_ohm,chosen_resistor_ohm,delivered_fraction`
void write_match_csv_header(std::ostream& out);
void write_match_csv_row(std::ostream& out, const MatchReport& report);
/// Human-readable block for the CLI.
void print_match_report(std::ostream& out, const MatchReport& report);

}  // namespace rectenna::matching
