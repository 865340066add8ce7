#include "rectenna/matching.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace rectenna::matching {

double matching_resistor(Impedance z_in) {
    if (!(z_in.real() > 0.0) || !std::isfinite(z_in.real()))
        throw ArgumentError("converter impedance needs a positive finite real part");
    return z_in.real();
}

double delivered_power_fraction(Impedance z_source, Impedance z_load) {
    if (!(z_source.real() > 0.0) || !std::isfinite(std::abs(z_source)))
        throw ArgumentError("source impedance needs a positive finite real part");
    if (!(z_load.real() > 0.0)) throw ArgumentError("load impedance needs a positive real part");
    if (!std::isfinite(std::abs(z_load))) return 0.0;
    const Impedance gamma = (z_load - std::conj(z_source)) / (z_load + z_source);
    return std::clamp(1.0 - std::norm(gamma), 0.0, 1.0);
}

MatchReport match_converter(Impedance z_in) {
    MatchReport r;
    r.converter_impedance = z_in;
    r.chosen_resistor = matching_resistor(z_in);
    r.predicted_delivered_fraction = delivered_power_fraction(r.chosen_resistor, z_in);
    return r;
}

void write_match_csv_header(std::ostream& out) {
    out << "converter_re_ohm,converter_im_ohm,chosen_resistor_ohm,delivered_fraction\n";
}

void write_match_csv_row(std::ostream& out, const MatchReport& r) {
    out << format_number(r.converter_impedance.real()) << ','
        << format_number(r.converter_impedance.imag()) << ',' << format_number(r.chosen_resistor)
        << ',' << format_number(r.predicted_delivered_fraction) << '\n';
}

void print_match_report(std::ostream& out, const MatchReport& r) {
    const double im = r.converter_impedance.imag();
    out << "converter impedance   " << format_number(r.converter_impedance.real())
        << (im < 0 ? " - j" : " + j") << format_number(std::abs(im)) << " ohm\n"
        << "matching resistor     " << format_number(r.chosen_resistor) << " ohm\n"
        << "delivered fraction    " << format_number(r.predicted_delivered_fraction) << '\n';
}

}  // namespace rectenna::matching
