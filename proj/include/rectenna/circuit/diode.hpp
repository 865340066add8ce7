// diode.hpp - Shockley diode model
#pragma once

#include <string>

namespace rectenna::circuit {

/// Thermal voltage kT/q at 300 K.
inline constexpr double kThermalVoltage300K = 0.025852;

/// Exponent argument beyond which the Shockley exponential is continued
/// linearly, keeping current and conductance finite for any bias.
inline constexpr double kExponentClamp = 40.0;

struct DiodeModel {
    std::string name = "D";
    double saturation_current = 1e-14;  // A
    double ideality = 1.0;
    double series_resistance = 0.0;     // ohm
    double junction_capacitance = 0.0;  // F, zero-bias value held constant
    double thermal_voltage = kThermalVoltage300K;

    /// Throws ArgumentError if any parameter is outside its physical range.
    void validate() const;

    double emission_voltage() const { return ideality * thermal_voltage; }
};

/// Skyworks SMS7621 zero-bias Schottky (same values as data/sms7621.model).
DiodeModel sms7621();

/// Is * (exp(v / (n Vt)) - 1) with the exponent continued linearly above
/// kExponentClamp. Strictly increasing in v.
double diode_current(const DiodeModel& model, double v);

/// d(diode_current)/dv, consistent with the clamped continuation.
double diode_conductance(const DiodeModel& model, double v);

/// Junction voltage above which Newton updates are damped:
/// n Vt ln(n Vt / (sqrt(2) Is)).
double critical_voltage(const DiodeModel& model);

}  // namespace rectenna::circuit
