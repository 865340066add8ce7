#include "rectenna/circuit/diode.hpp"

#include "rectenna/errors.hpp"

#include <cmath>

namespace rectenna::circuit {

void DiodeModel::validate() const {
    auto bad = [this](const char* what) {
        throw ArgumentError("diode model '" + name + "': " + what);
    };
    if (!(saturation_current > 0.0) || !std::isfinite(saturation_current))
        bad("saturation_current must be > 0");
    if (!(ideality >= 1.0 && ideality <= 2.0)) bad("ideality must be in [1, 2]");
    if (!(series_resistance >= 0.0) || !std::isfinite(series_resistance))
        bad("series_resistance must be >= 0");
    if (!(junction_capacitance >= 0.0) || !std::isfinite(junction_capacitance))
        bad("junction_capacitance must be >= 0");
    if (!(thermal_voltage > 0.0) || !std::isfinite(thermal_voltage))
        bad("thermal_voltage must be > 0");
}

DiodeModel sms7621() {
    DiodeModel m;
    m.name = "SMS7621";
    m.saturation_current = 4e-8;
    m.ideality = 1.05;
    m.series_resistance = 12.0;
    m.junction_capacitance = 0.1e-12;
    m.thermal_voltage = 25.852e-3;
    return m;
}

double diode_current(const DiodeModel& model, double v) {
    const double x = v / model.emission_voltage();
    if (x <= kExponentClamp) return model.saturation_current * std::expm1(x);
    const double e = std::exp(kExponentClamp);
    return model.saturation_current * (e * (1.0 + (x - kExponentClamp)) - 1.0);
}

double diode_conductance(const DiodeModel& model, double v) {
    const double nvt = model.emission_voltage();
    const double x = std::min(v / nvt, kExponentClamp);
    return model.saturation_current * std::exp(x) / nvt;
}

double critical_voltage(const DiodeModel& model) {
    const double nvt = model.emission_voltage();
    return nvt * std::log(nvt / (std::sqrt(2.0) * model.saturation_current));
}

}  // namespace rectenna::circuit
