#ifndef CODASIM_PHYSICS_HPP
#define CODASIM_PHYSICS_HPP

#include <cmath>

// Physical constants and psychrometric helpers shared by all modules.

namespace codasim {

constexpr double kGravity = 9.80665;          // m/s^2
constexpr double kAirCp = 1006.0;             // J/(kg K), dry air
constexpr double kRefAirDensity = 1.204;      // kg/m^3 at kRefAirTempK
constexpr double kRefAirTempK = 293.15;       // K
constexpr double kStandardPressure = 101325.0; // Pa
constexpr double kCelsiusOffset = 273.15;
constexpr double kHumidityRatioFactor = 0.62198; // Mw/Ma

// Ideal-gas density at fixed pressure, anchored at 20 degC.
inline double airDensity(double tempC) {
    return kRefAirDensity * kRefAirTempK / (tempC + kCelsiusOffset);
}

// Saturation vapor pressure over liquid water, Pa.  Hyland-Wexler
// correlation, valid 0..200 degC:
//   ln(pws) = c1/T + c2 + c3 T + c4 T^2 + c5 T^3 + c6 ln(T),  T in K.
inline double saturationPressure(double tempC) {
    const double T = tempC + kCelsiusOffset;
    const double c1 = -5800.2206;
    const double c2 = 1.3914993;
    const double c3 = -0.04860239;
    const double c4 = 4.1764768e-5;
    const double c5 = -1.4452093e-8;
    const double c6 = 6.5459673;
    return std::exp(c1 / T + c2 + c3 * T + c4 * T * T + c5 * T * T * T + c6 * std::log(T));
}

// Humidity ratio (kg water / kg dry air) from relative humidity in percent.
inline double humidityFromRelative(double rhPercent, double tempC, double pressurePa = kStandardPressure) {
    const double pv = rhPercent / 100.0 * saturationPressure(tempC);
    return kHumidityRatioFactor * pv / (pressurePa - pv);
}

// Humidity ratio at saturation for a given temperature.
inline double saturationHumidity(double tempC, double pressurePa = kStandardPressure) {
    const double pv = saturationPressure(tempC);
    return kHumidityRatioFactor * pv / (pressurePa - pv);
}

} // namespace codasim

#endif
