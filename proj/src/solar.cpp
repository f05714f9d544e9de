#include "codasim/solar.hpp"

#include <algorithm>
#include <cmath>

namespace codasim {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
}

SunPosition sunPosition(TimePoint t, const Site& site) {
    const int n = dayOfYear(t);
    const double declination = 23.45 * std::sin(2.0 * M_PI * (284.0 + n) / 365.0);

    const double b = 2.0 * M_PI * (n - 1) / 365.0;
    const double eotMinutes = 229.2 * (0.000075 + 0.001868 * std::cos(b) - 0.032077 * std::sin(b) -
                                       0.014615 * std::cos(2 * b) - 0.04089 * std::sin(2 * b));
    const double solarHour =
        hourOfDay(t) + (4.0 * (site.longitude - site.meridian) + eotMinutes) / 60.0;
    const double hourAngle = 15.0 * (solarHour - 12.0);

    const double phi = site.latitude * kDegToRad;
    const double delta = declination * kDegToRad;
    const double omega = hourAngle * kDegToRad;

    const double sinAlt = std::sin(phi) * std::sin(delta) + std::cos(phi) * std::cos(delta) * std::cos(omega);
    const double altitude = std::asin(std::clamp(sinAlt, -1.0, 1.0));

    SunPosition sun;
    sun.altitudeDeg = altitude / kDegToRad;
    sun.up = sun.altitudeDeg > 0.0;

    const double cosAlt = std::cos(altitude);
    double azimuth = 0.0;
    if (cosAlt > 1e-9) {
        double cosAz = (std::sin(delta) - sinAlt * std::sin(phi)) / (cosAlt * std::cos(phi));
        azimuth = std::acos(std::clamp(cosAz, -1.0, 1.0)) / kDegToRad; // from North toward East
        if (hourAngle > 0) azimuth = 360.0 - azimuth;                  // afternoon: West side
    }
    sun.azimuthDeg = azimuth;
    return sun;
}

double incidentShortwave(const SunPosition& sun, double directNormal, double diffuseHorizontal,
                         double surfaceAzimuthDeg, double surfaceTiltDeg) {
    const double beta = surfaceTiltDeg * kDegToRad;
    double beam = 0.0;
    if (sun.up && directNormal > 0.0) {
        const double alt = sun.altitudeDeg * kDegToRad;
        const double az = sun.azimuthDeg * kDegToRad;
        const double gamma = surfaceAzimuthDeg * kDegToRad;
        // unit vectors in (East, North, Up)
        const double sunE = std::cos(alt) * std::sin(az);
        const double sunN = std::cos(alt) * std::cos(az);
        const double sunU = std::sin(alt);
        const double nrmE = std::sin(beta) * std::sin(gamma);
        const double nrmN = std::sin(beta) * std::cos(gamma);
        const double nrmU = std::cos(beta);
        const double cosIncidence = sunE * nrmE + sunN * nrmN + sunU * nrmU;
        beam = directNormal * std::max(0.0, cosIncidence);
    }
    const double diffuse = diffuseHorizontal * (1.0 + std::cos(beta)) / 2.0;
    return beam + diffuse;
}

} // namespace codasim
