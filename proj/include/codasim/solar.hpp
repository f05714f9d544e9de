#ifndef CODASIM_SOLAR_HPP
#define CODASIM_SOLAR_HPP

#include "codasim/building.hpp"
#include "codasim/timeutil.hpp"

namespace codasim {

struct SunPosition {
    double altitudeDeg = -90; // above horizon
    double azimuthDeg = 0;    // from North, clockwise through East
    bool up = false;
};

// Declination (Cooper), equation of time (Spencer-style series), hour angle
// from local solar time.  Timestamps are civil time at the site meridian.
SunPosition sunPosition(TimePoint t, const Site& site);

// Shortwave irradiance on a tilted surface, W/m^2: projected beam plus
// isotropic sky diffuse.  Surface azimuth from North, tilt from horizontal.
double incidentShortwave(const SunPosition& sun, double directNormal, double diffuseHorizontal,
                         double surfaceAzimuthDeg, double surfaceTiltDeg);

} // namespace codasim

#endif
