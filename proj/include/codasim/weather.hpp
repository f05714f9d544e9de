#ifndef CODASIM_WEATHER_HPP
#define CODASIM_WEATHER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "codasim/building.hpp"
#include "codasim/physics.hpp"
#include "codasim/timeutil.hpp"

namespace codasim {

struct WeatherRecord {
    TimePoint time = 0;
    double drybulb = 20.0;           // degC
    double humidity = 0.008;         // kg/kg
    double windSpeed = 0.0;          // m/s
    double windDirection = 0.0;      // deg from North, direction wind comes from
    double directNormal = 0.0;       // W/m^2
    double diffuseHorizontal = 0.0;  // W/m^2
    double pressure = kStandardPressure; // Pa
    bool operator==(const WeatherRecord&) const = default;
};

// Strictly hourly, gap-free series.  parseWeather enforces both.
struct WeatherSeries {
    std::vector<WeatherRecord> records;

    bool empty() const { return records.empty(); }
    TimePoint startTime() const { return records.front().time; }
    TimePoint endTime() const { return records.back().time; }
    bool covers(TimePoint t) const {
        return !records.empty() && t >= startTime() && t <= endTime();
    }

    // Record at t; linearly interpolated between hourly records.
    // Throws WeatherCoverageError outside the covered span.
    WeatherRecord at(TimePoint t) const;

    bool operator==(const WeatherSeries&) const = default;
};

struct WeatherParseResult {
    WeatherSeries series;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

// Total function: never throws on malformed input, diagnostics carry
// line/column.  Accepts either a humidity_kgkg or an rh_pct column; relative
// humidity is converted through the saturation-pressure correlation.
WeatherParseResult parseWeather(std::string_view text);

std::string serializeWeather(const WeatherSeries& series);

} // namespace codasim

#endif
