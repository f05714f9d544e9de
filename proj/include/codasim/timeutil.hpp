#ifndef CODASIM_TIMEUTIL_HPP
#define CODASIM_TIMEUTIL_HPP

#include <cstdint>
#include <cstdio>
#include <string>

namespace codasim {

// Timestamps are seconds since 1970-01-01T00:00 (proleptic Gregorian, no
// leap seconds, no time zones).  Weather records and run horizons use this.
using TimePoint = std::int64_t;

struct CivilTime {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
inline std::int64_t daysFromCivil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline CivilTime civilFromDays(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    CivilTime c;
    c.year = static_cast<int>(y + (m <= 2));
    c.month = static_cast<int>(m);
    c.day = static_cast<int>(d);
    return c;
}

inline TimePoint makeTime(int year, int month, int day, int hour = 0, int minute = 0, int second = 0) {
    return daysFromCivil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
}

inline CivilTime civilFromTime(TimePoint t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t - days * 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    CivilTime c = civilFromDays(days);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem % 3600) / 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

// 1-based day of year, needed for solar declination.
inline int dayOfYear(TimePoint t) {
    CivilTime c = civilFromTime(t);
    return static_cast<int>(t / 86400 - daysFromCivil(c.year, 1, 1)) + 1;
}

// Hour of day in [0,24), fractional.
inline double hourOfDay(TimePoint t) {
    std::int64_t rem = t % 86400;
    if (rem < 0) rem += 86400;
    return static_cast<double>(rem) / 3600.0;
}

inline std::string formatTime(TimePoint t) {
    CivilTime c = civilFromTime(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", c.year, c.month, c.day, c.hour, c.minute);
    return buf;
}

// Parses "YYYY-MM-DDThh:mm" (also accepts a space separator and an optional
// ":ss" suffix).  Returns false on any malformation.
bool parseTime(const std::string& text, TimePoint& out);

} // namespace codasim

#endif
