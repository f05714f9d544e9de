#ifndef CODASIM_SCHEDULE_HPP
#define CODASIM_SCHEDULE_HPP

#include <vector>

#include "codasim/timeutil.hpp"

namespace codasim {

// Piecewise-constant daily profile.  One value means a constant schedule;
// 24 values repeat every day, indexed by hour of day.
struct Schedule {
    std::vector<double> values{0.0};

    Schedule() = default;
    explicit Schedule(double constant) : values{constant} {}
    explicit Schedule(std::vector<double> hourly) : values(std::move(hourly)) {}

    bool constant() const { return values.size() == 1; }

    double at(TimePoint t) const {
        if (values.size() == 1) return values[0];
        int h = static_cast<int>(hourOfDay(t));
        if (h < 0) h = 0;
        if (h > 23) h = 23;
        return values[static_cast<unsigned>(h) % values.size()];
    }

    bool operator==(const Schedule&) const = default;
};

} // namespace codasim

#endif
