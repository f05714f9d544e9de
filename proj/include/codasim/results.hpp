#ifndef CODASIM_RESULTS_HPP
#define CODASIM_RESULTS_HPP

#include <string>
#include <vector>

#include "codasim/building.hpp"
#include "codasim/timeutil.hpp"

// Tabular simulation output: one row per reporting instant, one column per
// requested (entity, variable) pair.

namespace codasim {

struct ResultColumn {
    std::string entityId;
    OutputVariable variable = OutputVariable::ZoneAirTemperature;
    std::string header() const; // "<entity>.<variable>_<unit>"
};

struct ResultSet {
    std::vector<ResultColumn> columns;
    std::vector<TimePoint> times;
    std::vector<std::vector<double>> rows;

    void addRow(TimePoint t, std::vector<double> values);
    size_t rowCount() const { return rows.size(); }
};

const char* outputVariableUnit(OutputVariable var);

// CSV with a version magic, ISO timestamps and %.9g values.
std::string serializeResults(const ResultSet& results);

// Reads a serialized results file back; throws SimulationError with the
// offending line number on malformed input.
ResultSet parseResults(std::string_view text);

} // namespace codasim

#endif
