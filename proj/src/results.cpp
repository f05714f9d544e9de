#include "codasim/results.hpp"

#include <cstdio>
#include <cstdlib>
#include <string_view>

#include "codasim/errors.hpp"

namespace codasim {

const char* outputVariableUnit(OutputVariable var) {
    switch (var) {
    case OutputVariable::ZoneAirTemperature:
    case OutputVariable::SurfaceTemperatureInterior:
    case OutputVariable::SurfaceTemperatureExterior:
    case OutputVariable::ComfortIndex:
        return "C";
    case OutputVariable::SurfaceFlux: return "Wm2";
    case OutputVariable::ZonePressure: return "Pa";
    case OutputVariable::LinkFlow: return "kgs";
    case OutputVariable::ZoneHumidity: return "kgkg";
    case OutputVariable::HvacPower: return "W";
    }
    return "?";
}

std::string ResultColumn::header() const {
    return entityId + "." + outputVariableName(variable) + "_" + outputVariableUnit(variable);
}

void ResultSet::addRow(TimePoint t, std::vector<double> values) {
    if (values.size() != columns.size())
        throw SimulationError("result row width does not match the column count");
    times.push_back(t);
    rows.push_back(std::move(values));
}

std::string serializeResults(const ResultSet& results) {
    std::string out = "# codasim-results v1\n";
    out += "time";
    for (const ResultColumn& c : results.columns) {
        out += ',';
        out += c.header();
    }
    out += '\n';
    char buf[64];
    for (size_t i = 0; i < results.rows.size(); ++i) {
        out += formatTime(results.times[i]);
        for (double v : results.rows[i]) {
            std::snprintf(buf, sizeof buf, ",%.9g", v);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

namespace {

[[noreturn]] void malformed(int line, const std::string& what) {
    throw SimulationError("results file, line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> splitCsv(std::string_view line) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        const size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Headers are "<entity>.<variable>_<unit>"; the entity may itself contain
// dots, so match known variable/unit suffixes from the right.
ResultColumn columnFromHeader(std::string_view header, int line) {
    for (OutputVariable v :
         {OutputVariable::ZoneAirTemperature, OutputVariable::SurfaceTemperatureInterior,
          OutputVariable::SurfaceTemperatureExterior, OutputVariable::SurfaceFlux,
          OutputVariable::ZonePressure, OutputVariable::LinkFlow, OutputVariable::ZoneHumidity,
          OutputVariable::HvacPower, OutputVariable::ComfortIndex}) {
        const std::string suffix =
            std::string(".") + outputVariableName(v) + "_" + outputVariableUnit(v);
        if (header.size() > suffix.size() && header.ends_with(suffix))
            return {std::string(header.substr(0, header.size() - suffix.size())), v};
    }
    malformed(line, "unrecognized column header '" + std::string(header) + "'");
}

} // namespace

ResultSet parseResults(std::string_view text) {
    ResultSet rs;
    int lineNo = 0;
    size_t pos = 0;
    bool sawMagic = false, sawHeader = false;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (pos > text.size()) break;
            continue;
        }
        if (!sawMagic) {
            if (line != "# codasim-results v1") malformed(lineNo, "missing results magic line");
            sawMagic = true;
            continue;
        }
        if (!sawHeader) {
            const auto fields = splitCsv(line);
            if (fields.empty() || fields[0] != "time") malformed(lineNo, "header must start with 'time'");
            for (size_t i = 1; i < fields.size(); ++i)
                rs.columns.push_back(columnFromHeader(fields[i], lineNo));
            sawHeader = true;
            continue;
        }
        const auto fields = splitCsv(line);
        if (fields.size() != rs.columns.size() + 1)
            malformed(lineNo, "expected " + std::to_string(rs.columns.size() + 1) + " fields, got " +
                                  std::to_string(fields.size()));
        TimePoint t = 0;
        if (!parseTime(std::string(fields[0]), t)) malformed(lineNo, "bad timestamp");
        std::vector<double> values;
        values.reserve(fields.size() - 1);
        for (size_t i = 1; i < fields.size(); ++i) {
            const std::string f(fields[i]);
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0') malformed(lineNo, "bad number '" + f + "'");
            values.push_back(v);
        }
        rs.addRow(t, std::move(values));
    }
    if (!sawMagic) malformed(1, "empty results file");
    if (!sawHeader) malformed(lineNo, "missing header row");
    return rs;
}

} // namespace codasim
