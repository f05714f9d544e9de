#include "codasim/weather.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "codasim/errors.hpp"

namespace codasim {

WeatherRecord WeatherSeries::at(TimePoint t) const {
    if (!covers(t))
        throw WeatherCoverageError("weather series does not cover " + formatTime(t), t);
    const std::int64_t offset = t - startTime();
    const size_t i = static_cast<size_t>(offset / 3600);
    const double frac = static_cast<double>(offset % 3600) / 3600.0;
    if (frac == 0.0 || i + 1 >= records.size()) return records[i];
    const WeatherRecord& a = records[i];
    const WeatherRecord& b = records[i + 1];
    auto lerp = [frac](double x, double y) { return x + frac * (y - x); };
    WeatherRecord r;
    r.time = t;
    r.drybulb = lerp(a.drybulb, b.drybulb);
    r.humidity = lerp(a.humidity, b.humidity);
    r.windSpeed = lerp(a.windSpeed, b.windSpeed);
    r.windDirection = a.windDirection; // direction does not interpolate cleanly
    r.directNormal = lerp(a.directNormal, b.directNormal);
    r.diffuseHorizontal = lerp(a.diffuseHorizontal, b.diffuseHorizontal);
    r.pressure = lerp(a.pressure, b.pressure);
    return r;
}

namespace {

constexpr const char* kWeatherMagic = "# codasim-weather v1";

struct Field {
    std::string text;
    int column = 1; // 1-based start column within the line
};

std::vector<Field> splitCsvLine(const std::string& line) {
    std::vector<Field> fields;
    Field cur;
    cur.column = 1;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == ',') {
            fields.push_back(cur);
            cur = Field{};
            cur.column = static_cast<int>(i) + 2;
        } else {
            cur.text += line[i];
        }
    }
    fields.push_back(cur);
    for (Field& f : fields) { // trim
        size_t b = f.text.find_first_not_of(" \t\r");
        size_t e = f.text.find_last_not_of(" \t\r");
        if (b == std::string::npos) {
            f.text.clear();
        } else {
            f.column += static_cast<int>(b);
            f.text = f.text.substr(b, e - b + 1);
        }
    }
    return fields;
}

bool parseNumber(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

enum Column {
    ColTime,
    ColDrybulb,
    ColHumidity,
    ColRh,
    ColWindSpeed,
    ColWindDir,
    ColDni,
    ColDhi,
    ColPressure,
    ColUnknown,
};

Column columnFromName(const std::string& name) {
    if (name == "time") return ColTime;
    if (name == "drybulb_C") return ColDrybulb;
    if (name == "humidity_kgkg") return ColHumidity;
    if (name == "rh_pct") return ColRh;
    if (name == "wind_speed_ms") return ColWindSpeed;
    if (name == "wind_dir_deg") return ColWindDir;
    if (name == "dni_Wm2") return ColDni;
    if (name == "dhi_Wm2") return ColDhi;
    if (name == "pressure_Pa") return ColPressure;
    return ColUnknown;
}

const char* columnName(Column c) {
    switch (c) {
    case ColTime: return "time";
    case ColDrybulb: return "drybulb_C";
    case ColHumidity: return "humidity_kgkg";
    case ColRh: return "rh_pct";
    case ColWindSpeed: return "wind_speed_ms";
    case ColWindDir: return "wind_dir_deg";
    case ColDni: return "dni_Wm2";
    case ColDhi: return "dhi_Wm2";
    case ColPressure: return "pressure_Pa";
    case ColUnknown: break;
    }
    return "?";
}

} // namespace

WeatherParseResult parseWeather(std::string_view text) {
    WeatherParseResult result;
    auto& diags = result.diagnostics;

    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }

    if (lines.empty() || lines[0].rfind(kWeatherMagic, 0) != 0) {
        diags.push_back({"weather", "missing header magic '" + std::string(kWeatherMagic) + "'",
                         {1, 1}});
        return result;
    }
    if (lines.size() < 2) {
        diags.push_back({"weather", "missing column header row", {1, 1}});
        return result;
    }

    std::vector<Column> layout;
    {
        std::vector<Field> header = splitCsvLine(lines[1]);
        bool haveHumidity = false, haveRh = false;
        std::vector<bool> seen(ColUnknown, false);
        for (const Field& f : header) {
            Column c = columnFromName(f.text);
            if (c == ColUnknown) {
                diags.push_back({"weather", "unknown column '" + f.text + "'", {2, f.column}});
            } else if (seen[c]) {
                diags.push_back({"weather", "duplicate column '" + f.text + "'", {2, f.column}});
            } else {
                seen[c] = true;
            }
            layout.push_back(c);
            if (c == ColHumidity) haveHumidity = true;
            if (c == ColRh) haveRh = true;
        }
        for (Column req : {ColTime, ColDrybulb, ColWindSpeed, ColWindDir, ColDni, ColDhi})
            if (!seen[req])
                diags.push_back({"weather",
                                 std::string("missing required column '") + columnName(req) + "'",
                                 {2, 1}});
        if (haveHumidity == haveRh)
            diags.push_back(
                {"weather", "need exactly one of humidity_kgkg or rh_pct", {2, 1}});
        if (!diags.empty()) return result;
    }

    for (size_t li = 2; li < lines.size(); ++li) {
        const int lineNo = static_cast<int>(li) + 1;
        if (lines[li].empty() || lines[li][0] == '#') continue;
        std::vector<Field> fields = splitCsvLine(lines[li]);
        if (fields.size() != layout.size()) {
            diags.push_back({"weather", "wrong field count", {lineNo, 1}});
            continue;
        }
        WeatherRecord rec;
        bool haveRh = false;
        double rh = 0;
        bool rowOk = true;
        auto fail = [&](size_t fi, const std::string& msg) {
            diags.push_back({"weather", msg, {lineNo, fields[fi].column}});
            rowOk = false;
        };
        for (size_t fi = 0; fi < fields.size(); ++fi) {
            const std::string& v = fields[fi].text;
            double num = 0;
            if (layout[fi] == ColTime) {
                if (!parseTime(v, rec.time)) fail(fi, "bad timestamp '" + v + "'");
                continue;
            }
            if (!parseNumber(v, num)) {
                fail(fi, "bad number '" + v + "'");
                continue;
            }
            switch (layout[fi]) {
            case ColDrybulb: rec.drybulb = num; break;
            case ColHumidity:
                if (num < 0 || num > 0.05) fail(fi, "humidity out of [0,0.05]");
                rec.humidity = num;
                break;
            case ColRh:
                if (num < 0 || num > 100) fail(fi, "relative humidity out of [0,100]");
                haveRh = true;
                rh = num;
                break;
            case ColWindSpeed:
                if (num < 0) fail(fi, "wind speed must be >= 0");
                rec.windSpeed = num;
                break;
            case ColWindDir: rec.windDirection = num; break;
            case ColDni:
                if (num < 0) fail(fi, "irradiance must be >= 0");
                rec.directNormal = num;
                break;
            case ColDhi:
                if (num < 0) fail(fi, "irradiance must be >= 0");
                rec.diffuseHorizontal = num;
                break;
            case ColPressure:
                if (num <= 0) fail(fi, "pressure must be > 0");
                rec.pressure = num;
                break;
            default: break;
            }
        }
        if (!rowOk) continue;
        if (haveRh) rec.humidity = humidityFromRelative(rh, rec.drybulb, rec.pressure);
        if (!result.series.records.empty()) {
            TimePoint prev = result.series.records.back().time;
            if (rec.time == prev) {
                diags.push_back({"weather", "duplicated timestamp " + formatTime(rec.time),
                                 {lineNo, fields[0].column}});
                continue;
            }
            if (rec.time < prev) {
                diags.push_back({"weather", "non-monotone timestamp " + formatTime(rec.time),
                                 {lineNo, fields[0].column}});
                continue;
            }
            if (rec.time - prev != 3600) {
                diags.push_back({"weather",
                                 "gap: expected " + formatTime(prev + 3600) + ", got " +
                                     formatTime(rec.time),
                                 {lineNo, fields[0].column}});
                continue;
            }
        }
        result.series.records.push_back(rec);
    }
    if (result.series.records.empty() && diags.empty())
        diags.push_back({"weather", "no data rows", {2, 1}});
    return result;
}

std::string serializeWeather(const WeatherSeries& series) {
    std::string out = kWeatherMagic;
    out += "\ntime,drybulb_C,humidity_kgkg,wind_speed_ms,wind_dir_deg,dni_Wm2,dhi_Wm2,pressure_Pa\n";
    char buf[256];
    for (const WeatherRecord& r : series.records) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      formatTime(r.time).c_str(), r.drybulb, r.humidity, r.windSpeed,
                      r.windDirection, r.directNormal, r.diffuseHorizontal, r.pressure);
        out += buf;
    }
    return out;
}

} // namespace codasim
