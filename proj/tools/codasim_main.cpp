#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "codasim/building_file.hpp"
#include "codasim/engine.hpp"
#include "codasim/errors.hpp"
#include "codasim/log.hpp"
#include "codasim/results.hpp"
#include "codasim/verify.hpp"
#include "codasim/weather.hpp"

// Command-line front end.  Exit codes: 0 success, 1 bad input (unreadable
// files, parse or validation diagnostics, unknown names), 2 failure while
// simulating (solver breakdown, weather coverage, output I/O).

namespace {

using namespace codasim;

bool readFile(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

void printDiagnostics(const std::string& path, const std::vector<Diagnostic>& diags) {
    for (const Diagnostic& d : diags)
        std::fprintf(stderr, "%s:%d:%d: %s: %s\n", path.c_str(), d.location.line,
                     d.location.column, d.entity.c_str(), d.message.c_str());
}

bool writeOutput(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    return static_cast<bool>(out);
}

int loadBuilding(const std::string& path, BuildingDescription& desc) {
    std::string text;
    if (!readFile(path, text)) {
        std::fprintf(stderr, "cannot read '%s'\n", path.c_str());
        return 1;
    }
    BuildingParseResult parsed = parseBuilding(text);
    if (!parsed.ok()) {
        printDiagnostics(path, parsed.diagnostics);
        return 1;
    }
    desc = std::move(parsed.description);
    return 0;
}

int cmdValidate(const std::string& path) {
    BuildingDescription desc;
    if (int rc = loadBuilding(path, desc)) return rc;
    size_t components = 0;
    for (const Zone& z : desc.zones) components += z.components.size();
    for (const InterAmbiance& ia : desc.interAmbiances) components += ia.components.size();
    std::printf("%s: ok (%zu zones, %zu inter-ambiances, %zu components, type %s)\n", path.c_str(),
                desc.zones.size(), desc.interAmbiances.size(), components,
                simulationTypeName(desc.simulationType));
    return 0;
}

struct RunFlags {
    std::string building;
    std::string weatherPath;
    std::string output;
    std::string simType;
    std::string coupling;
    std::string start;
    std::string end;
    double timestep = 3600;
    int warmupDays = 3;
    double initialTemp = 20;
};

int cmdRun(const RunFlags& f) {
    BuildingDescription desc;
    if (int rc = loadBuilding(f.building, desc)) return rc;

    if (!f.simType.empty()) {
        bool known = false;
        for (SimulationType t : {SimulationType::ThermalOnly, SimulationType::ThermalAirflow,
                                 SimulationType::AirflowOnly, SimulationType::ThermalAirflowMoisture})
            if (f.simType == simulationTypeName(t)) {
                desc.simulationType = t;
                known = true;
            }
        if (!known) {
            std::fprintf(stderr, "unknown --sim-type '%s'\n", f.simType.c_str());
            return 1;
        }
    }
    if (!f.coupling.empty())
        desc.coupling.thermalAirflowCoupling =
            f.coupling == "iterative" ? CouplingMode::Iterative : CouplingMode::OneWay;

    std::string wtext;
    if (!readFile(f.weatherPath, wtext)) {
        std::fprintf(stderr, "cannot read '%s'\n", f.weatherPath.c_str());
        return 1;
    }
    WeatherParseResult wparsed = parseWeather(wtext);
    if (!wparsed.ok()) {
        printDiagnostics(f.weatherPath, wparsed.diagnostics);
        return 1;
    }
    const WeatherSeries& weather = wparsed.series;

    RunConfig cfg;
    cfg.start = weather.startTime();
    cfg.end = weather.endTime();
    if (!f.start.empty() && !parseTime(f.start, cfg.start)) {
        std::fprintf(stderr, "bad --start '%s' (expected YYYY-MM-DD[ hh:mm[:ss]])\n",
                     f.start.c_str());
        return 1;
    }
    if (!f.end.empty() && !parseTime(f.end, cfg.end)) {
        std::fprintf(stderr, "bad --end '%s' (expected YYYY-MM-DD[ hh:mm[:ss]])\n", f.end.c_str());
        return 1;
    }
    cfg.timestep = f.timestep;
    cfg.warmupDays = f.warmupDays;
    cfg.initialTemperature = f.initialTemp;

    try {
        Simulation sim(std::move(desc), weather);
        const ResultSet results = sim.run(cfg);
        const StepCounters& n = sim.counters();
        log::info("steps=" + std::to_string(n.steps) +
                  " thermal=" + std::to_string(n.thermalSolves) +
                  " airflow=" + std::to_string(n.airflowSolves) +
                  " moisture=" + std::to_string(n.moistureSolves) +
                  " coupling=" + std::to_string(n.couplingIterations));
        if (!writeOutput(f.output, serializeResults(results))) {
            std::fprintf(stderr, "cannot write '%s'\n", f.output.c_str());
            return 2;
        }
    } catch (const SimulationError& e) {
        std::fprintf(stderr, "simulation failed: %s\n", e.what());
        return 2;
    }
    return 0;
}

// Long-format dump for gnuplot: one indexed block per column, hours on the
// abscissa ("plot 'file' index 2 using 1:2 with lines").
int cmdPlotData(const std::string& path, const std::string& output) {
    std::string text;
    if (!readFile(path, text)) {
        std::fprintf(stderr, "cannot read '%s'\n", path.c_str());
        return 1;
    }
    ResultSet rs;
    try {
        rs = parseResults(text);
    } catch (const SimulationError& e) {
        std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
        return 1;
    }
    std::string out;
    char buf[80];
    const TimePoint t0 = rs.times.empty() ? 0 : rs.times.front();
    for (size_t c = 0; c < rs.columns.size(); ++c) {
        out += "# block " + std::to_string(c) + ": " + rs.columns[c].header() + "\n";
        for (size_t i = 0; i < rs.rows.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6f %.9g\n",
                          static_cast<double>(rs.times[i] - t0) / 3600.0, rs.rows[i][c]);
            out += buf;
        }
        out += "\n\n";
    }
    if (!writeOutput(output, out)) {
        std::fprintf(stderr, "cannot write '%s'\n", output.c_str());
        return 2;
    }
    return 0;
}

int cmdCasesList() {
    for (const std::string& name : verificationCaseNames()) std::printf("%s\n", name.c_str());
    return 0;
}

int cmdCasesRun(std::vector<std::string> names, bool parallel) {
    if (names.empty()) names = verificationCaseNames();
    for (const std::string& n : names) {
        bool known = false;
        for (const std::string& k : verificationCaseNames()) known = known || k == n;
        if (!known) {
            std::fprintf(stderr, "unknown case '%s'\n", n.c_str());
            return 1;
        }
    }
    std::vector<CaseReport> reports(names.size());
    std::vector<std::string> errors(names.size());
    auto runOne = [&](size_t i) {
        try {
            reports[i] = runVerificationCase(names[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };
    if (parallel) {
        std::vector<std::future<void>> jobs;
        for (size_t i = 0; i < names.size(); ++i)
            jobs.push_back(std::async(std::launch::async, runOne, i));
        for (auto& j : jobs) j.get();
    } else {
        for (size_t i = 0; i < names.size(); ++i) runOne(i);
    }
    bool allPassed = true;
    for (size_t i = 0; i < names.size(); ++i) {
        if (!errors[i].empty()) {
            std::printf("case %s: ERROR %s\n", names[i].c_str(), errors[i].c_str());
            allPassed = false;
        } else {
            std::fputs(formatReport(reports[i]).c_str(), stdout);
            allPassed = allPassed && reports[i].passed();
        }
    }
    return allPassed ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"codasim: coupled thermal / airflow / moisture building simulation"};
    app.require_subcommand(1);

    std::string validatePath;
    CLI::App* validate = app.add_subcommand("validate", "parse and check a building description");
    validate->add_option("building", validatePath, "building description file")->required();

    RunFlags rf;
    CLI::App* run = app.add_subcommand("run", "simulate a building over a weather series");
    run->add_option("building", rf.building, "building description file")->required();
    run->add_option("weather", rf.weatherPath, "weather series file")->required();
    run->add_option("-o,--output", rf.output, "results file (default: stdout)");
    run->add_option("--timestep", rf.timestep, "step length, seconds (default 3600)");
    run->add_option("--sim-type", rf.simType,
                    "override the declared simulation type "
                    "(thermal|thermal_airflow|airflow|thermal_airflow_moisture)");
    run->add_option("--coupling", rf.coupling, "thermal-airflow coupling within a step")
        ->check(CLI::IsMember({"oneway", "iterative"}));
    run->add_option("--warmup-days", rf.warmupDays,
                    "replays of the first day before recording (default 3)");
    run->add_option("--initial-temp", rf.initialTemp, "uniform start temperature, degC");
    run->add_option("--start", rf.start, "first step start (default: weather start)");
    run->add_option("--end", rf.end, "horizon end (default: weather end)");

    std::string plotPath, plotOut;
    CLI::App* plot = app.add_subcommand("plot-data", "reshape results for gnuplot");
    plot->add_option("results", plotPath, "results file from 'run'")->required();
    plot->add_option("-o,--output", plotOut, "output file (default: stdout)");

    CLI::App* cases = app.add_subcommand("cases", "built-in verification cases");
    CLI::App* casesList = cases->add_subcommand("list", "list case names");
    std::vector<std::string> caseNames;
    bool casesParallel = false;
    CLI::App* casesRun = cases->add_subcommand("run", "run cases and report checks");
    casesRun->add_option("names", caseNames, "cases to run (default: all)");
    casesRun->add_flag("--parallel", casesParallel, "run cases concurrently");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (*validate) return cmdValidate(validatePath);
    if (*run) return cmdRun(rf);
    if (*plot) return cmdPlotData(plotPath, plotOut);
    if (*cases) {
        if (*casesRun) return cmdCasesRun(caseNames, casesParallel);
        (void)casesList;
        return cmdCasesList();
    }
    return 1;
}
