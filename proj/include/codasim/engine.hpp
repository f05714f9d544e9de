#ifndef CODASIM_ENGINE_HPP
#define CODASIM_ENGINE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "codasim/airflow.hpp"
#include "codasim/building.hpp"
#include "codasim/moisture.hpp"
#include "codasim/results.hpp"
#include "codasim/thermal.hpp"
#include "codasim/weather.hpp"

// Orchestrates the physical modules over a weather-driven horizon.  The
// simulation type gates which modules exist at all; the coupling options
// decide whether airflow and thermal iterate to a common fixed point within
// a step or hand over one-way.

namespace codasim {

struct RunConfig {
    TimePoint start = 0;
    TimePoint end = 0;     // exclusive; steps cover [start, end]
    double timestep = 3600; // s
    int warmupDays = 3;     // replay of the first simulated day, discarded
    double initialTemperature = 20.0; // degC
    std::optional<double> initialHumidity; // kg/kg; default: outdoors at start
};

struct StepCounters {
    long steps = 0;
    long thermalSolves = 0;   // linear zone solves, all sweeps included
    long airflowSolves = 0;   // pressure-network solves
    long moistureSolves = 0;
    long couplingIterations = 0; // extra thermal re-advances beyond the first
};

class Simulation {
public:
    Simulation(BuildingDescription desc, WeatherSeries weather);

    // Resets all module states for a fresh run; called by run() itself, and
    // directly by tests that drive step() manually.
    void initialize(const RunConfig& cfg);

    // Advances [t, t+dt] with boundary conditions sampled at t+dt, matching
    // the implicit discretization of the modules.
    void step(TimePoint t, double dt);

    using StepObserver = std::function<void(TimePoint, const Simulation&)>;
    ResultSet run(const RunConfig& cfg, const StepObserver& observer = {});

    const BuildingDescription& description() const { return desc_; }
    const WeatherSeries& weather() const { return weather_; }
    const WeatherRecord& currentWeather() const { return now_; }
    const StepCounters& counters() const { return counters_; }

    const ThermalModel* thermal() const { return thermal_ ? &*thermal_ : nullptr; }
    ThermalModel* thermal() { return thermal_ ? &*thermal_ : nullptr; }
    const AirflowModel* airflow() const { return airflow_ ? &*airflow_ : nullptr; }
    AirflowModel* airflow() { return airflow_ ? &*airflow_ : nullptr; }
    const MoistureModel* moisture() const { return moisture_ ? &*moisture_ : nullptr; }
    MoistureModel* moisture() { return moisture_ ? &*moisture_ : nullptr; }

    // Largest per-link flow change between the last two pressure solves of
    // an iterative-coupling step; 0 when a single solve sufficed.
    double lastCouplingFlowDelta() const { return lastCouplingFlowDelta_; }

    double outputValue(const OutputRequest& req) const;
    std::vector<ResultColumn> outputColumns() const; // requested or defaults

private:
    std::vector<std::vector<IncomingFlow>> scheduleDrivenFlows(TimePoint t) const;
    std::vector<double> zoneAirTemps() const;
    std::vector<double> linkNetFlows() const;
    void requireOutputAvailable(const OutputRequest& req) const;

    BuildingDescription desc_;
    WeatherSeries weather_;
    std::optional<ThermalModel> thermal_;
    std::optional<AirflowModel> airflow_;
    std::optional<MoistureModel> moisture_;
    StepCounters counters_;
    WeatherRecord now_;
    double initialTemperature_ = 20.0;
    double lastCouplingFlowDelta_ = 0;
    long thermalSolveBase_ = 0; // solves before this run, excluded from counters
};

} // namespace codasim

#endif
