#include "codasim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "codasim/errors.hpp"
#include "codasim/log.hpp"
#include "codasim/solar.hpp"

namespace codasim {

Simulation::Simulation(BuildingDescription desc, WeatherSeries weather)
    : desc_(std::move(desc)), weather_(std::move(weather)) {
    const auto issues = validate(desc_);
    if (!issues.empty())
        throw SimulationError("invalid building description: " + issues.front().entity + ": " +
                              issues.front().message);
    if (simulationUsesThermal(desc_.simulationType)) thermal_.emplace(desc_);
    if (simulationUsesAirflow(desc_.simulationType)) airflow_.emplace(desc_);
    if (simulationUsesMoisture(desc_.simulationType)) moisture_.emplace(desc_);
}

void Simulation::initialize(const RunConfig& cfg) {
    initialTemperature_ = cfg.initialTemperature;
    counters_ = StepCounters{};
    lastCouplingFlowDelta_ = 0;
    if (thermal_) {
        thermal_->setUniformTemperature(cfg.initialTemperature);
        double mean = 20.0;
        if (!weather_.empty()) {
            double sum = 0;
            for (const WeatherRecord& r : weather_.records) sum += r.drybulb;
            mean = sum / static_cast<double>(weather_.records.size());
        }
        thermal_->setDefaultFarSideTemperature(mean);
    }
    if (airflow_) airflow_->resetPressures();
    if (moisture_) {
        double r0 = 0.007;
        if (cfg.initialHumidity) r0 = *cfg.initialHumidity;
        else if (weather_.covers(cfg.start)) r0 = weather_.at(cfg.start).humidity;
        moisture_->setUniformHumidity(r0);
    }
    now_ = weather_.covers(cfg.start) ? weather_.at(cfg.start) : WeatherRecord{};
}

std::vector<double> Simulation::zoneAirTemps() const {
    std::vector<double> temps(desc_.zones.size(), initialTemperature_);
    if (thermal_)
        for (size_t zi = 0; zi < temps.size(); ++zi)
            temps[zi] = thermal_->zoneAirTemperature(static_cast<int>(zi));
    return temps;
}

std::vector<double> Simulation::linkNetFlows() const {
    std::vector<double> net;
    if (!airflow_) return net;
    net.reserve(static_cast<size_t>(airflow_->linkCount()));
    for (int i = 0; i < airflow_->linkCount(); ++i) net.push_back(airflow_->link(i).netFlow());
    return net;
}

// Without a pressure network, ventilation is what the schedules say: every
// mechanical extract is matched by outdoor make-up air, and known flows feed
// their destination with the source ambiance's air.
std::vector<std::vector<IncomingFlow>> Simulation::scheduleDrivenFlows(TimePoint t) const {
    std::vector<std::vector<IncomingFlow>> flows(desc_.zones.size());
    for (size_t zi = 0; zi < desc_.zones.size(); ++zi) {
        double extract = 0;
        for (const Component& c : desc_.zones[zi].components)
            if (c.kind == ComponentKind::VmcExtract)
                extract += std::get<VmcParams>(c.params).extractFlow.at(t);
        if (extract > 0) flows[zi].push_back({-1, extract});
    }
    for (const InterAmbiance& ia : desc_.interAmbiances) {
        const int a = findZone(desc_, ia.zoneA);
        const int b = findZone(desc_, ia.zoneB);
        for (const Component& c : ia.components) {
            if (c.kind != ComponentKind::KnownFlow) continue;
            const double v = std::get<KnownFlowParams>(c.params).massFlow.at(t);
            if (v == 0) continue;
            const int src = v > 0 ? a : b;
            const int dst = v > 0 ? b : a;
            if (dst >= 0) flows[static_cast<size_t>(dst)].push_back({src, std::abs(v)});
        }
    }
    return flows;
}

void Simulation::step(TimePoint t, double dt) {
    const TimePoint tb = t + static_cast<TimePoint>(std::llround(dt));
    now_ = weather_.at(tb);

    std::vector<std::vector<IncomingFlow>> flows;
    std::vector<double> tempsUsed;
    if (airflow_) {
        airflow_->setTime(tb);
        tempsUsed = zoneAirTemps();
        AirflowConditions cond;
        cond.outdoorTemp = now_.drybulb;
        cond.windSpeed = now_.windSpeed;
        cond.windDirection = now_.windDirection;
        cond.zoneTemps = tempsUsed;
        airflow_->setConditions(cond);
        airflow_->solvePressures();
        ++counters_.airflowSolves;
        flows = airflow_->incomingFlowsByZone();
    } else if (thermal_) {
        flows = scheduleDrivenFlows(tb);
    }

    lastCouplingFlowDelta_ = 0;
    if (thermal_) {
        ThermalBoundaryConditions bc;
        bc.outdoorTemp = now_.drybulb;
        bc.skyTemp = now_.drybulb - desc_.site.skyTempOffset;
        thermal_->setBoundary(bc);
        thermal_->setSolar(sunPosition(tb, desc_.site), now_.directNormal, now_.diffuseHorizontal);
        std::vector<double> loads(desc_.zones.size(), 0.0);
        for (size_t zi = 0; zi < desc_.zones.size(); ++zi)
            for (const Component& c : desc_.zones[zi].components)
                if (c.kind == ComponentKind::InternalLoad)
                    loads[zi] += std::get<InternalLoadParams>(c.params).power.at(tb);
        thermal_->setZoneLoads(loads);
        thermal_->setIncomingFlows(flows);

        const auto snapshot = thermal_->saveState();
        thermal_->advanceAll(dt);

        if (airflow_ && desc_.coupling.thermalAirflowCoupling == CouplingMode::Iterative) {
            std::vector<double> prevNet = linkNetFlows();
            for (int it = 0; it < desc_.coupling.maxCouplingIterations; ++it) {
                const std::vector<double> newTemps = zoneAirTemps();
                double maxTempDelta = 0;
                for (size_t zi = 0; zi < newTemps.size(); ++zi)
                    maxTempDelta = std::max(maxTempDelta, std::abs(newTemps[zi] - tempsUsed[zi]));
                if (maxTempDelta <= desc_.coupling.airTempTolerance) break;

                AirflowConditions cond;
                cond.outdoorTemp = now_.drybulb;
                cond.windSpeed = now_.windSpeed;
                cond.windDirection = now_.windDirection;
                cond.zoneTemps = newTemps;
                airflow_->setConditions(cond);
                airflow_->solvePressures();
                ++counters_.airflowSolves;
                tempsUsed = newTemps;

                const std::vector<double> net = linkNetFlows();
                double flowDelta = 0;
                for (size_t i = 0; i < net.size(); ++i)
                    flowDelta = std::max(flowDelta, std::abs(net[i] - prevNet[i]));
                lastCouplingFlowDelta_ = flowDelta;
                prevNet = net;

                thermal_->restoreState(snapshot);
                thermal_->setIncomingFlows(airflow_->incomingFlowsByZone());
                thermal_->advanceAll(dt);
                ++counters_.couplingIterations;
                if (flowDelta <= desc_.coupling.flowTolerance) break;
            }
        }
        counters_.thermalSolves = thermal_->solveCount() - thermalSolveBase_;
    }

    if (moisture_) {
        moisture_->setTime(tb);
        moisture_->setIncomingFlows(airflow_ ? airflow_->incomingFlowsByZone() : flows);
        moisture_->setExteriorHumidity(now_.humidity);
        moisture_->setZoneTemperatures(zoneAirTemps());
        moisture_->advance(dt);
        ++counters_.moistureSolves;
    }
    ++counters_.steps;
}

std::vector<ResultColumn> Simulation::outputColumns() const {
    std::vector<ResultColumn> cols;
    if (!desc_.outputs.empty()) {
        for (const OutputRequest& r : desc_.outputs) cols.push_back({r.entityId, r.variable});
        return cols;
    }
    const OutputVariable def = desc_.simulationType == SimulationType::AirflowOnly
                                   ? OutputVariable::ZonePressure
                                   : OutputVariable::ZoneAirTemperature;
    for (const Zone& z : desc_.zones) cols.push_back({z.id, def});
    return cols;
}

void Simulation::requireOutputAvailable(const OutputRequest& req) const {
    const char* missing = nullptr;
    switch (req.variable) {
    case OutputVariable::ZoneAirTemperature:
    case OutputVariable::SurfaceTemperatureInterior:
    case OutputVariable::SurfaceTemperatureExterior:
    case OutputVariable::SurfaceFlux:
    case OutputVariable::HvacPower:
    case OutputVariable::ComfortIndex:
        if (!thermal_) missing = "thermal";
        break;
    case OutputVariable::ZonePressure:
    case OutputVariable::LinkFlow:
        if (!airflow_) missing = "airflow";
        break;
    case OutputVariable::ZoneHumidity:
        if (!moisture_) missing = "moisture";
        break;
    }
    if (missing)
        throw SimulationError("output '" + req.entityId + "." + outputVariableName(req.variable) +
                              "' needs the " + missing + " module, but simulation type is " +
                              simulationTypeName(desc_.simulationType));
}

double Simulation::outputValue(const OutputRequest& req) const {
    requireOutputAvailable(req);
    switch (req.variable) {
    case OutputVariable::ZoneAirTemperature:
        return thermal_->zoneAirTemperature(findZone(desc_, req.entityId));
    case OutputVariable::SurfaceTemperatureInterior:
        return thermal_->surfaceTemperature(thermal_->locate(req.entityId), true);
    case OutputVariable::SurfaceTemperatureExterior:
        return thermal_->surfaceTemperature(thermal_->locate(req.entityId), false);
    case OutputVariable::SurfaceFlux:
        return thermal_->surfaceFlux(thermal_->locate(req.entityId));
    case OutputVariable::ZonePressure:
        return airflow_->zonePressure(findZone(desc_, req.entityId));
    case OutputVariable::LinkFlow:
        return airflow_->linkFlow(req.entityId);
    case OutputVariable::ZoneHumidity:
        return moisture_->zoneHumidity(findZone(desc_, req.entityId));
    case OutputVariable::HvacPower:
        return thermal_->hvacPower(findZone(desc_, req.entityId));
    case OutputVariable::ComfortIndex: {
        const int z = findZone(desc_, req.entityId);
        return 0.5 * (thermal_->zoneAirTemperature(z) + thermal_->zoneRadiantTemperature(z));
    }
    }
    return 0;
}

ResultSet Simulation::run(const RunConfig& cfg, const StepObserver& observer) {
    if (cfg.timestep < 1.0) throw SimulationError("timestep must be at least one second");
    if (cfg.end <= cfg.start) throw SimulationError("run horizon is empty");
    initialize(cfg);
    if (thermal_) thermalSolveBase_ = thermal_->solveCount();

    if (weather_.empty()) throw WeatherCoverageError("weather series is empty", cfg.start);
    if (!weather_.covers(cfg.start))
        throw WeatherCoverageError("weather does not cover the run start " + formatTime(cfg.start),
                                   cfg.start);
    if (!weather_.covers(cfg.end))
        throw WeatherCoverageError("weather does not cover the run end " + formatTime(cfg.end),
                                   cfg.end);

    ResultSet rs;
    rs.columns = outputColumns();
    for (const ResultColumn& c : rs.columns) requireOutputAvailable({c.entityId, c.variable});

    const TimePoint dtInt = static_cast<TimePoint>(std::llround(cfg.timestep));
    const TimePoint horizon = cfg.end - cfg.start;
    const long nSteps = static_cast<long>(horizon / dtInt);
    if (horizon % dtInt != 0)
        log::info("horizon is not a whole number of timesteps; the remainder is skipped");

    // Warm-up: replay the opening day (or the whole horizon when shorter)
    // to shake off the uniform initial state, discarding the output.
    const TimePoint span = std::min<TimePoint>(86400, horizon);
    const long warmSteps = static_cast<long>(span / dtInt);
    for (int d = 0; d < cfg.warmupDays; ++d)
        for (long i = 0; i < warmSteps; ++i) step(cfg.start + i * dtInt, cfg.timestep);

    for (long i = 0; i < nSteps; ++i) {
        const TimePoint t = cfg.start + i * dtInt;
        step(t, cfg.timestep);
        std::vector<double> row;
        row.reserve(rs.columns.size());
        for (const ResultColumn& c : rs.columns) row.push_back(outputValue({c.entityId, c.variable}));
        rs.addRow(t + dtInt, std::move(row));
        if (observer) observer(t + dtInt, *this);
    }
    if (thermal_ && thermal_->sweepCapHits() > 0) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "interzone sweep hit its iteration cap %ld times over %ld steps "
                      "(worst pending boundary change %.2g K); a smaller timestep relaxes the coupling",
                      thermal_->sweepCapHits(), counters_.steps, thermal_->worstSweepResidual());
        log::warn(buf);
    }
    return rs;
}

} // namespace codasim
