#include "doctest.h"

#include <cmath>

#include "codasim/engine.hpp"
#include "codasim/errors.hpp"
#include "codasim/physics.hpp"

using namespace codasim;

namespace {

WeatherSeries flatWeather(double tempC, int hours, double wind = 0.0) {
    WeatherSeries ws;
    for (int h = 0; h <= hours; ++h) {
        WeatherRecord r;
        r.time = h * 3600;
        r.drybulb = tempC;
        r.humidity = 0.006;
        r.windSpeed = wind;
        ws.records.push_back(r);
    }
    return ws;
}

// One zone, one exterior wall, no solar (absorptance 0, no glazing).
BuildingDescription loadedBox(double loadW, double vmcFlow) {
    BuildingDescription d;
    d.name = "box";
    d.simulationType = SimulationType::ThermalOnly;

    Zone z;
    z.id = "room";
    z.airVolume = 60;
    z.buffer.enabled = false;
    if (loadW > 0) {
        Component load;
        load.kind = ComponentKind::InternalLoad;
        load.id = "room.load";
        load.params = InternalLoadParams{Schedule{loadW}};
        z.components.push_back(load);
    }
    if (vmcFlow > 0) {
        Component vmc;
        vmc.kind = ComponentKind::VmcExtract;
        vmc.id = "room.vmc";
        vmc.params = VmcParams{Schedule{vmcFlow}};
        z.components.push_back(vmc);
    }
    d.zones.push_back(z);

    InterAmbiance ia;
    ia.id = "room-out";
    ia.zoneA = "room";
    ia.zoneB = std::string(kExteriorId);
    Component w;
    w.kind = ComponentKind::SeparationWall;
    w.id = "w";
    WallParams wp;
    wp.layers = {{1.0, 1200, 1000, 0.25}};
    wp.surfaceInterior = {0.0, 0.0};
    wp.surfaceExterior = {0.0, 0.0};
    wp.film = {8.0, 0.0, 18.0, 0.0};
    wp.model.longwaveInterior = LongwaveInteriorModel::None;
    w.params = wp;
    w.geometry.area = 20;
    w.geometry.azimuth = 180;
    w.geometry.tilt = 90;
    ia.components.push_back(w);
    d.interAmbiances.push_back(ia);
    return d;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("steady load balances wall loss plus ventilation") {
    const double load = 500, vmc = 0.015, tOut = 5;
    BuildingDescription d = loadedBox(load, vmc);
    Simulation sim(d, flatWeather(tOut, 24 * 40));

    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 24 * 40 * 3600;
    cfg.timestep = 3600;
    cfg.warmupDays = 0;
    cfg.initialTemperature = tOut;
    ResultSet rs = sim.run(cfg);

    // U A in series with the films, plus the extract's make-up air draw
    const double rSeries = 1.0 / (8 * 20) + 0.25 / (1.0 * 20) + 1.0 / (18 * 20);
    const double uTotal = 1.0 / rSeries + vmc * kAirCp;
    const double expected = tOut + load / uTotal;
    CHECK(rs.rows.back()[0] == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("warm-up replays the opening day and is not reported") {
    BuildingDescription d = loadedBox(300, 0);
    Simulation sim(d, flatWeather(10, 24 * 3));
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 3 * 86400;
    cfg.timestep = 3600;
    cfg.warmupDays = 2;
    ResultSet rs = sim.run(cfg);
    CHECK(rs.rowCount() == 72);
    CHECK(sim.counters().steps == 72 + 2 * 24);
    CHECK(rs.times.front() == 3600);
    CHECK(rs.times.back() == 3 * 86400);
}

TEST_CASE("running beyond the weather horizon names the missing time") {
    BuildingDescription d = loadedBox(0, 0);
    Simulation sim(d, flatWeather(10, 24));
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 48 * 3600; // a day past the series
    cfg.warmupDays = 0;
    try {
        sim.run(cfg);
        FAIL("expected WeatherCoverageError");
    } catch (const WeatherCoverageError& e) {
        CHECK(e.firstMissingTime() == 48 * 3600);
    }
}

TEST_CASE("outputs outside the active modules are refused with a reason") {
    BuildingDescription d = loadedBox(0, 0);
    d.outputs.push_back({"room", OutputVariable::ZoneHumidity});
    Simulation sim(d, flatWeather(10, 48));
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 24 * 3600;
    cfg.warmupDays = 0;
    try {
        sim.run(cfg);
        FAIL("expected SimulationError");
    } catch (const SimulationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("moisture") != std::string::npos);
        CHECK(msg.find("simulation type is thermal") != std::string::npos);
    }
}

TEST_CASE("default columns follow the simulation type") {
    BuildingDescription d = loadedBox(0, 0);
    {
        Simulation sim(d, flatWeather(10, 24));
        auto cols = sim.outputColumns();
        REQUIRE(cols.size() == 1);
        CHECK(cols[0].variable == OutputVariable::ZoneAirTemperature);
        CHECK(cols[0].header() == "room.air_temperature_C");
    }
    d.simulationType = SimulationType::AirflowOnly;
    // airflow needs a pressure path
    InterAmbiance ia;
    ia.id = "leak-ia";
    ia.zoneA = "room";
    ia.zoneB = std::string(kExteriorId);
    Component c;
    c.kind = ComponentKind::SmallOpening;
    c.id = "leak";
    c.params = CrackParams{1e-3, 0.65};
    ia.components.push_back(c);
    d.interAmbiances.push_back(ia);
    {
        Simulation sim(d, flatWeather(10, 24));
        auto cols = sim.outputColumns();
        REQUIRE(cols.size() == 1);
        CHECK(cols[0].variable == OutputVariable::ZonePressure);
    }
}

TEST_CASE("iterative coupling reaches the per-step flow tolerance") {
    BuildingDescription d = loadedBox(800, 0);
    d.simulationType = SimulationType::ThermalAirflow;
    d.coupling.thermalAirflowCoupling = CouplingMode::Iterative;
    // two stacked cracks so the heated zone drives a temperature-dependent
    // draught that feeds back on the heat balance
    InterAmbiance& ia = d.interAmbiances[0];
    Component low;
    low.kind = ComponentKind::SmallOpening;
    low.id = "low";
    low.geometry.elevation = 0.2;
    low.params = CrackParams{3e-3, 0.65};
    ia.components.push_back(low);
    Component high = low;
    high.id = "high";
    high.geometry.elevation = 2.6;
    ia.components.push_back(high);

    Simulation sim(d, flatWeather(-5, 24 * 4));
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 2 * 86400;
    cfg.timestep = 3600;
    cfg.warmupDays = 1;
    sim.run(cfg);
    CHECK(sim.counters().couplingIterations >= 1);
    CHECK(sim.lastCouplingFlowDelta() < d.coupling.flowTolerance);
    // the draught exists: both cracks carry air at the final step
    CHECK(std::abs(sim.airflow()->linkFlow("low")) > 1e-4);
}

TEST_CASE("one-way coupling solves pressures once per step") {
    BuildingDescription d = loadedBox(400, 0);
    d.simulationType = SimulationType::ThermalAirflow;
    d.coupling.thermalAirflowCoupling = CouplingMode::OneWay;
    InterAmbiance& ia = d.interAmbiances[0];
    Component leak;
    leak.kind = ComponentKind::SmallOpening;
    leak.id = "leak";
    leak.geometry.elevation = 1.0;
    leak.params = CrackParams{2e-3, 0.65};
    ia.components.push_back(leak);

    Simulation sim(d, flatWeather(0, 48));
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 86400;
    cfg.timestep = 3600;
    cfg.warmupDays = 0;
    sim.run(cfg);
    CHECK(sim.counters().airflowSolves == sim.counters().steps);
    CHECK(sim.counters().couplingIterations == 0);
}

TEST_CASE("comfort index is the mean of air and radiant temperature") {
    BuildingDescription d = loadedBox(600, 0);
    // give the zone a radiant node
    auto& wall = std::get<WallParams>(d.interAmbiances[0].components[0].params);
    wall.film = {3.0, 5.0, 18.0, 0.0};
    wall.model.longwaveInterior = LongwaveInteriorModel::RadiantMeanNode;
    Simulation sim(d, flatWeather(0, 72));
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 86400;
    cfg.timestep = 3600;
    cfg.warmupDays = 1;
    sim.run(cfg);
    const double air = sim.outputValue({"room", OutputVariable::ZoneAirTemperature});
    const double comfort = sim.outputValue({"room", OutputVariable::ComfortIndex});
    const double radiant = sim.thermal()->zoneRadiantTemperature(0);
    CHECK(comfort == doctest::Approx(0.5 * (air + radiant)).epsilon(1e-12));
    CHECK(radiant != doctest::Approx(air).epsilon(1e-6)); // the node is distinct
}

TEST_CASE("sub-second timesteps are refused") {
    BuildingDescription d = loadedBox(0, 0);
    Simulation sim(d, flatWeather(10, 24));
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 3600;
    cfg.timestep = 0.5;
    CHECK_THROWS_AS(sim.run(cfg), SimulationError);
}

TEST_CASE("repeat runs of the same configuration are bit-identical") {
    BuildingDescription d = loadedBox(450, 0.01);
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    d.coupling.thermalAirflowCoupling = CouplingMode::Iterative;
    InterAmbiance& ia = d.interAmbiances[0];
    Component leak;
    leak.kind = ComponentKind::SmallOpening;
    leak.id = "leak";
    leak.geometry.elevation = 1.2;
    leak.params = CrackParams{2e-3, 0.65};
    ia.components.push_back(leak);
    d.zones[0].buffer = {true, 12.0, 1e-4};

    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 2 * 86400;
    cfg.timestep = 1800;
    cfg.warmupDays = 1;

    Simulation a(d, flatWeather(4, 72, 2.5));
    Simulation b(d, flatWeather(4, 72, 2.5));
    const std::string ra = serializeResults(a.run(cfg));
    const std::string rb = serializeResults(b.run(cfg));
    CHECK(ra == rb);
}

} // TEST_SUITE
