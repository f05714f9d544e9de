// Acceptance gate: every release-blocking property, one line per criterion.
// Prints [PASS]/[FAIL] with the measured value against its limit and exits
// nonzero when anything fails.  Independent oracles live in the verification
// module; criteria that coincide with a bundled case delegate to it and the
// line says so.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "codasim/airflow.hpp"
#include "codasim/building.hpp"
#include "codasim/building_file.hpp"
#include "codasim/engine.hpp"
#include "codasim/errors.hpp"
#include "codasim/moisture.hpp"
#include "codasim/physics.hpp"
#include "codasim/results.hpp"
#include "codasim/thermal.hpp"
#include "codasim/verify.hpp"
#include "codasim/weather.hpp"

using namespace codasim;

namespace {

struct Gate {
    bool ok = true;
    std::string detail;

    void add(const std::string& label, double measured, double limit) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s %.3g (limit %.3g)", label.c_str(), measured, limit);
        append(buf, measured <= limit);
    }
    void addExact(const std::string& label, bool passed) {
        append(label + (passed ? " ok" : " VIOLATED"), passed);
    }
    void append(const std::string& text, bool passed) {
        if (!detail.empty()) detail += "; ";
        detail += text;
        ok = ok && passed;
    }
};

// Pulls named checks out of a verification-case report.
void adopt(Gate& g, const CaseReport& r, const std::vector<std::string>& names) {
    for (const std::string& n : names) {
        const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                                     [&](const CheckResult& c) { return c.name == n; });
        if (it == r.checks.end()) {
            g.append(n + " MISSING from case " + r.caseName, false);
            continue;
        }
        g.add(r.caseName + "/" + n, it->measured, it->limit);
    }
}

// ---- criterion 1: steady conduction --------------------------------------
// Wall conductance 2 W/(m^2 K) between 8 W/(m^2 K) films and a 10 K drop:
// the series circuit gives 13.333 W/m^2.  The bundled wall-steady case runs
// exactly this configuration for both conduction models and times itself.
Gate criterion1(const CaseReport& wallSteady) {
    Gate g;
    adopt(g, wallSteady, {"flux-r2c", "flux-fd1d", "fd1d-vs-r2c", "runtime"});
    return g;
}

// ---- criterion 2: radiant-node balance -----------------------------------
// The zero-capacitance radiant node must close its own balance after every
// solve.  Exercised on a dedicated two-zone case with radiant walls, HVAC
// and internal loads under varying weather, plus the free-floating year.
Gate criterion2(const CaseReport& freefloat) {
    Gate g;

    BuildingDescription d;
    d.name = "radiant-pair";
    d.simulationType = SimulationType::ThermalOnly;
    for (int i = 0; i < 2; ++i) {
        Zone z;
        z.id = i == 0 ? "north" : "south";
        z.airVolume = 45;
        z.buffer.enabled = false;
        if (i == 0) {
            Component hvac;
            hvac.kind = ComponentKind::IdealAirHandler;
            hvac.id = "north.hvac";
            hvac.params = IdealAirHandlerParams{21.0, 2000.0};
            z.components.push_back(hvac);
        } else {
            Component load;
            load.kind = ComponentKind::InternalLoad;
            load.id = "south.load";
            load.params = InternalLoadParams{Schedule{350.0}};
            z.components.push_back(load);
        }
        d.zones.push_back(z);
    }
    const auto radiantWall = [](const std::string& id, double area) {
        Component c;
        c.kind = ComponentKind::SeparationWall;
        c.id = id;
        c.geometry.area = area;
        c.geometry.azimuth = 0;
        WallParams w;
        w.layers = {{0.8, 1600, 900, 0.2}};
        c.params = std::move(w); // default films carry a radiant share
        return c;
    };
    InterAmbiance mid;
    mid.id = "north-south";
    mid.zoneA = "north";
    mid.zoneB = "south";
    mid.components.push_back(radiantWall("partition", 12));
    d.interAmbiances.push_back(mid);
    for (int i = 0; i < 2; ++i) {
        InterAmbiance ia;
        ia.id = d.zones[i].id + "-out";
        ia.zoneA = d.zones[i].id;
        ia.zoneB = std::string(kExteriorId);
        ia.components.push_back(radiantWall(d.zones[i].id + ".facade", 18));
        d.interAmbiances.push_back(ia);
    }

    WeatherSeries w;
    for (int h = 0; h <= 72; ++h) {
        WeatherRecord r;
        r.time = h * 3600;
        r.drybulb = 5 + 7 * std::sin(h / 24.0 * 6.283185307179586);
        r.directNormal = (h % 24 > 8 && h % 24 < 17) ? 400.0 : 0.0;
        r.diffuseHorizontal = (h % 24 > 7 && h % 24 < 18) ? 120.0 : 0.0;
        w.records.push_back(r);
    }
    Simulation sim(d, w);
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 72 * 3600;
    cfg.timestep = 900;
    cfg.warmupDays = 1;
    sim.run(cfg);
    g.add("two-zone-radiant-defect", sim.thermal()->maxRadiantResidualRelative(), 1e-9);
    adopt(g, freefloat, {"radiant-defect"});
    return g;
}

// ---- criterion 3: airflow mass conservation ------------------------------
// Per-zone balance of every converged step, the three-zone stack against an
// independent bisection solve, and the symmetric-crack midpoint pressure.
Gate criterion3(const CaseReport& airflow3) {
    Gate g;
    adopt(g, airflow3, {"newton-residual", "zone-mass-defect", "pressures-vs-bisection",
                        "symmetric-midpoint"});
    return g;
}

// ---- criterion 4: crack-law oddness and VMC inversion --------------------
Gate criterion4() {
    Gate g;

    std::mt19937 rng(8123001);
    std::uniform_real_distribution<double> kDist(1e-5, 5e-2);
    std::uniform_real_distribution<double> nDist(0.5, 1.0);
    std::uniform_real_distribution<double> dpDist(0.0, 500.0);
    long violations = 0;
    for (int i = 0; i < 20000; ++i) {
        const double k = kDist(rng), n = nDist(rng), dp = dpDist(rng);
        if (crackMassFlow(k, n, dp) != -crackMassFlow(k, n, -dp)) ++violations;
    }
    g.addExact("oddness-bitwise-20000-draws", violations == 0);

    // one sealed zone, one crack, a 0.01 kg/s extract fan: the zone must
    // settle at the inverted crack law
    BuildingDescription d;
    d.simulationType = SimulationType::AirflowOnly;
    Zone z;
    z.id = "cell";
    z.airVolume = 40;
    z.buffer.enabled = false;
    Component fan;
    fan.kind = ComponentKind::VmcExtract;
    fan.id = "cell.fan";
    fan.params = VmcParams{Schedule{0.01}};
    z.components.push_back(fan);
    d.zones.push_back(z);
    InterAmbiance ia;
    ia.id = "cell-out";
    ia.zoneA = "cell";
    ia.zoneB = std::string(kExteriorId);
    Component crack;
    crack.kind = ComponentKind::SmallOpening;
    crack.id = "cell.crack";
    crack.params = CrackParams{1e-3, 0.65};
    ia.components.push_back(crack);
    d.interAmbiances.push_back(ia);

    AirflowModel am(d);
    am.setTime(0);
    am.setConditions({20, 0, 0, {20}});
    AirflowSolverConfig cfg;
    cfg.residualTolerance = 1e-14; // the 1e-9 pressure target needs a tight residual
    cfg.maxIterations = 400;
    am.solvePressures(cfg);
    const double pRef = -std::pow(0.01 / 1e-3, 1.0 / 0.65);
    g.add("vmc-pressure-rel", std::abs(am.zonePressure(0) - pRef) / std::abs(pRef), 1e-9);
    return g;
}

// ---- criterion 5: moisture conservation ----------------------------------
Gate criterion5(const CaseReport& bufferDecay) {
    Gate g;

    // closed zone + buffer pair, no gains, no ventilation: total water is
    // invariant step by step over ten thousand steps
    BuildingDescription d;
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    Zone z;
    z.id = "closed";
    z.airVolume = 50;
    z.buffer = {true, 10.0, 1e-4};
    d.zones.push_back(z);
    MoistureModel mm(d);
    mm.setTime(0);
    mm.setIncomingFlows({{}});
    mm.setZoneHumidity(0, 0.012);
    mm.setBufferHumidity(0, 0.003);
    const double w0 = mm.totalWaterMass();
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const double before = mm.totalWaterMass();
        mm.advance(600.0);
        worst = std::max(worst, std::abs(mm.totalWaterMass() - before) / w0);
    }
    g.add("closed-pair-step-drift", worst, 1e-12);

    adopt(g, bufferDecay, {"vent-steady-humidity", "tau-error"});
    return g;
}

// ---- criterion 6: coupling fixed point -----------------------------------
// Two zones, buoyancy-driven exchange, iterative coupling with tightened
// per-step tolerances.  After the run, re-solving the pressure network at
// the reported temperatures must leave every link flow in place.
Gate criterion6() {
    Gate g;

    BuildingDescription d;
    d.name = "buoyancy-pair";
    d.simulationType = SimulationType::ThermalAirflow;
    d.coupling.thermalAirflowCoupling = CouplingMode::Iterative;
    d.coupling.airTempTolerance = 1e-7;
    d.coupling.flowTolerance = 1e-7;
    d.coupling.maxCouplingIterations = 50;

    const auto makeZoneAt = [](const std::string& id, double refH) {
        Zone z;
        z.id = id;
        z.airVolume = 70;
        z.referenceHeight = refH;
        z.buffer.enabled = false;
        return z;
    };
    Zone lower = makeZoneAt("lower", 1.3);
    Component heater;
    heater.kind = ComponentKind::InternalLoad;
    heater.id = "lower.heater";
    heater.params = InternalLoadParams{Schedule{900.0}};
    lower.components.push_back(heater);
    d.zones.push_back(lower);
    d.zones.push_back(makeZoneAt("upper", 4.0));

    const auto crackAt = [](const std::string& id, double elev, double coeff) {
        Component c;
        c.kind = ComponentKind::SmallOpening;
        c.id = id;
        c.geometry.elevation = elev;
        c.params = CrackParams{coeff, 0.65};
        return c;
    };
    const auto wallOf = [](const std::string& id, double area, double tilt) {
        Component c;
        c.kind = ComponentKind::SeparationWall;
        c.id = id;
        c.geometry.area = area;
        c.geometry.tilt = tilt;
        WallParams w;
        w.layers = {{0.9, 1400, 950, 0.18}};
        w.model.longwaveInterior = LongwaveInteriorModel::None;
        w.film = {6.0, 0.0, 15.0, 0.0};
        c.params = std::move(w);
        return c;
    };

    InterAmbiance between;
    between.id = "lower-upper";
    between.zoneA = "lower";
    between.zoneB = "upper";
    between.components.push_back(wallOf("floor", 20, 0));
    between.components.push_back(crackAt("stair-low", 2.4, 4e-3));
    between.components.push_back(crackAt("stair-high", 2.7, 4e-3));
    d.interAmbiances.push_back(between);
    for (int i = 0; i < 2; ++i) {
        InterAmbiance ia;
        ia.id = d.zones[i].id + "-out";
        ia.zoneA = d.zones[i].id;
        ia.zoneB = std::string(kExteriorId);
        ia.components.push_back(wallOf(d.zones[i].id + ".facade", 28, 90));
        ia.components.push_back(crackAt(d.zones[i].id + ".leak",
                                        i == 0 ? 0.5 : 4.8, 2e-3));
        d.interAmbiances.push_back(ia);
    }

    WeatherSeries w;
    for (int h = 0; h <= 48; ++h) {
        WeatherRecord r;
        r.time = h * 3600;
        r.drybulb = -2;
        w.records.push_back(r);
    }
    Simulation sim(d, w);
    RunConfig cfg;
    cfg.start = 0;
    cfg.end = 36 * 3600;
    cfg.timestep = 3600;
    cfg.warmupDays = 1;
    sim.run(cfg);

    // flows as reported by the last step
    const AirflowModel& solved = *sim.airflow();
    std::vector<double> reported;
    for (int i = 0; i < solved.linkCount(); ++i) reported.push_back(solved.link(i).netFlow());

    // independent re-solve at the reported temperatures
    AirflowModel probe = solved;
    AirflowConditions cond;
    cond.outdoorTemp = sim.currentWeather().drybulb;
    cond.windSpeed = sim.currentWeather().windSpeed;
    cond.windDirection = sim.currentWeather().windDirection;
    for (size_t zi = 0; zi < d.zones.size(); ++zi)
        cond.zoneTemps.push_back(sim.thermal()->zoneAirTemperature(static_cast<int>(zi)));
    probe.setConditions(cond);
    probe.solvePressures();

    double worst = 0;
    for (int i = 0; i < probe.linkCount(); ++i)
        worst = std::max(worst, std::abs(probe.link(i).netFlow() - reported[i]));
    g.add("fixed-point-flow-shift", worst, d.coupling.flowTolerance);
    g.addExact("coupling-iterations-used", sim.counters().couplingIterations > 0);
    return g;
}

// ---- criterion 7: determinism and performance ----------------------------
Gate criterion7(const CaseReport& freefloat) {
    Gate g;
    adopt(g, freefloat, {"determinism", "runtime", "weekly-steadiness"});
    return g;
}

// ---- criterion 8: parser robustness --------------------------------------
// Random byte-level mutations of valid building and weather files: the
// parsers must never throw, and every rejection must carry a 1-based
// line/column position.
BuildingDescription fuzzSeed() {
    BuildingDescription d;
    d.name = "fuzz seed";
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    d.site = {48.8, 2.3, 15.0, 6.0};
    d.coupling.thermalAirflowCoupling = CouplingMode::Iterative;
    d.cpTable = {{0, 120, 0.5}, {120, 240, -0.4}, {240, 360, 0.1}};

    Zone hall;
    hall.id = "hall";
    hall.airVolume = 120;
    hall.referenceHeight = 1.4;
    hall.internalMoistureGain = Schedule{2.5e-6};
    hall.buffer = {true, 18.0, 1.2e-4};
    Component iw;
    iw.kind = ComponentKind::InternalWall;
    iw.id = "hall.mass";
    iw.geometry.area = 26;
    WallParams iwp;
    iwp.layers = {{1.1, 1900, 840, 0.1}};
    iw.params = std::move(iwp);
    hall.components.push_back(iw);
    Component hvac;
    hvac.kind = ComponentKind::IdealAirHandler;
    hvac.id = "hall.hvac";
    hvac.params = IdealAirHandlerParams{20.5, 3000};
    hall.components.push_back(hvac);
    Component load;
    load.kind = ComponentKind::InternalLoad;
    load.id = "hall.load";
    Schedule sched;
    sched.values.assign(24, 80.0);
    sched.values[12] = 450.0;
    load.params = InternalLoadParams{sched};
    hall.components.push_back(load);
    Component fan;
    fan.kind = ComponentKind::VmcExtract;
    fan.id = "hall.vmc";
    fan.params = VmcParams{Schedule{0.02}};
    hall.components.push_back(fan);
    d.zones.push_back(hall);

    Zone attic;
    attic.id = "attic";
    attic.airVolume = 55;
    attic.referenceHeight = 4.6;
    d.zones.push_back(attic);

    InterAmbiance ceiling;
    ceiling.id = "hall-attic";
    ceiling.zoneA = "hall";
    ceiling.zoneB = "attic";
    Component cw;
    cw.kind = ComponentKind::SeparationWall;
    cw.id = "ceiling.deck";
    cw.geometry.area = 48;
    cw.geometry.tilt = 0;
    WallParams cwp;
    cwp.layers = {{0.14, 500, 1600, 0.022}, {0.04, 30, 1200, 0.2}};
    cwp.model.conduction = ConductionModel::FD1D;
    cwp.model.nodesPerLayer = 4;
    cw.params = std::move(cwp);
    ceiling.components.push_back(cw);
    Component hatch;
    hatch.kind = ComponentKind::LargeOpening;
    hatch.id = "ceiling.hatch";
    hatch.geometry.elevation = 2.5;
    hatch.params = LargeOpeningParams{0.7, 1.1, 0.42};
    ceiling.components.push_back(hatch);
    d.interAmbiances.push_back(ceiling);

    InterAmbiance shell;
    shell.id = "hall-out";
    shell.zoneA = "hall";
    shell.zoneB = std::string(kExteriorId);
    Component fw;
    fw.kind = ComponentKind::SeparationWall;
    fw.id = "hall.south";
    fw.geometry.area = 22;
    fw.geometry.azimuth = 180;
    WallParams fwp;
    fwp.layers = {{1.4, 2100, 880, 0.2}};
    fw.params = std::move(fwp);
    shell.components.push_back(fw);
    Component slab;
    slab.kind = ComponentKind::SeparationWall;
    slab.id = "hall.slab";
    slab.geometry.area = 48;
    slab.geometry.tilt = 0;
    WallParams sp;
    sp.layers = {{1.75, 2300, 920, 0.15}};
    sp.groundContact = true;
    sp.farSideTemperature = 12.0;
    sp.film.convExterior = 5.9;
    sp.film.radExterior = 0;
    slab.params = std::move(sp);
    shell.components.push_back(slab);
    Component win;
    win.kind = ComponentKind::Glazing;
    win.id = "hall.window";
    win.geometry.area = 9;
    win.geometry.azimuth = 180;
    win.params = GlazingParams{2.6, 0.75, FilmCoefficients{}};
    shell.components.push_back(win);
    Component vent;
    vent.kind = ComponentKind::Vent;
    vent.id = "hall.inlet";
    vent.geometry.elevation = 1.9;
    vent.geometry.azimuth = 0;
    vent.params = CrackParams{6e-3, 0.5};
    shell.components.push_back(vent);
    Component duct;
    duct.kind = ComponentKind::KnownFlow;
    duct.id = "hall.duct";
    Schedule ductFlow;
    ductFlow.values.assign(24, 0.0);
    ductFlow.values[8] = 0.015;
    duct.params = KnownFlowParams{ductFlow};
    shell.components.push_back(duct);
    d.interAmbiances.push_back(shell);

    InterAmbiance atticOut;
    atticOut.id = "attic-out";
    atticOut.zoneA = "attic";
    atticOut.zoneB = std::string(kExteriorId);
    Component leak;
    leak.kind = ComponentKind::SmallOpening;
    leak.id = "attic.leak";
    leak.geometry.elevation = 5.2;
    leak.geometry.azimuth = 90;
    leak.params = CrackParams{3.1e-3, 0.62};
    atticOut.components.push_back(leak);
    d.interAmbiances.push_back(atticOut);

    d.outputs = {{"hall", OutputVariable::ZoneAirTemperature},
                 {"hall", OutputVariable::ZoneHumidity},
                 {"attic.leak", OutputVariable::LinkFlow},
                 {"hall.hvac", OutputVariable::HvacPower}};
    return d;
}

Gate criterion8() {
    Gate g;

    const std::string baseBuilding = serializeBuilding(fuzzSeed());
    WeatherSeries ws;
    for (int h = 0; h <= 47; ++h) {
        WeatherRecord r;
        r.time = h * 3600;
        r.drybulb = 8 + 6 * std::sin(h * 0.26);
        r.humidity = 0.005 + 0.002 * std::cos(h * 0.11);
        r.windSpeed = 1 + (h % 5);
        r.windDirection = (h * 37) % 360;
        r.directNormal = h % 2 ? 310.0 : 0.0;
        r.diffuseHorizontal = 90;
        ws.records.push_back(r);
    }
    const std::string baseWeather = serializeWeather(ws);

    std::mt19937 rng(20250823);
    const auto mutate = [&rng](const std::string& base) {
        std::string s = base;
        const int edits = 1 + static_cast<int>(rng() % 3);
        for (int e = 0; e < edits && !s.empty(); ++e) {
            const size_t at = rng() % s.size();
            switch (rng() % 5) {
            case 0: s[at] = static_cast<char>(rng() & 0xff); break;
            case 1: s.insert(s.begin() + static_cast<long>(at), static_cast<char>(rng() & 0xff)); break;
            case 2: s.erase(s.begin() + static_cast<long>(at)); break;
            case 3: s.resize(at); break;
            case 4: {
                const size_t len = std::min<size_t>(1 + rng() % 40, s.size() - at);
                s.insert(rng() % (s.size() + 1), s.substr(at, len));
                break;
            }
            }
        }
        return s;
    };

    long crashes = 0, rejected = 0, accepted = 0, unlocated = 0;
    for (int i = 0; i < 50000; ++i) {
        const std::string t = mutate(baseBuilding);
        try {
            const BuildingParseResult res = parseBuilding(t);
            if (res.ok()) {
                ++accepted;
            } else {
                ++rejected;
                for (const Diagnostic& di : res.diagnostics)
                    if (di.location.line <= 0 || di.location.column <= 0) ++unlocated;
            }
        } catch (...) {
            ++crashes;
        }
    }
    for (int i = 0; i < 50000; ++i) {
        const std::string t = mutate(baseWeather);
        try {
            const WeatherParseResult res = parseWeather(t);
            if (res.ok()) {
                ++accepted;
            } else {
                ++rejected;
                for (const Diagnostic& di : res.diagnostics)
                    if (di.location.line <= 0 || di.location.column <= 0) ++unlocated;
            }
        } catch (...) {
            ++crashes;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "100000 mutations: %ld accepted, %ld rejected", accepted,
                  rejected);
    g.append(buf, true);
    g.addExact("zero-crashes", crashes == 0);
    g.addExact("all-rejections-located", unlocated == 0);
    return g;
}

struct Criterion {
    int number;
    const char* title;
    Gate gate;
};

} // namespace

int main() {
    // the shared heavy cases run once
    CaseReport wallSteady, airflow3, bufferDecay, freefloat;
    try {
        wallSteady = runVerificationCase("wall-steady");
        airflow3 = runVerificationCase("airflow-3zone");
        bufferDecay = runVerificationCase("buffer-decay");
        freefloat = runVerificationCase("freefloat-box");
    } catch (const std::exception& e) {
        std::printf("[FAIL] verification cases aborted: %s\n", e.what());
        return 1;
    }

    std::vector<Criterion> criteria;
    const auto runCriterion = [&criteria](int number, const char* title, auto&& fn) {
        Gate g;
        try {
            g = fn();
        } catch (const std::exception& e) {
            g.append(std::string("aborted: ") + e.what(), false);
        }
        criteria.push_back({number, title, std::move(g)});
    };

    runCriterion(1, "steady conduction vs series resistance", [&] { return criterion1(wallSteady); });
    runCriterion(2, "radiant-node balance closes after every solve", [&] { return criterion2(freefloat); });
    runCriterion(3, "airflow mass conservation and pressure oracles", [&] { return criterion3(airflow3); });
    runCriterion(4, "crack-law oddness and mechanical-extract inversion", [] { return criterion4(); });
    runCriterion(5, "moisture conservation, vent steady state, buffer lag", [&] { return criterion5(bufferDecay); });
    runCriterion(6, "iterative coupling reaches a flow fixed point", [] { return criterion6(); });
    runCriterion(7, "annual run determinism, speed and energy bookkeeping", [&] { return criterion7(freefloat); });
    runCriterion(8, "parser robustness under random mutations", [] { return criterion8(); });

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!c.gate.ok) ++failures;
        std::printf("[%s] %d %-55s %s\n", c.gate.ok ? "PASS" : "FAIL", c.number, c.title,
                    c.gate.detail.c_str());
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
