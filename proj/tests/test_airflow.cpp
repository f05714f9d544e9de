#include "doctest.h"

#include <cmath>
#include <random>

#include "codasim/airflow.hpp"
#include "codasim/errors.hpp"
#include "codasim/physics.hpp"

using namespace codasim;

namespace {

Component crackComponent(const std::string& id, double elev, double az, double k, double n) {
    Component c;
    c.kind = ComponentKind::SmallOpening;
    c.id = id;
    c.geometry.elevation = elev;
    c.geometry.azimuth = az;
    CrackParams p;
    p.flowCoefficient = k;
    p.flowExponent = n;
    c.params = p;
    return c;
}

Zone plainZone(const std::string& id, double volume, double refH) {
    Zone z;
    z.id = id;
    z.airVolume = volume;
    z.referenceHeight = refH;
    z.buffer.enabled = false;
    return z;
}

BuildingDescription singleZoneVented(double extract) {
    BuildingDescription d;
    d.simulationType = SimulationType::AirflowOnly;
    Zone z = plainZone("cell", 50, 0);
    if (extract > 0) {
        Component vmc;
        vmc.kind = ComponentKind::VmcExtract;
        vmc.id = "cell.vmc";
        vmc.params = VmcParams{Schedule{extract}};
        z.components.push_back(vmc);
    }
    d.zones.push_back(z);
    InterAmbiance ia;
    ia.id = "cell-out";
    ia.zoneA = "cell";
    ia.zoneB = std::string(kExteriorId);
    ia.components.push_back(crackComponent("cell.crack", 0, 0, 1e-3, 0.65));
    d.interAmbiances.push_back(ia);
    return d;
}

} // namespace

TEST_SUITE("airflow") {

TEST_CASE("crack law is exactly odd and follows the power law") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> kDist(1e-5, 1e-2);
    std::uniform_real_distribution<double> nDist(0.5, 1.0);
    std::uniform_real_distribution<double> dpDist(-200.0, 200.0);
    for (int i = 0; i < 1000; ++i) {
        const double k = kDist(rng), n = nDist(rng), dp = dpDist(rng);
        CHECK(crackMassFlow(k, n, dp) == -crackMassFlow(k, n, -dp)); // bitwise
        if (dp > 0) CHECK(crackMassFlow(k, n, dp) == doctest::Approx(k * std::pow(dp, n)));
    }
    CHECK(crackMassFlow(1e-3, 0.65, 0.0) == 0.0);
}

TEST_CASE("wind pressure uses the sector table") {
    const auto& table = defaultCpTable();
    const double rho = airDensity(20.0);
    const double q = 0.5 * rho * 4.0 * 4.0;
    // facade facing the wind: angle 0
    CHECK(windPressure(table, 0, 0, 4.0, rho) == doctest::Approx(0.6 * q));
    // flank
    CHECK(windPressure(table, 90, 0, 4.0, rho) == doctest::Approx(-0.65 * q));
    // leeward
    CHECK(windPressure(table, 180, 0, 4.0, rho) == doctest::Approx(-0.3 * q));
    // angle wraps: wind from 350 on a facade at 10 is a 20-degree angle
    CHECK(windPressure(table, 10, 350, 4.0, rho) == doctest::Approx(0.6 * q));

    const std::vector<CpSector> gappy = {{0, 90, 0.5}};
    CHECK_THROWS_AS((void)windPressure(gappy, 180, 0, 4.0, rho), SimulationError);
}

TEST_CASE("uniform pressure difference across an opening gives the textbook flow") {
    const double rho = airDensity(20.0);
    const double dp = 4.0;
    const OpeningFlow f = largeOpeningFlow(0.9, 2.1, 0.42, dp, 0.0, rho, rho);
    const double ref = 0.42 * 0.9 * 2.1 * std::sqrt(2 * rho * dp);
    CHECK(f.aToB == doctest::Approx(ref).epsilon(1e-12));
    CHECK(f.bToA == 0.0);
    const OpeningFlow g = largeOpeningFlow(0.9, 2.1, 0.42, -dp, 0.0, rho, rho);
    CHECK(g.bToA == doctest::Approx(ref).epsilon(1e-12));
    CHECK(g.aToB == 0.0);
}

TEST_CASE("opening flow is continuous at vanishing slope") {
    const double rho = airDensity(20.0);
    const OpeningFlow flat = largeOpeningFlow(1.0, 2.0, 0.42, 1.5, 0.0, rho, rho);
    const OpeningFlow tilted = largeOpeningFlow(1.0, 2.0, 0.42, 1.5, 1e-15, rho, rho);
    CHECK(tilted.aToB == doctest::Approx(flat.aToB).epsilon(1e-9));
    CHECK(tilted.bToA == doctest::Approx(flat.bToA).epsilon(1e-9));
}

TEST_CASE("mechanical extract settles at the power-law depression") {
    // extract 0.01 kg/s through K=1e-3, n=0.65: dp = (Q/K)^(1/n)
    AirflowModel am(singleZoneVented(0.01));
    am.setTime(0);
    am.setConditions({20, 0, 0, {20}});
    AirflowSolverConfig cfg;
    cfg.residualTolerance = 1e-14;
    cfg.maxIterations = 300;
    am.solvePressures(cfg);
    const double expected = -std::pow(0.01 / 1e-3, 1.0 / 0.65);
    CHECK(am.zonePressure(0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(am.vmcExtract(0) == 0.01);
    // the crack supplies exactly the extracted mass
    CHECK(am.linkFlow("cell.crack") == doctest::Approx(-0.01).epsilon(1e-9));
}

TEST_CASE("incoming flows land in the right zone with the right source") {
    AirflowModel am(singleZoneVented(0.02));
    am.setTime(0);
    am.setConditions({5, 0, 0, {21}});
    am.solvePressures();
    const auto flows = am.incomingFlowsByZone();
    REQUIRE(flows.size() == 1);
    REQUIRE(flows[0].size() == 1);
    CHECK(flows[0][0].sourceZone == -1); // outdoors
    CHECK(flows[0][0].massFlow == doctest::Approx(0.02).epsilon(1e-6));
}

TEST_CASE("zone without a pressure path is rejected") {
    BuildingDescription d;
    d.simulationType = SimulationType::AirflowOnly;
    d.zones.push_back(plainZone("sealed", 30, 0));
    InterAmbiance ia;
    ia.id = "sealed-out";
    ia.zoneA = "sealed";
    ia.zoneB = std::string(kExteriorId);
    Component kf;
    kf.kind = ComponentKind::KnownFlow;
    kf.id = "duct";
    kf.params = KnownFlowParams{Schedule{0.01}};
    ia.components.push_back(kf); // pressure-independent: not a path
    d.interAmbiances.push_back(ia);
    AirflowModel am(d);
    am.setTime(0);
    am.setConditions({20, 0, 0, {20}});
    CHECK_THROWS_AS(am.solvePressures(), SimulationError);
}

TEST_CASE("known flow offsets the crack balance") {
    BuildingDescription d = singleZoneVented(0.0);
    InterAmbiance duct;
    duct.id = "duct-ia";
    duct.zoneA = "cell";
    duct.zoneB = std::string(kExteriorId);
    Component kf;
    kf.kind = ComponentKind::KnownFlow;
    kf.id = "duct";
    kf.params = KnownFlowParams{Schedule{0.004}}; // pushes cell -> out
    duct.components.push_back(kf);
    d.interAmbiances.push_back(duct);

    AirflowModel am(d);
    am.setTime(0);
    am.setConditions({20, 0, 0, {20}});
    AirflowSolverConfig cfg;
    cfg.residualTolerance = 1e-13;
    am.solvePressures(cfg);
    // crack must bring in what the duct pushes out
    CHECK(am.linkFlow("cell.crack") == doctest::Approx(-0.004).epsilon(1e-8));
    CHECK(am.zonePressure(0) < 0.0);
}

TEST_CASE("iteration budget exhaustion reports the residual") {
    AirflowSolverConfig cfg;
    cfg.maxIterations = 1;
    cfg.picardRestarts = 0;
    cfg.relaxation = 0.05; // too timid to converge in one step
    AirflowModel am(singleZoneVented(0.01));
    am.setTime(0);
    am.setConditions({20, 0, 0, {20}});
    try {
        am.solvePressures(cfg);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.finalResidual() > 0.0);
    }
}

TEST_CASE("stack effect drives the classic two-opening loop") {
    // warm zone, cold outdoors, cracks at 0.2 m and 2.8 m: air enters low,
    // leaves high, and both cracks carry the same mass
    BuildingDescription d;
    d.simulationType = SimulationType::AirflowOnly;
    d.zones.push_back(plainZone("room", 60, 1.5));
    InterAmbiance ia;
    ia.id = "room-out";
    ia.zoneA = "room";
    ia.zoneB = std::string(kExteriorId);
    ia.components.push_back(crackComponent("low", 0.2, 0, 2e-3, 0.65));
    ia.components.push_back(crackComponent("high", 2.8, 0, 2e-3, 0.65));
    d.interAmbiances.push_back(ia);

    AirflowModel am(d);
    am.setTime(0);
    am.setConditions({0, 0, 0, {22}});
    AirflowSolverConfig cfg;
    cfg.residualTolerance = 1e-12;
    am.solvePressures(cfg);
    const double qLow = am.linkFlow("low");
    const double qHigh = am.linkFlow("high");
    CHECK(qLow < 0.0);  // outdoors -> room (A is the zone, so inflow is negative)
    CHECK(qHigh > 0.0); // room -> outdoors
    CHECK(qLow == doctest::Approx(-qHigh).epsilon(1e-9));
    CHECK(qHigh > 1e-3); // a real draught, not roundoff
}

TEST_CASE("zone reached only through an opening converges at equal densities") {
    // With both zones at the same temperature the opening carries no stack
    // flow, so its only root is at zero pressure difference where the
    // square-root law is vertical; the solver used to orbit that root until
    // the restart budget ran out.
    BuildingDescription d;
    d.simulationType = SimulationType::AirflowOnly;
    d.zones.push_back(plainZone("hall", 100, 1.25));
    d.zones.push_back(plainZone("loft", 60, 3.4));

    InterAmbiance out;
    out.id = "hall-out";
    out.zoneA = "hall";
    out.zoneB = std::string(kExteriorId);
    out.components.push_back(crackComponent("leak-lo", 0.3, 0, 2e-3, 0.65));
    out.components.push_back(crackComponent("leak-hi", 2.0, 0, 2e-3, 0.65));
    d.interAmbiances.push_back(out);

    InterAmbiance up;
    up.id = "hall-loft";
    up.zoneA = "hall";
    up.zoneB = "loft";
    Component hatch;
    hatch.kind = ComponentKind::LargeOpening;
    hatch.id = "hatch";
    hatch.geometry.elevation = 2.5;
    hatch.params = LargeOpeningParams{0.6, 0.5, 0.42};
    up.components.push_back(hatch);
    d.interAmbiances.push_back(up);

    AirflowModel am(d);
    am.setTime(0);
    am.setConditions({0, 0, 0, {20, 20}});
    const AirflowSolveStats stats = am.solvePressures();
    CHECK(stats.finalResidual < 1e-8);
    CHECK(am.residuals(am.pressures()).cwiseAbs().maxCoeff() < 1e-8);
    // the hatch idles while the hall breathes through its own cracks
    CHECK(std::abs(am.linkFlow("hatch")) < 1e-6);
    CHECK(am.linkFlow("leak-lo") == doctest::Approx(-am.linkFlow("leak-hi")).epsilon(1e-6));
    CHECK(std::abs(am.linkFlow("leak-hi")) > 1e-4);
}

} // TEST_SUITE
