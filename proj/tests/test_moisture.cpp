#include "doctest.h"

#include <cmath>

#include "codasim/building.hpp"
#include "codasim/errors.hpp"
#include "codasim/moisture.hpp"
#include "codasim/physics.hpp"

using namespace codasim;

namespace {

Zone moistZone(const std::string& id, double volume, double gain = 0.0) {
    Zone z;
    z.id = id;
    z.airVolume = volume;
    z.buffer.enabled = false;
    z.internalMoistureGain = Schedule{gain};
    return z;
}

} // namespace

TEST_SUITE("moisture") {

TEST_CASE("closed exchange between two zones conserves water per step") {
    BuildingDescription d;
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    d.zones.push_back(moistZone("dry", 40));
    d.zones.push_back(moistZone("wet", 90));
    MoistureModel mm(d);
    mm.setTime(0);
    // seed an imbalance, then recirculate air between the zones
    std::vector<std::vector<IncomingFlow>> flows(2);
    flows[0].push_back({1, 0.05});
    flows[1].push_back({0, 0.05});
    mm.setIncomingFlows(flows);
    mm.setZoneHumidity(0, 0.004);
    mm.setZoneHumidity(1, 0.012);
    const double w0 = mm.totalWaterMass();
    double maxDefect = 0;
    for (int i = 0; i < 2000; ++i) {
        mm.advance(60.0);
        maxDefect = std::max(maxDefect, std::abs(mm.totalWaterMass() - w0) / w0);
    }
    CHECK(maxDefect < 1e-12);
    // and the zones end up at the mass-weighted mean
    const double mDry = kRefAirDensity * 40, mWet = kRefAirDensity * 90;
    const double mean = (mDry * 0.004 + mWet * 0.012) / (mDry + mWet);
    CHECK(mm.zoneHumidity(0) == doctest::Approx(mean).epsilon(1e-9));
    CHECK(mm.zoneHumidity(1) == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("ventilated steady state sits at r_out + gain/flow") {
    BuildingDescription d;
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    d.zones.push_back(moistZone("room", 50, 4e-6));
    MoistureModel mm(d);
    mm.setTime(0);
    mm.setExteriorHumidity(0.006);
    std::vector<std::vector<IncomingFlow>> flows(1);
    flows[0].push_back({-1, 0.025});
    mm.setIncomingFlows(flows);
    mm.setUniformHumidity(0.006);
    const double tauVent = kRefAirDensity * 50 / 0.025;
    for (int i = 0; i < 400; ++i) mm.advance(tauVent);
    CHECK(mm.zoneHumidity(0) == doctest::Approx(0.006 + 4e-6 / 0.025).epsilon(1e-6));
}

TEST_CASE("buffer relaxation matches the implicit-Euler decay factor") {
    BuildingDescription d;
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    Zone z = moistZone("room", 50);
    z.buffer.enabled = true;
    z.buffer.mass = 10;
    z.buffer.exchangeCoefficient = 1e-4;
    d.zones.push_back(z);
    MoistureModel mm(d);
    mm.setTime(0);
    mm.setIncomingFlows({{}});

    const double mAir = kRefAirDensity * 50;
    const double tau = mAir * 10 / (1e-4 * (mAir + 10));
    CHECK(mm.bufferTimeConstant(0) == doctest::Approx(tau).epsilon(1e-12));

    // offset the pair and watch the difference decay by exactly 1/(1 + dt/tau)
    mm.setZoneHumidity(0, 0.010);
    mm.setBufferHumidity(0, 0.004);
    const double dt = tau / 7;
    const double factor = 1.0 / (1.0 + dt / tau);
    double diff = 0.010 - 0.004;
    for (int i = 0; i < 30; ++i) {
        mm.advance(dt);
        diff *= factor;
        CHECK(mm.zoneHumidity(0) - mm.bufferHumidity(0)
              == doctest::Approx(diff).epsilon(1e-9));
    }
    // and the pair conserves water throughout
    const double wEnd = mm.totalWaterMass();
    CHECK(wEnd == doctest::Approx(mAir * 0.010 + 10 * 0.004).epsilon(1e-12));
}

TEST_CASE("buffer mass defaults from the air volume when left at zero") {
    BuildingDescription d;
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    Zone z = moistZone("room", 50);
    z.buffer.enabled = true;
    z.buffer.mass = 0; // auto-size
    z.buffer.exchangeCoefficient = 1e-4;
    d.zones.push_back(z);
    MoistureModel mm(d);
    const double mAir = kRefAirDensity * 50;
    const double mBuf = defaultBufferMass(50);
    CHECK(mm.bufferTimeConstant(0)
          == doctest::Approx(mAir * mBuf / (1e-4 * (mAir + mBuf))).epsilon(1e-12));
}

TEST_CASE("saturation is flagged but never clipped") {
    BuildingDescription d;
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    d.zones.push_back(moistZone("cold", 30, 5e-4)); // heavy gain
    MoistureModel mm(d);
    mm.setTime(0);
    mm.setIncomingFlows({{}});
    mm.setZoneTemperatures({2.0}); // r_sat(2 C) ~ 0.0044
    mm.setUniformHumidity(0.004);
    mm.advance(3600.0);
    mm.advance(3600.0);
    CHECK(mm.anySaturated());
    CHECK(mm.saturatedZones()[0]);
    CHECK(mm.zoneHumidity(0) > saturationHumidity(2.0)); // not clipped
}

TEST_CASE("saturation humidity matches the textbook value at 20 C") {
    // ~14.7 g/kg at 20 C and standard pressure
    CHECK(saturationHumidity(20.0) == doctest::Approx(0.0147).epsilon(0.02));
    // monotone in temperature
    CHECK(saturationHumidity(25.0) > saturationHumidity(20.0));
    CHECK(saturationHumidity(0.0) < saturationHumidity(10.0));
}

TEST_CASE("buffer queries on unbuffered zones throw") {
    BuildingDescription d;
    d.simulationType = SimulationType::ThermalAirflowMoisture;
    d.zones.push_back(moistZone("bare", 25));
    MoistureModel mm(d);
    CHECK(!mm.zoneBuffered(0));
    CHECK_THROWS_AS((void)mm.bufferHumidity(0), SimulationError);
    CHECK_THROWS_AS((void)mm.bufferTimeConstant(0), SimulationError);
}

} // TEST_SUITE
