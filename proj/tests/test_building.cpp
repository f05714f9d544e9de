#include "doctest.h"

#include "codasim/building.hpp"

using namespace codasim;

namespace {

// minimal valid two-zone description used as a base for mutation tests
BuildingDescription baseline() {
    BuildingDescription d;
    d.name = "base";
    Zone a;
    a.id = "a";
    a.airVolume = 40;
    Zone b;
    b.id = "b";
    b.airVolume = 30;
    d.zones = {a, b};

    InterAmbiance ab;
    ab.id = "a-b";
    ab.zoneA = "a";
    ab.zoneB = "b";
    Component wall;
    wall.kind = ComponentKind::SeparationWall;
    wall.id = "w.ab";
    wall.geometry.area = 12;
    WallParams wp;
    wp.layers = {{0.7, 1400, 1000, 0.1}};
    wall.params = wp;
    ab.components.push_back(wall);
    d.interAmbiances.push_back(ab);

    InterAmbiance ao;
    ao.id = "a-out";
    ao.zoneA = "a";
    ao.zoneB = std::string(kExteriorId);
    Component ext = wall;
    ext.id = "w.ao";
    ao.components.push_back(ext);
    d.interAmbiances.push_back(ao);
    return d;
}

bool hasIssue(const BuildingDescription& d, const std::string& entity) {
    for (const Diagnostic& x : validate(d))
        if (x.entity == entity) return true;
    return false;
}

} // namespace

TEST_SUITE("building") {

TEST_CASE("baseline description validates clean") {
    CHECK(validate(baseline()).empty());
}

TEST_CASE("duplicate and reserved ids are rejected") {
    auto d = baseline();
    d.zones.push_back(d.zones[0]);
    CHECK(hasIssue(d, "a"));

    d = baseline();
    d.zones[0].id = std::string(kExteriorId);
    CHECK(!validate(d).empty());

    d = baseline();
    d.interAmbiances[0].components[0].id = "w.ao"; // collides with the other wall
    CHECK(hasIssue(d, "w.ao"));
}

TEST_CASE("inter-ambiance endpoint rules") {
    auto d = baseline();
    d.interAmbiances[0].zoneB = "nowhere";
    CHECK(hasIssue(d, "a-b"));

    d = baseline();
    d.interAmbiances[0].zoneA = std::string(kExteriorId);
    CHECK(hasIssue(d, "a-b")); // exterior only allowed on side B

    d = baseline();
    d.interAmbiances[0].zoneB = "a";
    CHECK(hasIssue(d, "a-b")); // self-coupling
}

TEST_CASE("component placement is gated by side") {
    auto d = baseline();
    Component vmc;
    vmc.kind = ComponentKind::VmcExtract;
    vmc.id = "bad.vmc";
    vmc.params = VmcParams{};
    d.interAmbiances[0].components.push_back(vmc); // zone-side kind
    CHECK(hasIssue(d, "bad.vmc"));

    d = baseline();
    Component crack;
    crack.kind = ComponentKind::SmallOpening;
    crack.id = "bad.crack";
    CrackParams cp;
    cp.flowCoefficient = 1e-3;
    crack.params = cp;
    d.zones[0].components.push_back(crack); // inter-ambiance kind
    CHECK(hasIssue(d, "bad.crack"));
}

TEST_CASE("parameter ranges") {
    auto d = baseline();
    std::get<WallParams>(d.interAmbiances[0].components[0].params).layers[0].conductivity = 0;
    CHECK(hasIssue(d, "w.ab"));

    d = baseline();
    d.interAmbiances[0].components[0].geometry.area = -1;
    CHECK(hasIssue(d, "w.ab"));

    d = baseline();
    Component crack;
    crack.kind = ComponentKind::SmallOpening;
    crack.id = "c1";
    CrackParams cp;
    cp.flowCoefficient = 1e-3;
    cp.flowExponent = 1.2; // outside [0.5, 1]
    crack.params = cp;
    d.interAmbiances[0].components.push_back(crack);
    CHECK(hasIssue(d, "c1"));

    d = baseline();
    Component g;
    g.kind = ComponentKind::Glazing;
    g.id = "g1";
    g.geometry.area = 2;
    GlazingParams gp;
    gp.shortwaveTransmittance = 1.5;
    g.params = gp;
    d.interAmbiances[0].components.push_back(g);
    CHECK(hasIssue(d, "g1"));

    d = baseline();
    d.zones[0].airVolume = 0;
    CHECK(hasIssue(d, "a"));
}

TEST_CASE("schedules must be constant or hourly") {
    auto d = baseline();
    d.zones[0].internalMoistureGain.values = {1, 2, 3}; // neither 1 nor 24
    CHECK(hasIssue(d, "a"));
    d.zones[0].internalMoistureGain.values.assign(24, 1e-6);
    CHECK(validate(d).empty());
}

TEST_CASE("at most one air handler per zone") {
    auto d = baseline();
    Component h;
    h.kind = ComponentKind::IdealAirHandler;
    h.id = "h1";
    h.params = IdealAirHandlerParams{};
    d.zones[0].components.push_back(h);
    h.id = "h2";
    d.zones[0].components.push_back(h);
    CHECK(hasIssue(d, "a"));
}

TEST_CASE("ground contact constraints") {
    auto d = baseline();
    auto& wall = d.interAmbiances[0].components[0]; // a-b, shared
    std::get<WallParams>(wall.params).groundContact = true;
    CHECK(hasIssue(d, "w.ab")); // needs EXTERIOR on side B

    d = baseline();
    auto& ext = d.interAmbiances[1].components[0];
    std::get<WallParams>(ext.params).groundContact = true;
    CHECK(validate(d).empty());
    std::get<WallParams>(ext.params).farSideTemperature = 12.0;
    CHECK(validate(d).empty());
}

TEST_CASE("coupling and cp-table sanity") {
    auto d = baseline();
    d.coupling.maxCouplingIterations = 0;
    CHECK(hasIssue(d, "coupling"));

    d = baseline();
    d.cpTable = {{90, 30, 0.5}}; // from >= to
    CHECK(hasIssue(d, "cp_table"));
}

TEST_CASE("output requests must reference known entities") {
    auto d = baseline();
    d.outputs.push_back({"ghost", OutputVariable::ZoneAirTemperature});
    CHECK(hasIssue(d, "ghost"));

    d = baseline();
    d.outputs.push_back({"w.ab", OutputVariable::SurfaceFlux});
    d.outputs.push_back({"a", OutputVariable::ZoneAirTemperature});
    CHECK(validate(d).empty());
}

TEST_CASE("schedule evaluation by hour of day") {
    Schedule s;
    s.values.assign(24, 0.0);
    s.values[7] = 2.5;
    CHECK(s.at(7 * 3600) == 2.5);
    CHECK(s.at(7 * 3600 + 1800) == 2.5);
    CHECK(s.at(8 * 3600) == 0.0);
    CHECK(s.at(86400 + 7 * 3600) == 2.5); // wraps daily
    Schedule c{3.0};
    CHECK(c.at(123456) == 3.0);
}

TEST_CASE("findZone resolves ids and the exterior") {
    const auto d = baseline();
    CHECK(findZone(d, "a") == 0);
    CHECK(findZone(d, "b") == 1);
    CHECK(findZone(d, std::string(kExteriorId)) == -1);
    CHECK(findZone(d, "missing") == -1); // validate() is the gate for typos
}

} // TEST_SUITE
