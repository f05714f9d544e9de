#include "codasim/building.hpp"

#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace codasim {

const char* kindName(ComponentKind kind) {
    switch (kind) {
    case ComponentKind::InternalWall: return "internal_wall";
    case ComponentKind::IdealAirHandler: return "air_handler";
    case ComponentKind::InternalLoad: return "internal_load";
    case ComponentKind::VmcExtract: return "vmc";
    case ComponentKind::SeparationWall: return "wall";
    case ComponentKind::Glazing: return "glazing";
    case ComponentKind::LargeOpening: return "large_opening";
    case ComponentKind::SmallOpening: return "crack";
    case ComponentKind::Vent: return "vent";
    case ComponentKind::KnownFlow: return "known_flow";
    }
    return "?";
}

const char* simulationTypeName(SimulationType type) {
    switch (type) {
    case SimulationType::ThermalOnly: return "thermal";
    case SimulationType::ThermalAirflow: return "thermal_airflow";
    case SimulationType::AirflowOnly: return "airflow";
    case SimulationType::ThermalAirflowMoisture: return "thermal_airflow_moisture";
    }
    return "?";
}

const char* outputVariableName(OutputVariable var) {
    switch (var) {
    case OutputVariable::ZoneAirTemperature: return "air_temperature";
    case OutputVariable::SurfaceTemperatureInterior: return "surface_temperature_in";
    case OutputVariable::SurfaceTemperatureExterior: return "surface_temperature_out";
    case OutputVariable::SurfaceFlux: return "surface_flux";
    case OutputVariable::ZonePressure: return "pressure";
    case OutputVariable::LinkFlow: return "link_flow";
    case OutputVariable::ZoneHumidity: return "humidity";
    case OutputVariable::HvacPower: return "hvac_power";
    case OutputVariable::ComfortIndex: return "comfort";
    }
    return "?";
}

bool simulationUsesThermal(SimulationType type) { return type != SimulationType::AirflowOnly; }

bool simulationUsesAirflow(SimulationType type) { return type != SimulationType::ThermalOnly; }

bool simulationUsesMoisture(SimulationType type) {
    return type == SimulationType::ThermalAirflowMoisture;
}

bool isZoneComponentKind(ComponentKind kind) {
    switch (kind) {
    case ComponentKind::InternalWall:
    case ComponentKind::IdealAirHandler:
    case ComponentKind::InternalLoad:
    case ComponentKind::VmcExtract:
        return true;
    default:
        return false;
    }
}

bool isWallLike(ComponentKind kind) {
    return kind == ComponentKind::InternalWall || kind == ComponentKind::SeparationWall ||
           kind == ComponentKind::Glazing;
}

bool isFlowKind(ComponentKind kind) {
    switch (kind) {
    case ComponentKind::SmallOpening:
    case ComponentKind::Vent:
    case ComponentKind::LargeOpening:
    case ComponentKind::KnownFlow:
    case ComponentKind::VmcExtract:
        return true;
    default:
        return false;
    }
}

int findZone(const BuildingDescription& desc, const std::string& id) {
    for (size_t i = 0; i < desc.zones.size(); ++i)
        if (desc.zones[i].id == id) return static_cast<int>(i);
    return -1;
}

namespace {

bool inUnit(double v) { return v >= 0.0 && v <= 1.0; }

void checkSchedule(const Schedule& s, const std::string& entity, const char* what,
                   std::vector<Diagnostic>& out) {
    if (s.values.size() != 1 && s.values.size() != 24)
        out.push_back({entity, std::string(what) + ": schedule must have 1 or 24 values"});
    for (double v : s.values)
        if (!std::isfinite(v))
            out.push_back({entity, std::string(what) + ": non-finite schedule value"});
}

void checkSurface(const SurfaceProperties& s, const std::string& entity,
                  std::vector<Diagnostic>& out) {
    if (!inUnit(s.shortwaveAbsorptance))
        out.push_back({entity, "shortwave absorptance out of [0,1]"});
    if (!inUnit(s.longwaveEmissivity))
        out.push_back({entity, "longwave emissivity out of [0,1]"});
}

void checkComponent(const Component& c, bool inZone, std::vector<Diagnostic>& out) {
    const std::string& e = c.id;
    const bool kindIsZoneSide = isZoneComponentKind(c.kind);
    if (inZone && !kindIsZoneSide)
        out.push_back({e, std::string(kindName(c.kind)) + " not allowed in a zone"});
    if (!inZone && kindIsZoneSide)
        out.push_back({e, std::string(kindName(c.kind)) + " not allowed in an inter-ambiance"});

    switch (c.kind) {
    case ComponentKind::InternalWall:
    case ComponentKind::SeparationWall: {
        const auto* w = std::get_if<WallParams>(&c.params);
        if (!w) { out.push_back({e, "wall parameters missing"}); break; }
        if (c.geometry.area <= 0) out.push_back({e, "area must be > 0"});
        if (w->layers.empty()) out.push_back({e, "wall needs at least one layer"});
        for (const Layer& l : w->layers) {
            if (l.conductivity <= 0) out.push_back({e, "layer conductivity must be > 0"});
            if (l.density <= 0) out.push_back({e, "layer density must be > 0"});
            if (l.specificHeat <= 0) out.push_back({e, "layer specific heat must be > 0"});
            if (l.thickness <= 0) out.push_back({e, "layer thickness must be > 0"});
        }
        if (w->model.nodesPerLayer < 1) out.push_back({e, "nodes per layer must be >= 1"});
        if (c.kind == ComponentKind::InternalWall && w->groundContact)
            out.push_back({e, "ground contact not allowed on an internal wall"});
        if (w->film.convInterior < 0 || w->film.radInterior < 0 || w->film.convExterior < 0 ||
            w->film.radExterior < 0)
            out.push_back({e, "film coefficients must be >= 0"});
        checkSurface(w->surfaceInterior, e, out);
        checkSurface(w->surfaceExterior, e, out);
        break;
    }
    case ComponentKind::Glazing: {
        const auto* g = std::get_if<GlazingParams>(&c.params);
        if (!g) { out.push_back({e, "glazing parameters missing"}); break; }
        if (c.geometry.area <= 0) out.push_back({e, "area must be > 0"});
        if (g->uValue <= 0) out.push_back({e, "U-value must be > 0"});
        if (!inUnit(g->shortwaveTransmittance))
            out.push_back({e, "transmittance out of [0,1]"});
        break;
    }
    case ComponentKind::SmallOpening:
    case ComponentKind::Vent: {
        const auto* p = std::get_if<CrackParams>(&c.params);
        if (!p) { out.push_back({e, "crack parameters missing"}); break; }
        if (p->flowCoefficient <= 0) out.push_back({e, "flow coefficient K must be > 0"});
        if (p->flowExponent < 0.5 || p->flowExponent > 1.0)
            out.push_back({e, "n out of [0.5,1]"});
        break;
    }
    case ComponentKind::LargeOpening: {
        const auto* p = std::get_if<LargeOpeningParams>(&c.params);
        if (!p) { out.push_back({e, "opening parameters missing"}); break; }
        if (p->width <= 0) out.push_back({e, "width must be > 0"});
        if (p->height <= 0) out.push_back({e, "height must be > 0"});
        if (p->dischargeCoefficient <= 0 || p->dischargeCoefficient > 1)
            out.push_back({e, "discharge coefficient out of (0,1]"});
        break;
    }
    case ComponentKind::KnownFlow: {
        const auto* p = std::get_if<KnownFlowParams>(&c.params);
        if (!p) { out.push_back({e, "known-flow parameters missing"}); break; }
        checkSchedule(p->massFlow, e, "mass flow", out);
        break;
    }
    case ComponentKind::VmcExtract: {
        const auto* p = std::get_if<VmcParams>(&c.params);
        if (!p) { out.push_back({e, "vmc parameters missing"}); break; }
        checkSchedule(p->extractFlow, e, "extract flow", out);
        for (double v : p->extractFlow.values)
            if (v < 0) out.push_back({e, "extract flow must be >= 0"});
        break;
    }
    case ComponentKind::InternalLoad: {
        const auto* p = std::get_if<InternalLoadParams>(&c.params);
        if (!p) { out.push_back({e, "load parameters missing"}); break; }
        checkSchedule(p->power, e, "power", out);
        break;
    }
    case ComponentKind::IdealAirHandler: {
        const auto* p = std::get_if<IdealAirHandlerParams>(&c.params);
        if (!p) { out.push_back({e, "air handler parameters missing"}); break; }
        if (p->maxPower < 0) out.push_back({e, "max power must be >= 0"});
        if (!std::isfinite(p->setpoint)) out.push_back({e, "setpoint must be finite"});
        break;
    }
    }
}

bool variableNeedsZone(OutputVariable v) {
    switch (v) {
    case OutputVariable::ZoneAirTemperature:
    case OutputVariable::ZonePressure:
    case OutputVariable::ZoneHumidity:
    case OutputVariable::HvacPower:
    case OutputVariable::ComfortIndex:
        return true;
    default:
        return false;
    }
}

} // namespace

std::vector<Diagnostic> validate(const BuildingDescription& desc) {
    std::vector<Diagnostic> out;

    std::unordered_set<std::string> zoneIds;
    for (const Zone& z : desc.zones) {
        if (z.id.empty()) out.push_back({"zone", "zone id must not be empty"});
        if (z.id == kExteriorId) out.push_back({z.id, "zone id EXTERIOR is reserved"});
        if (!zoneIds.insert(z.id).second) out.push_back({z.id, "duplicate zone id"});
    }

    std::unordered_set<std::string> componentIds;
    auto checkUniqueComponentId = [&](const Component& c) {
        if (c.id.empty())
            out.push_back({c.id, "component id must not be empty"});
        else if (!componentIds.insert(c.id).second)
            out.push_back({c.id, "duplicate component id"});
    };

    for (const Zone& z : desc.zones) {
        if (z.airVolume <= 0) out.push_back({z.id, "air volume must be > 0"});
        if (z.buffer.enabled) {
            // mass 0 means "size from the air volume" and is fine
            if (z.buffer.mass < 0) out.push_back({z.id, "buffer mass must be >= 0"});
            if (z.buffer.exchangeCoefficient < 0)
                out.push_back({z.id, "buffer exchange coefficient must be >= 0"});
        }
        checkSchedule(z.internalMoistureGain, z.id, "moisture gain", out);
        int handlers = 0;
        for (const Component& c : z.components) {
            checkUniqueComponentId(c);
            checkComponent(c, true, out);
            if (c.kind == ComponentKind::IdealAirHandler) ++handlers;
        }
        if (handlers > 1) out.push_back({z.id, "at most one air handler per zone"});
    }

    std::unordered_set<std::string> iaIds;
    for (const InterAmbiance& ia : desc.interAmbiances) {
        if (!iaIds.insert(ia.id).second) out.push_back({ia.id, "duplicate inter-ambiance id"});
        if (ia.zoneA == ia.zoneB) out.push_back({ia.id, "self-coupling"});
        if (ia.zoneA == kExteriorId)
            out.push_back({ia.id, "zone A must be a real zone (put EXTERIOR on side B)"});
        else if (!zoneIds.count(ia.zoneA))
            out.push_back({ia.id, "unknown zone '" + ia.zoneA + "'"});
        if (ia.zoneB != kExteriorId && !zoneIds.count(ia.zoneB))
            out.push_back({ia.id, "unknown zone '" + ia.zoneB + "'"});
        for (const Component& c : ia.components) {
            checkUniqueComponentId(c);
            checkComponent(c, false, out);
            if (c.kind == ComponentKind::SeparationWall) {
                const auto* w = std::get_if<WallParams>(&c.params);
                if (w && w->groundContact && ia.zoneB != kExteriorId)
                    out.push_back({c.id, "ground-contact wall requires EXTERIOR on side B"});
                if (w && w->farSideTemperature && !std::isfinite(*w->farSideTemperature))
                    out.push_back({c.id, "far-side temperature must be finite"});
            }
        }
    }

    if (desc.coupling.maxCouplingIterations < 1)
        out.push_back({"coupling", "max coupling iterations must be >= 1"});
    if (desc.coupling.airTempTolerance <= 0)
        out.push_back({"coupling", "air temperature tolerance must be > 0"});
    if (desc.coupling.flowTolerance <= 0)
        out.push_back({"coupling", "flow tolerance must be > 0"});

    for (const CpSector& s : desc.cpTable) {
        if (!(s.fromDeg < s.toDeg) || s.fromDeg < 0 || s.toDeg > 360)
            out.push_back({"cp_table", "sector bounds must satisfy 0 <= from < to <= 360"});
        if (!std::isfinite(s.cp)) out.push_back({"cp_table", "cp must be finite"});
    }

    for (const OutputRequest& r : desc.outputs) {
        if (variableNeedsZone(r.variable)) {
            if (!zoneIds.count(r.entityId))
                out.push_back({r.entityId, "output references unknown zone"});
        } else {
            bool found = false;
            for (const Zone& z : desc.zones)
                for (const Component& c : z.components)
                    if (c.id == r.entityId) found = true;
            for (const InterAmbiance& ia : desc.interAmbiances)
                for (const Component& c : ia.components)
                    if (c.id == r.entityId) found = true;
            if (!found) out.push_back({r.entityId, "output references unknown component"});
        }
    }

    return out;
}

std::vector<ComponentRef> enumerateComponents(const BuildingDescription& desc, ComponentKind kind) {
    std::vector<ComponentRef> refs;
    for (size_t zi = 0; zi < desc.zones.size(); ++zi) {
        const Zone& z = desc.zones[zi];
        for (size_t ci = 0; ci < z.components.size(); ++ci)
            if (z.components[ci].kind == kind)
                refs.push_back({ParentKind::Zone, static_cast<int>(zi), static_cast<int>(ci),
                                &z.components[ci]});
    }
    for (size_t ii = 0; ii < desc.interAmbiances.size(); ++ii) {
        const InterAmbiance& ia = desc.interAmbiances[ii];
        for (size_t ci = 0; ci < ia.components.size(); ++ci)
            if (ia.components[ci].kind == kind)
                refs.push_back({ParentKind::InterAmbiance, static_cast<int>(ii),
                                static_cast<int>(ci), &ia.components[ci]});
    }
    return refs;
}

std::vector<ComponentRef> enumerateComponents(const BuildingDescription& desc,
                                              const InterAmbiance& ia, ComponentKind kind) {
    std::vector<ComponentRef> refs;
    for (size_t ii = 0; ii < desc.interAmbiances.size(); ++ii) {
        if (&desc.interAmbiances[ii] != &ia) continue;
        for (size_t ci = 0; ci < ia.components.size(); ++ci)
            if (ia.components[ci].kind == kind)
                refs.push_back({ParentKind::InterAmbiance, static_cast<int>(ii),
                                static_cast<int>(ci), &ia.components[ci]});
    }
    return refs;
}

} // namespace codasim
