#ifndef CODASIM_BUILDING_HPP
#define CODASIM_BUILDING_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "codasim/schedule.hpp"

// Static description of a building: zones, the separations between them
// (inter-ambiances), their components, and the per-entity model selectors.
// Immutable after validation; safe to share across concurrent simulations.

namespace codasim {

// Reserved pseudo-zone with states prescribed by the weather.
inline const std::string kExteriorId = "EXTERIOR";

enum class SimulationType {
    ThermalOnly,
    ThermalAirflow,
    AirflowOnly,
    ThermalAirflowMoisture,
};

enum class ConductionModel { R2C, FD1D };
enum class LongwaveInteriorModel { RadiantMeanNode, None };

// Per-wall choice of physical model.  Walls of the same building may carry
// different selectors.
struct ModelSelector {
    ConductionModel conduction = ConductionModel::R2C;
    int nodesPerLayer = 3; // FD1D only, >= 1
    LongwaveInteriorModel longwaveInterior = LongwaveInteriorModel::RadiantMeanNode;
    bool operator==(const ModelSelector&) const = default;
};

struct Layer {
    double conductivity = 0;  // W/(m K)
    double density = 0;       // kg/m^3
    double specificHeat = 0;  // J/(kg K)
    double thickness = 0;     // m
    bool operator==(const Layer&) const = default;
};

struct SurfaceProperties {
    double shortwaveAbsorptance = 0.6;
    double longwaveEmissivity = 0.9;
    bool operator==(const SurfaceProperties&) const = default;
};

// Linearized film coefficients, W/(m^2 K).  Overridable per wall.
struct FilmCoefficients {
    double convInterior = 3.0;
    double radInterior = 5.5;
    double convExterior = 17.0;
    double radExterior = 5.0;
    bool operator==(const FilmCoefficients&) const = default;
};

enum class ComponentKind {
    // zone components
    InternalWall,
    IdealAirHandler,
    InternalLoad,
    VmcExtract,
    // separation components
    SeparationWall,
    Glazing,
    LargeOpening,
    SmallOpening,
    Vent,
    KnownFlow,
};

struct WallParams {
    std::vector<Layer> layers; // inside out, first layer faces zoneA
    SurfaceProperties surfaceInterior;
    SurfaceProperties surfaceExterior;
    ModelSelector model;
    FilmCoefficients film;
    // Ground-contact walls face a fixed temperature instead of an ambiance.
    // Unset farSideTemperature means annual-mean outdoor dry-bulb,
    // resolved at run start.
    bool groundContact = false;
    std::optional<double> farSideTemperature;
    bool operator==(const WallParams&) const = default;
};

struct GlazingParams {
    double uValue = 3.0;               // W/(m^2 K), pane assembly only
    double shortwaveTransmittance = 0.8;
    FilmCoefficients film;
    bool operator==(const GlazingParams&) const = default;
};

struct IdealAirHandlerParams {
    double setpoint = 25.0; // degC
    double maxPower = 1e9;  // W, symmetric heat/cool limit
    bool operator==(const IdealAirHandlerParams&) const = default;
};

struct InternalLoadParams {
    Schedule power; // W, deposited on the zone air node
    bool operator==(const InternalLoadParams&) const = default;
};

struct VmcParams {
    Schedule extractFlow; // kg/s, >= 0
    bool operator==(const VmcParams&) const = default;
};

// Crack flow law mdot = K |dP|^n; Vent uses the same law with n fixed by
// the component datasheet (default 0.5).
struct CrackParams {
    double flowCoefficient = 0; // K, kg/(s Pa^n)
    double flowExponent = 0.65; // n, in [0.5, 1]
    bool operator==(const CrackParams&) const = default;
};

struct LargeOpeningParams {
    double width = 0;  // m
    double height = 0; // m
    double dischargeCoefficient = 0.42;
    bool operator==(const LargeOpeningParams&) const = default;
};

struct KnownFlowParams {
    Schedule massFlow; // kg/s, signed, positive zoneA -> zoneB
    bool operator==(const KnownFlowParams&) const = default;
};

struct Geometry {
    double area = 0;      // m^2
    double height = 0;    // m
    double azimuth = 0;   // deg from North, exterior normal
    double tilt = 90;     // deg from horizontal
    double elevation = 0; // m above ground, flow path or opening bottom
    bool operator==(const Geometry&) const = default;
};

using ComponentParams = std::variant<WallParams, GlazingParams, IdealAirHandlerParams,
                                     InternalLoadParams, VmcParams, CrackParams,
                                     LargeOpeningParams, KnownFlowParams>;

struct Component {
    std::string id;
    ComponentKind kind = ComponentKind::SeparationWall;
    Geometry geometry;
    ComponentParams params = WallParams{};
    bool operator==(const Component&) const = default;
};

// Lumped hygroscopic buffer, one per zone.
struct BufferConfig {
    bool enabled = true;
    double mass = 0;                  // kg of sorbing material
    double exchangeCoefficient = 1e-4; // kg/s between buffer and zone air
    bool operator==(const BufferConfig&) const = default;
};

// Default sizing: 10 kg of buffer per 50 m^3 of zone air.
inline double defaultBufferMass(double airVolume) { return airVolume / 50.0 * 10.0; }

struct Zone {
    std::string id;
    double airVolume = 0;      // m^3
    double referenceHeight = 0; // m, pressure reference node above ground
    Schedule internalMoistureGain; // kg/s
    BufferConfig buffer;
    std::vector<Component> components;
    bool operator==(const Zone&) const = default;
};

struct InterAmbiance {
    std::string id;
    std::string zoneA; // always a real zone; owns the wall meshes
    std::string zoneB; // zone id or kExteriorId
    std::vector<Component> components;
    bool operator==(const InterAmbiance&) const = default;
};

enum class CouplingMode { OneWay, Iterative };

struct CouplingOptions {
    CouplingMode thermalAirflowCoupling = CouplingMode::OneWay;
    int maxCouplingIterations = 10;
    double airTempTolerance = 0.05; // K
    double flowTolerance = 1e-6;    // kg/s
    bool operator==(const CouplingOptions&) const = default;
};

// Wind pressure coefficient for incidence angles [fromDeg, toDeg), angle
// measured between wind direction and facade normal, normalized to [0,360).
struct CpSector {
    double fromDeg = 0;
    double toDeg = 360;
    double cp = 0;
    bool operator==(const CpSector&) const = default;
};

struct Site {
    double latitude = 45.0;   // deg, north positive
    double longitude = 0.0;   // deg, east positive
    double meridian = 0.0;    // deg, time zone reference meridian
    double skyTempOffset = 6.0; // K below outdoor dry-bulb
    bool operator==(const Site&) const = default;
};

enum class OutputVariable {
    ZoneAirTemperature,
    SurfaceTemperatureInterior,
    SurfaceTemperatureExterior,
    SurfaceFlux,
    ZonePressure,
    LinkFlow,
    ZoneHumidity,
    HvacPower,
    ComfortIndex,
};

struct OutputRequest {
    std::string entityId; // zone or component id, depending on variable
    OutputVariable variable = OutputVariable::ZoneAirTemperature;
    bool operator==(const OutputRequest&) const = default;
};

struct BuildingDescription {
    std::string name;
    Site site;
    SimulationType simulationType = SimulationType::ThermalAirflow;
    CouplingOptions coupling;
    std::vector<CpSector> cpTable; // empty -> built-in default table
    std::vector<Zone> zones;
    std::vector<InterAmbiance> interAmbiances;
    std::vector<OutputRequest> outputs; // empty -> air temperature of every zone
    bool operator==(const BuildingDescription&) const = default;
};

// Air stream entering a zone, produced by the airflow network (or by
// schedules when no network is solved) and consumed by the thermal and
// moisture balances.  sourceZone -1 means outdoors.
struct IncomingFlow {
    int sourceZone = -1;
    double massFlow = 0; // kg/s, >= 0
};

// --------------------------------------------------------------------------

struct SourceLocation {
    int line = 0; // 1-based, 0 when not tied to a file
    int column = 0;
    bool operator==(const SourceLocation&) const = default;
};

struct Diagnostic {
    std::string entity;  // offending zone/component/inter-ambiance id
    std::string message; // violated rule
    SourceLocation location = {};
};

// Checks every structural invariant of the description.  Returns an empty
// list iff the description is well formed; diagnostics are data, never
// exceptions.
std::vector<Diagnostic> validate(const BuildingDescription& desc);

enum class ParentKind { Zone, InterAmbiance };

struct ComponentRef {
    ParentKind parentKind = ParentKind::Zone;
    int parentIndex = -1;
    int componentIndex = -1;
    const Component* component = nullptr;
};

// Components of a given kind in document order: zones first, then
// inter-ambiances, children in declaration order.
std::vector<ComponentRef> enumerateComponents(const BuildingDescription& desc, ComponentKind kind);

// Same, scoped to one inter-ambiance.
std::vector<ComponentRef> enumerateComponents(const BuildingDescription& desc,
                                              const InterAmbiance& ia, ComponentKind kind);

int findZone(const BuildingDescription& desc, const std::string& id);

const char* kindName(ComponentKind kind);
const char* simulationTypeName(SimulationType type);
const char* outputVariableName(OutputVariable var);

bool simulationUsesThermal(SimulationType type);
bool simulationUsesAirflow(SimulationType type);
bool simulationUsesMoisture(SimulationType type);

bool isZoneComponentKind(ComponentKind kind);
bool isWallLike(ComponentKind kind); // wall or glazing: contributes thermal nodes
bool isFlowKind(ComponentKind kind); // contributes an airflow link

} // namespace codasim

#endif
