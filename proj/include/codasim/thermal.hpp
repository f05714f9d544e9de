#ifndef CODASIM_THERMAL_HPP
#define CODASIM_THERMAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "codasim/building.hpp"
#include "codasim/solar.hpp"

// Nodal thermal network: per zone, one air node, an optional zero-capacitance
// radiant-mean node, and per-wall node chains (two-capacitance R2C or 1-D
// finite differences), linked by conduction, convection, linearized radiation
// and refreshed air-transport conductances.

namespace codasim {

enum class ThermalNodeKind { SurfaceInterior, SurfaceExterior, WallInterior, ZoneAir, RadiantMean };

struct ThermalNode {
    ThermalNodeKind kind = ThermalNodeKind::WallInterior;
    double capacitance = 0; // J/K, 0 allowed for radiant-mean and glazing nodes
    std::string label;
};

enum class ThermalLinkKind {
    Conduction,
    ConvectionInterior,
    ConvectionExterior,
    RadiationInterior,
    RadiationExterior,
    AirTransport,
};

enum class ThermalBoundaryKind {
    OutdoorAir,
    Sky,
    External, // frozen neighbor-zone quantity or fixed far-side temperature
};

struct ThermalBoundary {
    ThermalBoundaryKind kind = ThermalBoundaryKind::OutdoorAir;
    int slot = -1; // index into ZoneThermalSystem::externalSlots for External
};

// nodeA is always a mesh node; the other end is a node or a boundary.
// Node-node links enter the matrix symmetrically; node-boundary links add to
// the diagonal and inject g*T_boundary on the right-hand side (one-sided for
// AirTransport, which models incoming advection only).
struct ThermalLink {
    int nodeA = -1;
    bool toNode = true;
    int nodeB = -1;
    ThermalBoundary boundary;
    double conductance = 0; // W/K
    ThermalLinkKind kind = ThermalLinkKind::Conduction;
};

enum class SourceOrigin { ShortwaveInterior, ShortwaveExterior, InternalLoad, HvacIdeal };

struct SourceTerm {
    int node = -1;
    double flux = 0; // W
    SourceOrigin origin = SourceOrigin::InternalLoad;
};

// Per-component slice of the mesh, kept for outputs and selector-independence
// checks.
struct WallMesh {
    std::string componentId;
    int firstNode = -1;
    int nodeCount = 0;
    int interiorSurfaceNode = -1;
    int exteriorSurfaceNode = -1;
    int fluxNeighborNode = -1;  // node adjacent to the interior surface
    double fluxConductance = 0; // W/K of that first conduction link
    double area = 0;
};

struct ThermalBoundaryConditions {
    double outdoorTemp = 20.0; // degC
    double skyTemp = 14.0;     // degC
};

// dT/dt = A T + B u after eliminating algebraic (zero-capacitance) rows.
// Inputs u are (T_outdoor, T_sky, external slots..., one flux input per node).
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    std::vector<int> stateNodes;
    std::vector<std::string> inputNames;
};

struct ZoneThermalSystem {
    std::string zoneId;
    std::vector<ThermalNode> nodes;
    std::vector<ThermalLink> links; // structural prefix, then per-step air links
    int structuralLinkCount = 0;
    std::vector<SourceTerm> sources; // rebuilt every step
    std::vector<double> externalSlots;
    Eigen::VectorXd state; // temperatures, degC
    int airNode = -1;
    int radiantNode = -1;
    std::vector<WallMesh> walls;

    bool hasAirHandler = false;
    double hvacSetpoint = 0;
    double hvacMaxPower = 0;
    double hvacPower = 0; // result of the last advance, W (positive = heating)

    int wallCount() const { return static_cast<int>(walls.size()); }

    int addNode(ThermalNodeKind kind, double capacitance, std::string label);
    void addLink(int a, int b, double conductance, ThermalLinkKind kind);
    void addBoundaryLink(int a, ThermalBoundary boundary, double conductance, ThermalLinkKind kind);
    int addExternalSlot(double initial = 0);

    // Backward-Euler system M T_new = rhs with M = C/dt + G.
    // Throws SolveError when a row is entirely zero (isolated massless node).
    void assembleStep(double dt, const ThermalBoundaryConditions& bc, Eigen::MatrixXd& m,
                      Eigen::VectorXd& rhs) const;

    // One implicit step from the given previous state; applies the ideal air
    // handler clamp when present.  Updates state and hvacPower.
    void advance(double dt, const ThermalBoundaryConditions& bc, const Eigen::VectorXd& previous);

    // Residual of the radiant-mean balance at the current state, relative to
    // the total radiant conductance.  0 when the zone has no radiant node.
    double radiantResidualRelative(const ThermalBoundaryConditions& bc) const;

    StateSpace exportStateSpace() const;

    // Conducted flux through a wall's interior surface, W/m^2, positive into
    // the wall.
    double surfaceFlux(const WallMesh& wall) const;
};

struct EnergyAudit {
    double boundaryInflow = 0; // W through boundary links
    double sourceTotal = 0;    // W of sources incl. HVAC
    double storageRate = 0;    // W into capacitances
    double flowMagnitude = 0;  // sum of |flux| over links and sources
    double closure() const {
        return flowMagnitude > 0
                   ? std::abs(boundaryInflow + sourceTotal - storageRate) / flowMagnitude
                   : 0.0;
    }
};

// Whole-building thermal model: one ZoneThermalSystem per zone plus the
// frozen-boundary wiring between them.  Zones are re-solved in sweeps until
// interzone boundary temperatures settle.
class ThermalModel {
public:
    explicit ThermalModel(const BuildingDescription& desc);

    int zoneCount() const { return static_cast<int>(zones_.size()); }
    const ZoneThermalSystem& system(int zone) const { return zones_[zone].sys; }
    ZoneThermalSystem& system(int zone) { return zones_[zone].sys; }

    // Fallback far-side temperature for ground-contact walls that did not
    // specify one (annual-mean outdoor dry-bulb).
    void setDefaultFarSideTemperature(double tempC);

    void setBoundary(const ThermalBoundaryConditions& bc) { bc_ = bc; }
    void setSolar(const SunPosition& sun, double directNormal, double diffuseHorizontal);
    void setZoneLoads(const std::vector<double>& wattsPerZone);
    void setIncomingFlows(const std::vector<std::vector<IncomingFlow>>& flowsPerZone);

    // Multizone implicit step: iterative zone-by-zone sweeps with neighbor
    // temperatures frozen within a sweep, until the largest frozen-boundary
    // change drops below sweepTolerance (K) or maxSweeps is reached.
    void advanceAll(double dt);

    std::vector<Eigen::VectorXd> saveState() const;
    void restoreState(const std::vector<Eigen::VectorXd>& snapshot);
    void setUniformTemperature(double tempC);

    double zoneAirTemperature(int zone) const;
    double zoneRadiantTemperature(int zone) const; // air temp when no radiant node
    double hvacPower(int zone) const { return zones_[zone].sys.hvacPower; }

    const EnergyAudit& audit(int zone) const { return zones_[zone].audit; }
    EnergyAudit buildingAudit() const;

    double maxRadiantResidualRelative() const { return maxRadiantResidual_; }
    long solveCount() const { return solveCount_; }
    int lastSweepCount() const { return lastSweeps_; }
    // Steps where the interzone sweep ran out of passes, and the largest
    // boundary-temperature change still pending when that happened.
    long sweepCapHits() const { return sweepCapHits_; }
    double worstSweepResidual() const { return worstSweepResidual_; }

    struct ComponentLocation {
        int zone = -1;
        int wallIndex = -1;
    };
    // Wall-like components only; throws SimulationError for unknown ids.
    const ComponentLocation& locate(const std::string& componentId) const;
    double surfaceTemperature(const ComponentLocation& loc, bool interior) const;
    double surfaceFlux(const ComponentLocation& loc) const;

    double sweepTolerance = 1e-4; // K
    int maxSweeps = 20;

private:
    struct SlotBinding {
        int targetZone = -1;
        int targetSlot = -1;
        bool constant = false;
        int sourceZone = -1;
        int sourceNode = -1;
        double value = 0; // constant bindings
        bool needsFarSideDefault = false;
    };

    struct Face {
        int zone = -1; // system holding the node
        int node = -1;
        std::string componentId;
        int facingZone = -1; // -1 = exterior
        double area = 0;
        double absorptance = 0;
        double azimuth = 0;
        double tilt = 90;
        double filmConv = 3.0;
        double filmRad = 5.5;
        bool radiantParticipates = true;
        bool exteriorFace = false;
        bool glazing = false;
        double transmittance = 0;
        int transmitZone = -1; // zone fed by this glazing's transmitted solar
    };

    struct ZoneRuntime {
        ZoneThermalSystem sys;
        Eigen::VectorXd previous;
        double pendingLoad = 0;
        std::vector<SourceTerm> solarSources;
        std::vector<IncomingFlow> incomingFlows;
        EnergyAudit audit;
    };

    void meshZone(const BuildingDescription& desc, int zoneIndex,
                  const std::vector<bool>& zoneHasRadiant);
    void wireInterZone(const BuildingDescription& desc, const std::vector<bool>& zoneHasRadiant);
    int ensureAirSlot(int targetZone, int sourceZone);
    double refreshSlots();
    void computeAudit(ZoneRuntime& z, double dt);

    std::vector<ZoneRuntime> zones_;
    std::vector<SlotBinding> bindings_;
    std::vector<Face> faces_;
    std::vector<std::unordered_map<int, int>> airSlotBySource_; // per zone: source zone -> slot
    std::unordered_map<std::string, ComponentLocation> componentIndex_;
    ThermalBoundaryConditions bc_;
    double maxRadiantResidual_ = 0;
    long solveCount_ = 0;
    int lastSweeps_ = 0;
    long sweepCapHits_ = 0;
    double worstSweepResidual_ = 0;
};

} // namespace codasim

#endif
