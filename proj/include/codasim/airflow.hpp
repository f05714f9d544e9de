#ifndef CODASIM_AIRFLOW_HPP
#define CODASIM_AIRFLOW_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "codasim/building.hpp"
#include "codasim/timeutil.hpp"

// Interzone pressure network.  Zone pressures (at each zone's reference
// height) are the unknowns; cracks, vents, large openings and scheduled
// flows connect them to each other and to the exterior, which carries
// stack and wind pressure.  Solved by under-relaxed Newton iterations with
// a numerical Jacobian, falling back to zone-by-zone bisection passes when
// the iteration diverges.

namespace codasim {

// mdot = sign(dp) K |dp|^n, kg/s.
double crackMassFlow(double coefficient, double exponent, double dp);

// Facade pressure 0.5 rho Cp V^2; Cp from the sector table by the angle
// between wind direction and facade normal.  Throws SimulationError when no
// sector covers the angle.
double windPressure(const std::vector<CpSector>& table, double facadeAzimuthDeg,
                    double windDirectionDeg, double windSpeed, double airDensity);

const std::vector<CpSector>& defaultCpTable();

// Bidirectional flow through a vertical rectangular opening with a linear
// pressure difference dp(z) = dpBottom + dpSlope z over 0 <= z <= height.
// Each direction integrates Cd W sqrt(2 rho_upwind |dp|) over its side of
// the neutral plane.  Both results are >= 0.
struct OpeningFlow {
    double aToB = 0; // kg/s
    double bToA = 0;
};
OpeningFlow largeOpeningFlow(double width, double height, double dischargeCoefficient,
                             double dpBottom, double dpSlope, double densityA, double densityB);

struct AirflowSolverConfig {
    double relaxation = 0.75;       // Newton under-relaxation factor
    int maxIterations = 100;
    double residualTolerance = 1e-8; // kg/s, max-norm over zones
    int picardRestarts = 3;          // bisection fallbacks before giving up
    double jacobianProbe = 1e-4;     // Pa, forward-difference step
};

struct AirflowSolveStats {
    int iterations = 0;
    int restarts = 0;
    double finalResidual = 0;
};

struct AirflowConditions {
    double outdoorTemp = 20;     // degC
    double windSpeed = 0;        // m/s
    double windDirection = 0;    // deg, direction the wind comes from
    std::vector<double> zoneTemps; // degC, defaults to 20 when shorter
};

// One flow path of the network.  zone index -1 stands for the exterior.
struct FlowLink {
    std::string componentId;
    ComponentKind kind = ComponentKind::SmallOpening;
    int zoneA = -1;
    int zoneB = -1;
    double elevation = 0; // m above ground: path height, or opening bottom
    double azimuth = 0;   // deg, facade normal for exterior links
    double coefficient = 0;
    double exponent = 0.65;
    double width = 0;
    double height = 0;
    double dischargeCoefficient = 0.42;
    Schedule knownFlow;
    bool pressureDependent = true;

    double windPressureNow = 0; // cached per setConditions
    double knownValueNow = 0;   // cached per setTime
    double flowAtoB = 0;        // last solution, kg/s, >= 0
    double flowBtoA = 0;
    double netFlow() const { return flowAtoB - flowBtoA; }
};

class AirflowModel {
public:
    explicit AirflowModel(const BuildingDescription& desc);

    int zoneCount() const { return static_cast<int>(zoneIds_.size()); }
    int linkCount() const { return static_cast<int>(links_.size()); }
    const FlowLink& link(int i) const { return links_[static_cast<size_t>(i)]; }

    // Resolves schedule-driven flows (mechanical extracts, known flows).
    void setTime(TimePoint t);

    // Temperatures drive densities and stack pressure; wind drives facade
    // pressures.  Throws when the Cp table leaves a facade angle uncovered.
    void setConditions(const AirflowConditions& c);

    // Mass balance defect per zone (inflow positive), kg/s, at the given
    // zone pressures.  Pure: does not touch the stored solution.
    Eigen::VectorXd residuals(const Eigen::VectorXd& pressures) const;

    // Newton with under-relaxation; on sustained divergence, up to
    // picardRestarts rounds of zone-wise bisection before resuming.  Throws
    // ConvergenceError when the budget is exhausted and SimulationError when
    // a zone has no pressure-dependent path to the exterior.
    AirflowSolveStats solvePressures(const AirflowSolverConfig& cfg = {});

    const Eigen::VectorXd& pressures() const { return pressures_; }
    double zonePressure(int zone) const { return pressures_(zone); }
    void resetPressures() { pressures_.setZero(); }

    // Signed net flow of a component, positive zone A -> zone B.
    double linkFlow(const std::string& componentId) const;

    // Streams entering each zone, for the thermal air-transport links and
    // the moisture balance.  Large openings contribute both directions.
    std::vector<std::vector<IncomingFlow>> incomingFlowsByZone() const;

    double vmcExtract(int zone) const { return vmcExtract_[static_cast<size_t>(zone)]; }
    double zoneDensity(int zone) const { return rhoZone_[static_cast<size_t>(zone)]; }

private:
    struct LinkFlows {
        double aToB = 0;
        double bToA = 0;
    };
    LinkFlows evalLink(const FlowLink& l, const Eigen::VectorXd& p) const;
    double nodePressureAt(const Eigen::VectorXd& p, int zone, double z) const; // no wind term
    void checkConnectivity() const;
    void bisectionPass(Eigen::VectorXd& p) const;

    std::vector<std::string> zoneIds_;
    std::vector<double> refHeight_;
    std::vector<FlowLink> links_;
    struct VmcEntry {
        int zone = -1;
        Schedule extract;
    };
    std::vector<VmcEntry> vmcEntries_;
    std::vector<CpSector> cpTable_;

    std::vector<double> zoneTemp_;
    std::vector<double> rhoZone_;
    double rhoOut_ = 1.204;
    std::vector<double> vmcExtract_;
    Eigen::VectorXd pressures_;
};

} // namespace codasim

#endif
