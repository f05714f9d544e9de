#ifndef CODASIM_MOISTURE_HPP
#define CODASIM_MOISTURE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "codasim/building.hpp"
#include "codasim/timeutil.hpp"

// Zone humidity-ratio balance.  One state per zone air volume plus one per
// enabled hygroscopic buffer; air streams advect moisture between zones and
// from outdoors, scheduled gains inject it, buffers exchange with their zone
// through a constant mass-transfer coefficient.  The implicit step conserves
// water exactly when the network is closed.

namespace codasim {

class MoistureModel {
public:
    explicit MoistureModel(const BuildingDescription& desc);

    int zoneCount() const { return static_cast<int>(airMass_.size()); }
    int stateSize() const { return static_cast<int>(state_.size()); }
    bool zoneBuffered(int zone) const { return bufferIndex_[static_cast<size_t>(zone)] >= 0; }

    // Resolves the per-zone moisture-gain schedules.
    void setTime(TimePoint t);
    // Streams entering each zone; interzone entries advect the source zone's
    // humidity, outdoor entries advect the exterior humidity.
    void setIncomingFlows(const std::vector<std::vector<IncomingFlow>>& flowsPerZone);
    void setExteriorHumidity(double humidityRatio) { exteriorHumidity_ = humidityRatio; }
    // Used only for the saturation diagnostic.
    void setZoneTemperatures(const std::vector<double>& tempC);

    // Backward-Euler system (C/dt + G) r_new = C/dt r_old + b, exposed for
    // inspection; advance() solves it and updates the state.
    void assembleStep(double dt, Eigen::MatrixXd& m, Eigen::VectorXd& rhs) const;
    void advance(double dt);

    double zoneHumidity(int zone) const { return state_(zone); }
    double bufferHumidity(int zone) const; // throws for unbuffered zones
    void setUniformHumidity(double humidityRatio) { state_.setConstant(humidityRatio); }
    void setZoneHumidity(int zone, double humidityRatio) { state_(zone) = humidityRatio; }
    void setBufferHumidity(int zone, double humidityRatio); // throws for unbuffered zones
    const Eigen::VectorXd& state() const { return state_; }

    // Total water content, kg: air mass and buffer mass weighted humidity.
    double totalWaterMass() const;

    // r exceeded saturation at the zone temperature after the last advance.
    // Diagnostic only; the state is never clipped.
    const std::vector<bool>& saturatedZones() const { return saturated_; }
    bool anySaturated() const;

    // Relaxation time of the zone-buffer pair when isolated:
    // tau = (m_air m_buf) / (beta (m_air + m_buf)).
    double bufferTimeConstant(int zone) const;

private:
    std::vector<double> airMass_;   // kg dry air per zone
    std::vector<int> bufferIndex_;  // state index of the zone's buffer, -1 if none
    std::vector<double> bufferMass_;
    std::vector<double> bufferBeta_;
    std::vector<Schedule> gainSchedule_;
    std::vector<std::string> zoneIds_;

    std::vector<std::vector<IncomingFlow>> flows_;
    std::vector<double> gainNow_;
    std::vector<double> zoneTemp_;
    double exteriorHumidity_ = 0.007;

    Eigen::VectorXd state_; // zones first, then buffers
    std::vector<bool> saturated_;
};

} // namespace codasim

#endif
