#include "codasim/moisture.hpp"

#include <cmath>

#include "codasim/errors.hpp"
#include "codasim/physics.hpp"

namespace codasim {

MoistureModel::MoistureModel(const BuildingDescription& desc) {
    const auto issues = validate(desc);
    if (!issues.empty())
        throw SimulationError("invalid building description: " + issues.front().entity + ": " +
                              issues.front().message);

    int next = static_cast<int>(desc.zones.size());
    for (const Zone& z : desc.zones) {
        zoneIds_.push_back(z.id);
        airMass_.push_back(kRefAirDensity * z.airVolume);
        gainSchedule_.push_back(z.internalMoistureGain);
        if (z.buffer.enabled) {
            const double mass = z.buffer.mass > 0 ? z.buffer.mass : defaultBufferMass(z.airVolume);
            bufferIndex_.push_back(next++);
            bufferMass_.push_back(mass);
            bufferBeta_.push_back(z.buffer.exchangeCoefficient);
        } else {
            bufferIndex_.push_back(-1);
            bufferMass_.push_back(0);
            bufferBeta_.push_back(0);
        }
    }
    const double r0 = humidityFromRelative(50.0, 20.0);
    state_ = Eigen::VectorXd::Constant(next, r0);
    flows_.resize(airMass_.size());
    gainNow_.assign(airMass_.size(), 0.0);
    zoneTemp_.assign(airMass_.size(), 20.0);
    saturated_.assign(airMass_.size(), false);
    exteriorHumidity_ = r0;
}

void MoistureModel::setTime(TimePoint t) {
    for (size_t k = 0; k < gainSchedule_.size(); ++k) gainNow_[k] = gainSchedule_[k].at(t);
}

void MoistureModel::setIncomingFlows(const std::vector<std::vector<IncomingFlow>>& flowsPerZone) {
    for (size_t k = 0; k < flows_.size(); ++k)
        flows_[k] = k < flowsPerZone.size() ? flowsPerZone[k] : std::vector<IncomingFlow>{};
}

void MoistureModel::setZoneTemperatures(const std::vector<double>& tempC) {
    for (size_t k = 0; k < zoneTemp_.size(); ++k)
        zoneTemp_[k] = k < tempC.size() ? tempC[k] : 20.0;
}

void MoistureModel::assembleStep(double dt, Eigen::MatrixXd& m, Eigen::VectorXd& rhs) const {
    if (dt <= 0) throw SimulationError("moisture step: timestep must be positive");
    const int n = stateSize();
    m.setZero(n, n);
    rhs.setZero(n);

    for (int k = 0; k < zoneCount(); ++k) {
        const double c = airMass_[static_cast<size_t>(k)] / dt;
        m(k, k) += c;
        rhs(k) += c * state_(k);
        for (const IncomingFlow& f : flows_[static_cast<size_t>(k)]) {
            if (f.massFlow <= 0) continue;
            m(k, k) += f.massFlow;
            if (f.sourceZone < 0) rhs(k) += f.massFlow * exteriorHumidity_;
            else m(k, f.sourceZone) -= f.massFlow;
        }
        rhs(k) += gainNow_[static_cast<size_t>(k)];
        const int b = bufferIndex_[static_cast<size_t>(k)];
        if (b >= 0) {
            const double beta = bufferBeta_[static_cast<size_t>(k)];
            const double cb = bufferMass_[static_cast<size_t>(k)] / dt;
            m(k, k) += beta;
            m(k, b) -= beta;
            m(b, b) += cb + beta;
            m(b, k) -= beta;
            rhs(b) += cb * state_(b);
        }
    }
}

void MoistureModel::advance(double dt) {
    Eigen::MatrixXd m;
    Eigen::VectorXd rhs;
    assembleStep(dt, m, rhs);
    state_ = m.partialPivLu().solve(rhs);
    if (!state_.allFinite())
        throw SolveError("moisture solve produced non-finite humidity", "building");
    for (int k = 0; k < zoneCount(); ++k)
        saturated_[static_cast<size_t>(k)] =
            state_(k) > saturationHumidity(zoneTemp_[static_cast<size_t>(k)]);
}

double MoistureModel::bufferHumidity(int zone) const {
    const int b = bufferIndex_[static_cast<size_t>(zone)];
    if (b < 0)
        throw SimulationError("zone '" + zoneIds_[static_cast<size_t>(zone)] + "' has no buffer");
    return state_(b);
}

void MoistureModel::setBufferHumidity(int zone, double humidityRatio) {
    const int b = bufferIndex_[static_cast<size_t>(zone)];
    if (b < 0)
        throw SimulationError("zone '" + zoneIds_[static_cast<size_t>(zone)] + "' has no buffer");
    state_(b) = humidityRatio;
}

double MoistureModel::totalWaterMass() const {
    double total = 0;
    for (int k = 0; k < zoneCount(); ++k) {
        total += airMass_[static_cast<size_t>(k)] * state_(k);
        const int b = bufferIndex_[static_cast<size_t>(k)];
        if (b >= 0) total += bufferMass_[static_cast<size_t>(k)] * state_(b);
    }
    return total;
}

bool MoistureModel::anySaturated() const {
    for (bool s : saturated_)
        if (s) return true;
    return false;
}

double MoistureModel::bufferTimeConstant(int zone) const {
    const int b = bufferIndex_[static_cast<size_t>(zone)];
    if (b < 0)
        throw SimulationError("zone '" + zoneIds_[static_cast<size_t>(zone)] + "' has no buffer");
    const double ma = airMass_[static_cast<size_t>(zone)];
    const double mb = bufferMass_[static_cast<size_t>(zone)];
    const double beta = bufferBeta_[static_cast<size_t>(zone)];
    if (beta <= 0) throw SimulationError("buffer exchange coefficient is zero");
    return ma * mb / (beta * (ma + mb));
}

} // namespace codasim
