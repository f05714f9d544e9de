#include "codasim/airflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "codasim/errors.hpp"
#include "codasim/log.hpp"
#include "codasim/physics.hpp"

namespace codasim {

double crackMassFlow(double coefficient, double exponent, double dp) {
    if (dp == 0) return 0;
    const double mag = coefficient * std::pow(std::abs(dp), exponent);
    return dp > 0 ? mag : -mag;
}

const std::vector<CpSector>& defaultCpTable() {
    static const std::vector<CpSector> table = {
        {0, 45, 0.6}, {45, 135, -0.65}, {135, 225, -0.3}, {225, 315, -0.65}, {315, 360, 0.6},
    };
    return table;
}

double windPressure(const std::vector<CpSector>& table, double facadeAzimuthDeg,
                    double windDirectionDeg, double windSpeed, double airDensity) {
    double angle = std::fmod(windDirectionDeg - facadeAzimuthDeg, 360.0);
    if (angle < 0) angle += 360.0;
    for (const CpSector& s : table) {
        if (angle >= s.fromDeg && angle < s.toDeg)
            return 0.5 * airDensity * s.cp * windSpeed * windSpeed;
    }
    throw SimulationError("cp table has no sector covering incidence angle " +
                          std::to_string(angle) + " deg");
}

OpeningFlow largeOpeningFlow(double width, double height, double dischargeCoefficient,
                             double dpBottom, double dpSlope, double densityA, double densityB) {
    OpeningFlow out;
    const double cw = dischargeCoefficient * width;
    const double dpTop = dpBottom + dpSlope * height;

    // Near-uniform pressure difference: the 3/2-power antiderivative would
    // cancel catastrophically, and the flow is one-way anyway.
    if (std::abs(dpSlope) * height < 1e-9 * std::max(std::abs(dpBottom), std::abs(dpTop))) {
        const double dpMid = dpBottom + dpSlope * height * 0.5;
        // A sliver of linearity around zero keeps the slope finite there.
        // Without it, the zero-flow root of an opening between equal-density
        // zones is unreachable in double precision: one ulp of zone pressure
        // already moves the flow by more than the solver tolerance.
        constexpr double linearBand = 1e-10; // Pa
        if (std::abs(dpMid) < linearBand) {
            const double rho = dpMid > 0 ? densityA : densityB;
            const double q =
                cw * std::sqrt(2 * rho * linearBand) * height * (std::abs(dpMid) / linearBand);
            if (dpMid > 0) out.aToB = q;
            else out.bToA = q;
            return out;
        }
        if (dpMid > 0) out.aToB = cw * std::sqrt(2 * densityA * dpMid) * height;
        else if (dpMid < 0) out.bToA = cw * std::sqrt(2 * densityB * (-dpMid)) * height;
        return out;
    }

    // integral of sqrt(|dp|) over a sign-constant span, via the exact
    // antiderivative (2/3s) dp^{3/2}
    auto span = [&](double z1, double z2, double sign) {
        const double a = sign * (dpBottom + dpSlope * z1);
        const double b = sign * (dpBottom + dpSlope * z2);
        const double ia = std::pow(std::max(a, 0.0), 1.5);
        const double ib = std::pow(std::max(b, 0.0), 1.5);
        return std::abs(ib - ia) * (2.0 / 3.0) / std::abs(dpSlope);
    };

    double cuts[3] = {0, height, height};
    const double zn = -dpBottom / dpSlope; // neutral plane
    if (zn > 0 && zn < height) {
        cuts[1] = zn;
    }
    for (int i = 0; i < 2; ++i) {
        const double z1 = cuts[i];
        const double z2 = cuts[i + 1];
        if (z2 <= z1) continue;
        const double dpMid = dpBottom + dpSlope * 0.5 * (z1 + z2);
        if (dpMid > 0) out.aToB += cw * std::sqrt(2 * densityA) * span(z1, z2, 1.0);
        else if (dpMid < 0) out.bToA += cw * std::sqrt(2 * densityB) * span(z1, z2, -1.0);
    }
    return out;
}

// ---- model construction --------------------------------------------------

AirflowModel::AirflowModel(const BuildingDescription& desc) {
    const auto issues = validate(desc);
    if (!issues.empty())
        throw SimulationError("invalid building description: " + issues.front().entity + ": " +
                              issues.front().message);

    for (const Zone& z : desc.zones) {
        zoneIds_.push_back(z.id);
        refHeight_.push_back(z.referenceHeight);
        for (const Component& c : z.components) {
            if (c.kind != ComponentKind::VmcExtract) continue;
            VmcEntry e;
            e.zone = static_cast<int>(zoneIds_.size()) - 1;
            e.extract = std::get<VmcParams>(c.params).extractFlow;
            vmcEntries_.push_back(std::move(e));
        }
    }

    for (const InterAmbiance& ia : desc.interAmbiances) {
        const int a = findZone(desc, ia.zoneA);
        const int b = findZone(desc, ia.zoneB); // -1 for EXTERIOR
        for (const Component& c : ia.components) {
            if (!isFlowKind(c.kind)) continue;
            FlowLink l;
            l.componentId = c.id;
            l.kind = c.kind;
            l.zoneA = a;
            l.zoneB = b;
            l.elevation = c.geometry.elevation;
            l.azimuth = c.geometry.azimuth;
            switch (c.kind) {
            case ComponentKind::SmallOpening:
            case ComponentKind::Vent: {
                const CrackParams& p = std::get<CrackParams>(c.params);
                l.coefficient = p.flowCoefficient;
                l.exponent = p.flowExponent;
                break;
            }
            case ComponentKind::LargeOpening: {
                const LargeOpeningParams& p = std::get<LargeOpeningParams>(c.params);
                l.width = p.width;
                l.height = p.height;
                l.dischargeCoefficient = p.dischargeCoefficient;
                break;
            }
            case ComponentKind::KnownFlow: {
                l.knownFlow = std::get<KnownFlowParams>(c.params).massFlow;
                l.pressureDependent = false;
                break;
            }
            default:
                break;
            }
            links_.push_back(std::move(l));
        }
    }

    cpTable_ = desc.cpTable.empty() ? defaultCpTable() : desc.cpTable;
    zoneTemp_.assign(zoneIds_.size(), 20.0);
    rhoZone_.assign(zoneIds_.size(), airDensity(20.0));
    vmcExtract_.assign(zoneIds_.size(), 0.0);
    pressures_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(zoneIds_.size()));
}

void AirflowModel::setTime(TimePoint t) {
    std::fill(vmcExtract_.begin(), vmcExtract_.end(), 0.0);
    for (const VmcEntry& e : vmcEntries_)
        vmcExtract_[static_cast<size_t>(e.zone)] += e.extract.at(t);
    for (FlowLink& l : links_)
        if (l.kind == ComponentKind::KnownFlow) l.knownValueNow = l.knownFlow.at(t);
}

void AirflowModel::setConditions(const AirflowConditions& c) {
    for (size_t k = 0; k < zoneTemp_.size(); ++k) {
        zoneTemp_[k] = k < c.zoneTemps.size() ? c.zoneTemps[k] : 20.0;
        rhoZone_[k] = airDensity(zoneTemp_[k]);
    }
    rhoOut_ = airDensity(c.outdoorTemp);
    for (FlowLink& l : links_) {
        l.windPressureNow = 0;
        if (l.zoneB >= 0 || !l.pressureDependent) continue;
        if (c.windSpeed == 0) continue;
        l.windPressureNow =
            windPressure(cpTable_, l.azimuth, c.windDirection, c.windSpeed, rhoOut_);
    }
}

// ---- evaluation ----------------------------------------------------------

double AirflowModel::nodePressureAt(const Eigen::VectorXd& p, int zone, double z) const {
    if (zone < 0) return -rhoOut_ * kGravity * z;
    return p(zone) - rhoZone_[static_cast<size_t>(zone)] * kGravity *
                         (z - refHeight_[static_cast<size_t>(zone)]);
}

AirflowModel::LinkFlows AirflowModel::evalLink(const FlowLink& l, const Eigen::VectorXd& p) const {
    LinkFlows f;
    switch (l.kind) {
    case ComponentKind::SmallOpening:
    case ComponentKind::Vent: {
        const double pa = nodePressureAt(p, l.zoneA, l.elevation);
        const double pb = nodePressureAt(p, l.zoneB, l.elevation) +
                          (l.zoneB < 0 ? l.windPressureNow : 0.0);
        const double m = crackMassFlow(l.coefficient, l.exponent, pa - pb);
        if (m >= 0) f.aToB = m;
        else f.bToA = -m;
        break;
    }
    case ComponentKind::LargeOpening: {
        const double rhoA = rhoZone_[static_cast<size_t>(l.zoneA)];
        const double rhoB = l.zoneB < 0 ? rhoOut_ : rhoZone_[static_cast<size_t>(l.zoneB)];
        const double pa = nodePressureAt(p, l.zoneA, l.elevation);
        const double pb = nodePressureAt(p, l.zoneB, l.elevation) +
                          (l.zoneB < 0 ? l.windPressureNow : 0.0);
        const double slope = kGravity * (rhoB - rhoA); // d(pa - pb)/dz
        const OpeningFlow of = largeOpeningFlow(l.width, l.height, l.dischargeCoefficient,
                                                pa - pb, slope, rhoA, rhoB);
        f.aToB = of.aToB;
        f.bToA = of.bToA;
        break;
    }
    case ComponentKind::KnownFlow: {
        if (l.knownValueNow >= 0) f.aToB = l.knownValueNow;
        else f.bToA = -l.knownValueNow;
        break;
    }
    default:
        break;
    }
    return f;
}

Eigen::VectorXd AirflowModel::residuals(const Eigen::VectorXd& pressures) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(zoneIds_.size()));
    for (const FlowLink& l : links_) {
        const LinkFlows f = evalLink(l, pressures);
        const double net = f.aToB - f.bToA;
        if (l.zoneA >= 0) r(l.zoneA) -= net;
        if (l.zoneB >= 0) r(l.zoneB) += net;
    }
    for (size_t k = 0; k < vmcExtract_.size(); ++k)
        r(static_cast<Eigen::Index>(k)) -= vmcExtract_[k];
    return r;
}

// ---- connectivity guard --------------------------------------------------

namespace {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};
} // namespace

void AirflowModel::checkConnectivity() const {
    const int n = zoneCount();
    if (n == 0) return;
    UnionFind uf(n + 1); // last node is the exterior
    const int ext = n;
    for (const FlowLink& l : links_) {
        if (!l.pressureDependent) continue;
        uf.unite(l.zoneA, l.zoneB < 0 ? ext : l.zoneB);
    }
    const int extRoot = uf.find(ext);
    for (int k = 0; k < n; ++k) {
        if (uf.find(k) != extRoot)
            throw SimulationError("zone '" + zoneIds_[static_cast<size_t>(k)] +
                                  "' has no pressure-dependent path to the exterior; "
                                  "its pressure is undetermined");
    }
}

// ---- solver --------------------------------------------------------------

void AirflowModel::bisectionPass(Eigen::VectorXd& p) const {
    const int n = zoneCount();
    Eigen::VectorXd q = p;
    for (int k = 0; k < n; ++k) {
        // Zone residual is strictly decreasing in the zone's own pressure
        // (raising it pushes more air out), so bisection is safe.
        auto fk = [&](double x) {
            q(k) = x;
            const double v = residuals(q)(k);
            return v;
        };
        double lo = p(k) - 1;
        double hi = p(k) + 1;
        double step = 1;
        while (fk(lo) < 0 && step < 1e6) {
            step *= 2;
            lo -= step;
        }
        step = 1;
        while (fk(hi) > 0 && step < 1e6) {
            step *= 2;
            hi += step;
        }
        if (fk(lo) < 0 || fk(hi) > 0) {
            q(k) = p(k);
            continue; // no bracket; leave this zone to the Newton phase
        }
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (fk(mid) > 0) lo = mid;
            else hi = mid;
        }
        p(k) = 0.5 * (lo + hi);
        q(k) = p(k);
    }
}

AirflowSolveStats AirflowModel::solvePressures(const AirflowSolverConfig& cfg) {
    checkConnectivity();
    const int n = zoneCount();
    Eigen::VectorXd p = pressures_;

    AirflowSolveStats stats;
    double prevNorm = std::numeric_limits<double>::infinity();
    double mark = std::numeric_limits<double>::infinity(); // last halved residual
    int grow = 0;
    int stall = 0;
    double norm = 0;

    for (int iter = 0; iter < cfg.maxIterations; ++iter) {
        const Eigen::VectorXd r = residuals(p);
        norm = n > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
        if (norm < cfg.residualTolerance) {
            pressures_ = p;
            for (FlowLink& l : links_) {
                const LinkFlows f = evalLink(l, p);
                l.flowAtoB = f.aToB;
                l.flowBtoA = f.bToA;
            }
            stats.iterations = iter;
            stats.finalResidual = norm;
            return stats;
        }

        bool needRestart = false;
        if (norm > prevNorm) {
            if (++grow >= 3) needRestart = true;
        } else {
            grow = 0;
        }
        // A crack carrying zero flow at the solution has an infinite-slope
        // residual there; Newton orbits such a root without ever diverging.
        // Treat failure to halve the residual within a few iterations like
        // divergence so the bisection fallback can finish the job.
        if (norm < 0.5 * mark) {
            mark = norm;
            stall = 0;
        } else if (++stall >= 8) {
            needRestart = true;
            stall = 0;
        }

        Eigen::VectorXd step;
        if (!needRestart) {
            Eigen::MatrixXd jac(n, n);
            for (int j = 0; j < n; ++j) {
                Eigen::VectorXd pp = p;
                pp(j) += cfg.jacobianProbe;
                jac.col(j) = (residuals(pp) - r) / cfg.jacobianProbe;
            }
            step = jac.partialPivLu().solve(r);
            if (!step.allFinite()) needRestart = true;
        }

        if (needRestart) {
            if (stats.restarts >= cfg.picardRestarts)
                throw ConvergenceError("pressure network diverged and the bisection-restart "
                                       "budget is exhausted",
                                       norm);
            ++stats.restarts;
            grow = 0;
            prevNorm = std::numeric_limits<double>::infinity();
            mark = std::numeric_limits<double>::infinity();
            log::info("pressure solver restarting with a bisection pass");
            for (int pass = 0; pass < 3; ++pass) bisectionPass(p);
            continue;
        }

        // Accept the relaxed step only while it does not grow the residual;
        // otherwise halve it.  Flow laws with unbounded slope at zero
        // pressure difference (cracks, openings between equal-density
        // zones) make the full step overshoot and orbit the root, and the
        // zone-wise bisection fallback cannot rescue that case: a stiff
        // shared link forces both pressures to move together, which
        // one-zone-at-a-time updates only manage a sliver at a time.
        double scale = cfg.relaxation;
        Eigen::VectorXd trial = p - scale * step;
        for (int cut = 0; cut < 30; ++cut) {
            const double trialNorm = residuals(trial).cwiseAbs().maxCoeff();
            if (trialNorm <= norm) break;
            scale *= 0.5;
            trial = p - scale * step;
        }
        p = std::move(trial);
        prevNorm = norm;
    }
    throw ConvergenceError("pressure network did not converge within the iteration budget", norm);
}

// ---- observation ---------------------------------------------------------

double AirflowModel::linkFlow(const std::string& componentId) const {
    for (const FlowLink& l : links_)
        if (l.componentId == componentId) return l.netFlow();
    throw SimulationError("unknown flow component: " + componentId);
}

std::vector<std::vector<IncomingFlow>> AirflowModel::incomingFlowsByZone() const {
    std::vector<std::vector<IncomingFlow>> flows(zoneIds_.size());
    for (const FlowLink& l : links_) {
        if (l.flowAtoB > 0 && l.zoneB >= 0)
            flows[static_cast<size_t>(l.zoneB)].push_back({l.zoneA, l.flowAtoB});
        if (l.flowBtoA > 0 && l.zoneA >= 0)
            flows[static_cast<size_t>(l.zoneA)].push_back({l.zoneB, l.flowBtoA});
    }
    return flows;
}

} // namespace codasim
