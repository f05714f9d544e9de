#include "codasim/thermal.hpp"

#include <algorithm>
#include <cmath>

#include "codasim/errors.hpp"
#include "codasim/log.hpp"
#include "codasim/physics.hpp"

namespace codasim {

namespace {

double boundaryValue(const ZoneThermalSystem& sys, const ThermalBoundaryConditions& bc,
                     const ThermalBoundary& b) {
    switch (b.kind) {
    case ThermalBoundaryKind::OutdoorAir: return bc.outdoorTemp;
    case ThermalBoundaryKind::Sky: return bc.skyTemp;
    case ThermalBoundaryKind::External: return sys.externalSlots.at(static_cast<size_t>(b.slot));
    }
    return bc.outdoorTemp;
}

// Shared by assembleStep (previous = current state) and advance (explicit
// previous, so coupling iterations can re-step from a snapshot).
void assembleFrom(const ZoneThermalSystem& sys, double dt, const ThermalBoundaryConditions& bc,
                  const Eigen::VectorXd& told, Eigen::MatrixXd& m, Eigen::VectorXd& rhs) {
    if (dt <= 0) throw SimulationError("thermal step: timestep must be positive");
    const int n = static_cast<int>(sys.nodes.size());
    m.setZero(n, n);
    rhs.setZero(n);
    for (int i = 0; i < n; ++i) {
        const double c = sys.nodes[static_cast<size_t>(i)].capacitance / dt;
        m(i, i) += c;
        rhs(i) += c * told(i);
    }
    for (const ThermalLink& l : sys.links) {
        const double g = l.conductance;
        if (l.toNode) {
            m(l.nodeA, l.nodeA) += g;
            m(l.nodeB, l.nodeB) += g;
            m(l.nodeA, l.nodeB) -= g;
            m(l.nodeB, l.nodeA) -= g;
        } else {
            // One-sided: the boundary temperature is data, not an unknown.
            m(l.nodeA, l.nodeA) += g;
            rhs(l.nodeA) += g * boundaryValue(sys, bc, l.boundary);
        }
    }
    for (const SourceTerm& s : sys.sources) rhs(s.node) += s.flux;
    // A node with neither capacitance nor links would make the system
    // singular in a way LU reports only as NaNs; name the culprit instead.
    for (int i = 0; i < n; ++i) {
        if (m(i, i) == 0.0)
            throw SolveError("thermal node has no capacitance and no links",
                             sys.nodes[static_cast<size_t>(i)].label);
    }
}

void requireFinite(const Eigen::VectorXd& v, const std::string& zoneId) {
    if (!v.allFinite()) throw SolveError("thermal solve produced non-finite temperatures", zoneId);
}

} // namespace

// ---- ZoneThermalSystem ---------------------------------------------------

int ZoneThermalSystem::addNode(ThermalNodeKind kind, double capacitance, std::string label) {
    nodes.push_back(ThermalNode{kind, capacitance, std::move(label)});
    return static_cast<int>(nodes.size()) - 1;
}

void ZoneThermalSystem::addLink(int a, int b, double conductance, ThermalLinkKind kind) {
    if (conductance <= 0) return; // disabled exchange (e.g. a zero film coefficient)
    ThermalLink l;
    l.nodeA = a;
    l.toNode = true;
    l.nodeB = b;
    l.conductance = conductance;
    l.kind = kind;
    links.push_back(l);
}

void ZoneThermalSystem::addBoundaryLink(int a, ThermalBoundary boundary, double conductance,
                                        ThermalLinkKind kind) {
    if (conductance <= 0) return;
    ThermalLink l;
    l.nodeA = a;
    l.toNode = false;
    l.boundary = boundary;
    l.conductance = conductance;
    l.kind = kind;
    links.push_back(l);
}

int ZoneThermalSystem::addExternalSlot(double initial) {
    externalSlots.push_back(initial);
    return static_cast<int>(externalSlots.size()) - 1;
}

void ZoneThermalSystem::assembleStep(double dt, const ThermalBoundaryConditions& bc,
                                     Eigen::MatrixXd& m, Eigen::VectorXd& rhs) const {
    assembleFrom(*this, dt, bc, state, m, rhs);
}

void ZoneThermalSystem::advance(double dt, const ThermalBoundaryConditions& bc,
                                const Eigen::VectorXd& previous) {
    const Eigen::VectorXd told = previous; // copy: callers may pass `state` itself
    Eigen::MatrixXd m;
    Eigen::VectorXd rhs;
    assembleFrom(*this, dt, bc, told, m, rhs);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);

    hvacPower = 0;
    if (!hasAirHandler) {
        state = lu.solve(rhs);
        requireFinite(state, zoneId);
        return;
    }

    // Ideal air handler: pin the air node at the setpoint (Dirichlet row),
    // read the implied power off the original balance, clamp if needed.
    Eigen::MatrixXd md = m;
    Eigen::VectorXd rd = rhs;
    md.row(airNode).setZero();
    md(airNode, airNode) = 1.0;
    rd(airNode) = hvacSetpoint;
    const Eigen::VectorXd pinned = md.partialPivLu().solve(rd);
    requireFinite(pinned, zoneId);

    const double required = m.row(airNode).dot(pinned) - rhs(airNode);
    if (std::abs(required) <= hvacMaxPower) {
        state = pinned;
        hvacPower = required;
        return;
    }
    const double capped = required > 0 ? hvacMaxPower : -hvacMaxPower;
    rhs(airNode) += capped;
    state = lu.solve(rhs);
    requireFinite(state, zoneId);
    hvacPower = capped;
}

double ZoneThermalSystem::radiantResidualRelative(const ThermalBoundaryConditions& bc) const {
    if (radiantNode < 0) return 0;
    const double trm = state(radiantNode);
    double num = 0;
    double den = 0;
    for (const ThermalLink& l : links) {
        if (l.kind != ThermalLinkKind::RadiationInterior) continue;
        if (l.toNode) {
            if (l.nodeA == radiantNode) {
                num += l.conductance * (state(l.nodeB) - trm);
                den += l.conductance;
            } else if (l.nodeB == radiantNode) {
                num += l.conductance * (state(l.nodeA) - trm);
                den += l.conductance;
            }
        } else if (l.nodeA == radiantNode) {
            num += l.conductance * (boundaryValue(*this, bc, l.boundary) - trm);
            den += l.conductance;
        }
    }
    return den > 0 ? std::abs(num) / den : 0.0;
}

StateSpace ZoneThermalSystem::exportStateSpace() const {
    const int n = static_cast<int>(nodes.size());
    const int nslots = static_cast<int>(externalSlots.size());
    const int nb = 2 + nslots; // outdoor, sky, then frozen externals

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, nb);
    for (const ThermalLink& l : links) {
        if (l.toNode) {
            g(l.nodeA, l.nodeA) += l.conductance;
            g(l.nodeB, l.nodeB) += l.conductance;
            g(l.nodeA, l.nodeB) -= l.conductance;
            g(l.nodeB, l.nodeA) -= l.conductance;
        } else {
            int col = 0;
            switch (l.boundary.kind) {
            case ThermalBoundaryKind::OutdoorAir: col = 0; break;
            case ThermalBoundaryKind::Sky: col = 1; break;
            case ThermalBoundaryKind::External: col = 2 + l.boundary.slot; break;
            }
            g(l.nodeA, l.nodeA) += l.conductance;
            w(l.nodeA, col) += l.conductance;
        }
    }

    std::vector<int> cIdx;
    std::vector<int> aIdx;
    for (int i = 0; i < n; ++i) {
        if (nodes[static_cast<size_t>(i)].capacitance > 0) cIdx.push_back(i);
        else aIdx.push_back(i);
    }
    const int nc = static_cast<int>(cIdx.size());
    const int na = static_cast<int>(aIdx.size());

    auto pick = [&](const std::vector<int>& rows, const std::vector<int>& cols,
                    const Eigen::MatrixXd& src) {
        Eigen::MatrixXd out(rows.size(), cols.size());
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < cols.size(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = src(rows[r], cols[c]);
        return out;
    };

    Eigen::MatrixXd gRed;  // nc x nc conductance after eliminating algebraic rows
    Eigen::MatrixXd wRed;  // nc x nb boundary weights
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(nc, n); // per-node flux inputs
    for (int c = 0; c < nc; ++c) f(c, cIdx[static_cast<size_t>(c)]) = 1.0;

    if (na > 0) {
        const Eigen::MatrixXd gaa = pick(aIdx, aIdx, g);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gaa);
        if (!lu.isInvertible())
            throw SolveError("state-space reduction: algebraic block is singular", zoneId);
        const Eigen::MatrixXd gca = pick(cIdx, aIdx, g);
        const Eigen::MatrixXd gac = pick(aIdx, cIdx, g);
        Eigen::MatrixXd waRows(na, nb);
        for (int r = 0; r < na; ++r) waRows.row(r) = w.row(aIdx[static_cast<size_t>(r)]);
        Eigen::MatrixXd wcRows(nc, nb);
        for (int r = 0; r < nc; ++r) wcRows.row(r) = w.row(cIdx[static_cast<size_t>(r)]);
        gRed = pick(cIdx, cIdx, g) - gca * lu.solve(gac);
        wRed = wcRows - gca * lu.solve(waRows);
        // Flux injected at an algebraic node redistributes onto the states.
        const Eigen::MatrixXd spread = -gca * lu.solve(Eigen::MatrixXd::Identity(na, na));
        for (int a = 0; a < na; ++a) f.col(aIdx[static_cast<size_t>(a)]) = spread.col(a);
    } else {
        gRed = pick(cIdx, cIdx, g);
        wRed.resize(nc, nb);
        for (int r = 0; r < nc; ++r) wRed.row(r) = w.row(cIdx[static_cast<size_t>(r)]);
    }

    StateSpace ss;
    ss.stateNodes = cIdx;
    Eigen::VectorXd cinv(nc);
    for (int c = 0; c < nc; ++c) cinv(c) = 1.0 / nodes[static_cast<size_t>(cIdx[static_cast<size_t>(c)])].capacitance;
    ss.A = -(cinv.asDiagonal() * gRed);
    ss.B.resize(nc, nb + n);
    ss.B.leftCols(nb) = cinv.asDiagonal() * wRed;
    ss.B.rightCols(n) = cinv.asDiagonal() * f;
    ss.inputNames.push_back("T_outdoor");
    ss.inputNames.push_back("T_sky");
    for (int s = 0; s < nslots; ++s) ss.inputNames.push_back("slot_" + std::to_string(s));
    for (int i = 0; i < n; ++i) ss.inputNames.push_back("phi_" + nodes[static_cast<size_t>(i)].label);
    return ss;
}

double ZoneThermalSystem::surfaceFlux(const WallMesh& wall) const {
    return wall.fluxConductance * (state(wall.interiorSurfaceNode) - state(wall.fluxNeighborNode)) /
           wall.area;
}

// ---- ThermalModel: construction ------------------------------------------

namespace {

bool wallUsesRadiant(const WallParams& w) {
    return w.model.longwaveInterior == LongwaveInteriorModel::RadiantMeanNode;
}

// Node chain for an opaque wall.  R2C lumps the whole capacity into the two
// surface nodes; FD1D places nodesPerLayer vertex-centred nodes per layer
// with half-capacity slices accumulated onto the shared boundary nodes, so
// both total capacity and total resistance are preserved exactly.
WallMesh buildWallChain(ZoneThermalSystem& sys, const Component& c, const WallParams& w) {
    const double area = c.geometry.area;
    std::vector<double> caps;
    std::vector<double> conds;
    if (w.model.conduction == ConductionModel::R2C) {
        double totalCap = 0;
        double resistance = 0; // (m^2 K)/W
        for (const Layer& l : w.layers) {
            totalCap += l.density * l.specificHeat * l.thickness * area;
            resistance += l.thickness / l.conductivity;
        }
        caps = {totalCap / 2, totalCap / 2};
        conds = {area / resistance};
    } else {
        caps.push_back(0);
        for (const Layer& l : w.layers) {
            const int nInner = w.model.nodesPerLayer;
            const double h = l.thickness / (nInner + 1);
            const double sliceCond = l.conductivity * area / h;
            const double sliceCap = l.density * l.specificHeat * area * h;
            caps.back() += sliceCap / 2;
            for (int i = 0; i < nInner; ++i) {
                conds.push_back(sliceCond);
                caps.push_back(sliceCap);
            }
            conds.push_back(sliceCond);
            caps.push_back(sliceCap / 2);
        }
    }

    WallMesh m;
    m.componentId = c.id;
    m.area = area;
    m.nodeCount = static_cast<int>(caps.size());
    for (int i = 0; i < m.nodeCount; ++i) {
        ThermalNodeKind kind = ThermalNodeKind::WallInterior;
        std::string label = c.id + ".w" + std::to_string(i);
        if (i == 0) {
            kind = ThermalNodeKind::SurfaceInterior;
            label = c.id + ".si";
        } else if (i == m.nodeCount - 1) {
            kind = ThermalNodeKind::SurfaceExterior;
            label = c.id + ".se";
        }
        const int node = sys.addNode(kind, caps[static_cast<size_t>(i)], std::move(label));
        if (i == 0) m.firstNode = node;
    }
    for (size_t i = 0; i < conds.size(); ++i)
        sys.addLink(m.firstNode + static_cast<int>(i), m.firstNode + static_cast<int>(i) + 1,
                    conds[i], ThermalLinkKind::Conduction);
    m.interiorSurfaceNode = m.firstNode;
    m.exteriorSurfaceNode = m.firstNode + m.nodeCount - 1;
    m.fluxNeighborNode = m.firstNode + 1;
    m.fluxConductance = conds.front();
    sys.walls.push_back(m);
    return m;
}

// Massless pane pair joined by the U-value; keeps the surface-node interface
// identical to opaque walls.
WallMesh buildGlazingChain(ZoneThermalSystem& sys, const Component& c, const GlazingParams& g) {
    const double area = c.geometry.area;
    WallMesh m;
    m.componentId = c.id;
    m.area = area;
    m.nodeCount = 2;
    m.firstNode = sys.addNode(ThermalNodeKind::SurfaceInterior, 0.0, c.id + ".si");
    sys.addNode(ThermalNodeKind::SurfaceExterior, 0.0, c.id + ".se");
    m.interiorSurfaceNode = m.firstNode;
    m.exteriorSurfaceNode = m.firstNode + 1;
    m.fluxNeighborNode = m.firstNode + 1;
    m.fluxConductance = g.uValue * area;
    sys.addLink(m.interiorSurfaceNode, m.exteriorSurfaceNode, m.fluxConductance,
                ThermalLinkKind::Conduction);
    sys.walls.push_back(m);
    return m;
}

} // namespace

ThermalModel::ThermalModel(const BuildingDescription& desc) {
    const auto issues = validate(desc);
    if (!issues.empty())
        throw SimulationError("invalid building description: " + issues.front().entity + ": " +
                              issues.front().message);

    const int nz = static_cast<int>(desc.zones.size());
    zones_.resize(static_cast<size_t>(nz));
    airSlotBySource_.resize(static_cast<size_t>(nz));

    // A zone carries a radiant-mean node iff at least one wall facing it
    // selects the radiant-mean longwave model.  Glazing joins the exchange
    // when the node exists but never forces one into being.
    std::vector<bool> hasRadiant(static_cast<size_t>(nz), false);
    for (int zi = 0; zi < nz; ++zi)
        for (const Component& c : desc.zones[static_cast<size_t>(zi)].components)
            if (c.kind == ComponentKind::InternalWall && wallUsesRadiant(std::get<WallParams>(c.params)))
                hasRadiant[static_cast<size_t>(zi)] = true;
    for (const InterAmbiance& ia : desc.interAmbiances) {
        const int a = findZone(desc, ia.zoneA);
        const int b = findZone(desc, ia.zoneB);
        for (const Component& c : ia.components) {
            if (c.kind != ComponentKind::SeparationWall) continue;
            if (!wallUsesRadiant(std::get<WallParams>(c.params))) continue;
            hasRadiant[static_cast<size_t>(a)] = true;
            if (b >= 0 && !std::get<WallParams>(c.params).groundContact)
                hasRadiant[static_cast<size_t>(b)] = true;
        }
    }

    for (int zi = 0; zi < nz; ++zi) meshZone(desc, zi, hasRadiant);
    wireInterZone(desc, hasRadiant);

    std::vector<int> faceCount(static_cast<size_t>(nz), 0);
    for (const Face& f : faces_)
        if (f.facingZone >= 0) ++faceCount[static_cast<size_t>(f.facingZone)];
    for (int zi = 0; zi < nz; ++zi)
        if (faceCount[static_cast<size_t>(zi)] == 0)
            throw SimulationError("zone '" + desc.zones[static_cast<size_t>(zi)].id +
                                  "' has no enclosing wall or glazing");

    for (ZoneRuntime& z : zones_) {
        z.sys.structuralLinkCount = static_cast<int>(z.sys.links.size());
        z.sys.state = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(z.sys.nodes.size()), 20.0);
        z.previous = z.sys.state;
    }
    refreshSlots();
}

void ThermalModel::meshZone(const BuildingDescription& desc, int zoneIndex,
                            const std::vector<bool>& zoneHasRadiant) {
    const Zone& z = desc.zones[static_cast<size_t>(zoneIndex)];
    ZoneThermalSystem& sys = zones_[static_cast<size_t>(zoneIndex)].sys;
    sys.zoneId = z.id;
    sys.airNode = sys.addNode(ThermalNodeKind::ZoneAir, kRefAirDensity * z.airVolume * kAirCp,
                              z.id + ".air");
    if (zoneHasRadiant[static_cast<size_t>(zoneIndex)])
        sys.radiantNode = sys.addNode(ThermalNodeKind::RadiantMean, 0.0, z.id + ".rm");

    auto attachInterior = [&](int node, double area, const FilmCoefficients& film,
                              bool participates) {
        sys.addLink(node, sys.airNode, film.convInterior * area, ThermalLinkKind::ConvectionInterior);
        if (sys.radiantNode >= 0 && participates)
            sys.addLink(node, sys.radiantNode, film.radInterior * area,
                        ThermalLinkKind::RadiationInterior);
    };
    auto registerWall = [&](const std::string& id) {
        componentIndex_[id] = ComponentLocation{zoneIndex, static_cast<int>(sys.walls.size()) - 1};
    };

    for (const Component& c : z.components) {
        switch (c.kind) {
        case ComponentKind::InternalWall: {
            const WallParams& w = std::get<WallParams>(c.params);
            const WallMesh m = buildWallChain(sys, c, w);
            registerWall(c.id);
            attachInterior(m.interiorSurfaceNode, m.area, w.film, wallUsesRadiant(w));
            attachInterior(m.exteriorSurfaceNode, m.area, w.film, wallUsesRadiant(w));
            Face fi;
            fi.zone = zoneIndex;
            fi.node = m.interiorSurfaceNode;
            fi.componentId = c.id;
            fi.facingZone = zoneIndex;
            fi.area = m.area;
            fi.absorptance = w.surfaceInterior.shortwaveAbsorptance;
            fi.filmConv = w.film.convInterior;
            fi.filmRad = w.film.radInterior;
            fi.radiantParticipates = wallUsesRadiant(w);
            faces_.push_back(fi);
            Face fe = fi;
            fe.node = m.exteriorSurfaceNode;
            fe.absorptance = w.surfaceExterior.shortwaveAbsorptance;
            faces_.push_back(fe);
            break;
        }
        case ComponentKind::IdealAirHandler: {
            const IdealAirHandlerParams& p = std::get<IdealAirHandlerParams>(c.params);
            sys.hasAirHandler = true;
            sys.hvacSetpoint = p.setpoint;
            sys.hvacMaxPower = p.maxPower;
            break;
        }
        default:
            break; // loads, extracts: scheduled by the engine, no mesh
        }
    }

    for (const InterAmbiance& ia : desc.interAmbiances) {
        if (findZone(desc, ia.zoneA) != zoneIndex) continue;
        const int jb = findZone(desc, ia.zoneB); // -1 for EXTERIOR
        for (const Component& c : ia.components) {
            if (c.kind == ComponentKind::SeparationWall) {
                const WallParams& w = std::get<WallParams>(c.params);
                const WallMesh m = buildWallChain(sys, c, w);
                registerWall(c.id);
                attachInterior(m.interiorSurfaceNode, m.area, w.film, wallUsesRadiant(w));
                Face fi;
                fi.zone = zoneIndex;
                fi.node = m.interiorSurfaceNode;
                fi.componentId = c.id;
                fi.facingZone = zoneIndex;
                fi.area = m.area;
                fi.absorptance = w.surfaceInterior.shortwaveAbsorptance;
                fi.filmConv = w.film.convInterior;
                fi.filmRad = w.film.radInterior;
                fi.radiantParticipates = wallUsesRadiant(w);
                faces_.push_back(fi);

                if (w.groundContact) {
                    const double far = w.farSideTemperature.value_or(20.0);
                    const int slot = sys.addExternalSlot(far);
                    SlotBinding b;
                    b.targetZone = zoneIndex;
                    b.targetSlot = slot;
                    b.constant = true;
                    b.value = far;
                    b.needsFarSideDefault = !w.farSideTemperature.has_value();
                    bindings_.push_back(b);
                    sys.addBoundaryLink(m.exteriorSurfaceNode,
                                        {ThermalBoundaryKind::External, slot},
                                        w.film.convExterior * m.area,
                                        ThermalLinkKind::ConvectionExterior);
                } else if (jb < 0) {
                    sys.addBoundaryLink(m.exteriorSurfaceNode, {ThermalBoundaryKind::OutdoorAir, -1},
                                        w.film.convExterior * m.area,
                                        ThermalLinkKind::ConvectionExterior);
                    sys.addBoundaryLink(m.exteriorSurfaceNode, {ThermalBoundaryKind::Sky, -1},
                                        w.film.radExterior * m.area,
                                        ThermalLinkKind::RadiationExterior);
                    Face fx;
                    fx.zone = zoneIndex;
                    fx.node = m.exteriorSurfaceNode;
                    fx.componentId = c.id;
                    fx.facingZone = -1;
                    fx.area = m.area;
                    fx.absorptance = w.surfaceExterior.shortwaveAbsorptance;
                    fx.azimuth = c.geometry.azimuth;
                    fx.tilt = c.geometry.tilt;
                    fx.exteriorFace = true;
                    faces_.push_back(fx);
                } else {
                    // Partition: the far face is an interior surface of the
                    // neighbour.  Links are wired after all zones are meshed.
                    Face ff;
                    ff.zone = zoneIndex;
                    ff.node = m.exteriorSurfaceNode;
                    ff.componentId = c.id;
                    ff.facingZone = jb;
                    ff.area = m.area;
                    ff.absorptance = w.surfaceExterior.shortwaveAbsorptance;
                    ff.filmConv = w.film.convInterior;
                    ff.filmRad = w.film.radInterior;
                    ff.radiantParticipates = wallUsesRadiant(w);
                    faces_.push_back(ff);
                }
            } else if (c.kind == ComponentKind::Glazing) {
                const GlazingParams& gp = std::get<GlazingParams>(c.params);
                const WallMesh m = buildGlazingChain(sys, c, gp);
                registerWall(c.id);
                attachInterior(m.interiorSurfaceNode, m.area, gp.film, true);
                Face fi;
                fi.zone = zoneIndex;
                fi.node = m.interiorSurfaceNode;
                fi.componentId = c.id;
                fi.facingZone = zoneIndex;
                fi.area = m.area;
                fi.absorptance = 0;
                fi.filmConv = gp.film.convInterior;
                fi.filmRad = gp.film.radInterior;
                fi.glazing = true;
                faces_.push_back(fi);

                if (jb < 0) {
                    sys.addBoundaryLink(m.exteriorSurfaceNode, {ThermalBoundaryKind::OutdoorAir, -1},
                                        gp.film.convExterior * m.area,
                                        ThermalLinkKind::ConvectionExterior);
                    sys.addBoundaryLink(m.exteriorSurfaceNode, {ThermalBoundaryKind::Sky, -1},
                                        gp.film.radExterior * m.area,
                                        ThermalLinkKind::RadiationExterior);
                    Face fx;
                    fx.zone = zoneIndex;
                    fx.node = m.exteriorSurfaceNode;
                    fx.componentId = c.id;
                    fx.facingZone = -1;
                    fx.area = m.area;
                    fx.azimuth = c.geometry.azimuth;
                    fx.tilt = c.geometry.tilt;
                    fx.exteriorFace = true;
                    fx.glazing = true;
                    fx.transmittance = gp.shortwaveTransmittance;
                    fx.transmitZone = zoneIndex;
                    faces_.push_back(fx);
                } else {
                    Face ff;
                    ff.zone = zoneIndex;
                    ff.node = m.exteriorSurfaceNode;
                    ff.componentId = c.id;
                    ff.facingZone = jb;
                    ff.area = m.area;
                    ff.filmConv = gp.film.convInterior;
                    ff.filmRad = gp.film.radInterior;
                    ff.glazing = true;
                    faces_.push_back(ff);
                }
            }
            // flow-only components carry no thermal mesh
        }
    }
}

void ThermalModel::wireInterZone(const BuildingDescription& desc,
                                 const std::vector<bool>& zoneHasRadiant) {
    (void)desc;
    (void)zoneHasRadiant;
    const size_t nFaces = faces_.size(); // wiring adds no faces, but be explicit
    for (size_t i = 0; i < nFaces; ++i) {
        const Face f = faces_[i];
        if (f.facingZone < 0 || f.facingZone == f.zone) continue;
        ZoneThermalSystem& owner = zones_[static_cast<size_t>(f.zone)].sys;
        ZoneThermalSystem& neigh = zones_[static_cast<size_t>(f.facingZone)].sys;

        // Owner side: the far face exchanges with the neighbour's air (and
        // radiant mean) held frozen during a sweep.
        {
            const int slot = owner.addExternalSlot();
            SlotBinding b;
            b.targetZone = f.zone;
            b.targetSlot = slot;
            b.sourceZone = f.facingZone;
            b.sourceNode = neigh.airNode;
            bindings_.push_back(b);
            owner.addBoundaryLink(f.node, {ThermalBoundaryKind::External, slot},
                                  f.filmConv * f.area, ThermalLinkKind::ConvectionInterior);
        }
        if (neigh.radiantNode >= 0 && f.radiantParticipates) {
            const int slot = owner.addExternalSlot();
            SlotBinding b;
            b.targetZone = f.zone;
            b.targetSlot = slot;
            b.sourceZone = f.facingZone;
            b.sourceNode = neigh.radiantNode;
            bindings_.push_back(b);
            owner.addBoundaryLink(f.node, {ThermalBoundaryKind::External, slot},
                                  f.filmRad * f.area, ThermalLinkKind::RadiationInterior);
        }

        // Neighbour side: its air and radiant balances see the frozen far-face
        // surface temperature through the same films.
        const int slot = neigh.addExternalSlot();
        SlotBinding b;
        b.targetZone = f.facingZone;
        b.targetSlot = slot;
        b.sourceZone = f.zone;
        b.sourceNode = f.node;
        bindings_.push_back(b);
        neigh.addBoundaryLink(neigh.airNode, {ThermalBoundaryKind::External, slot},
                              f.filmConv * f.area, ThermalLinkKind::ConvectionInterior);
        if (neigh.radiantNode >= 0 && f.radiantParticipates)
            neigh.addBoundaryLink(neigh.radiantNode, {ThermalBoundaryKind::External, slot},
                                  f.filmRad * f.area, ThermalLinkKind::RadiationInterior);
    }
}

// ---- ThermalModel: per-step inputs ---------------------------------------

void ThermalModel::setDefaultFarSideTemperature(double tempC) {
    for (SlotBinding& b : bindings_)
        if (b.needsFarSideDefault) b.value = tempC;
}

void ThermalModel::setSolar(const SunPosition& sun, double directNormal, double diffuseHorizontal) {
    for (ZoneRuntime& z : zones_) z.solarSources.clear();

    std::vector<double> transmitted(zones_.size(), 0.0);
    for (const Face& f : faces_) {
        if (!f.exteriorFace) continue;
        const double inc = incidentShortwave(sun, directNormal, diffuseHorizontal, f.azimuth, f.tilt);
        if (inc <= 0) continue;
        if (f.glazing) {
            if (f.transmitZone >= 0)
                transmitted[static_cast<size_t>(f.transmitZone)] += f.transmittance * f.area * inc;
        } else if (f.absorptance > 0) {
            zones_[static_cast<size_t>(f.zone)].solarSources.push_back(
                SourceTerm{f.node, f.absorptance * f.area * inc, SourceOrigin::ShortwaveExterior});
        }
    }

    // Transmitted shortwave lands on the opaque faces of the receiving zone,
    // pro rata by absorptance-weighted area, so the full gain is deposited.
    for (size_t zi = 0; zi < zones_.size(); ++zi) {
        if (transmitted[zi] <= 0) continue;
        double weightSum = 0;
        for (const Face& f : faces_)
            if (f.facingZone == static_cast<int>(zi) && !f.glazing)
                weightSum += f.absorptance * f.area;
        if (weightSum <= 0) {
            log::debug("transmitted solar into zone with no absorbing faces, dropped");
            continue;
        }
        for (const Face& f : faces_) {
            if (f.facingZone != static_cast<int>(zi) || f.glazing) continue;
            const double flux = transmitted[zi] * f.absorptance * f.area / weightSum;
            if (flux <= 0) continue;
            zones_[static_cast<size_t>(f.zone)].solarSources.push_back(
                SourceTerm{f.node, flux, SourceOrigin::ShortwaveInterior});
        }
    }
}

void ThermalModel::setZoneLoads(const std::vector<double>& wattsPerZone) {
    for (size_t zi = 0; zi < zones_.size(); ++zi)
        zones_[zi].pendingLoad = zi < wattsPerZone.size() ? wattsPerZone[zi] : 0.0;
}

void ThermalModel::setIncomingFlows(const std::vector<std::vector<IncomingFlow>>& flowsPerZone) {
    for (size_t zi = 0; zi < zones_.size(); ++zi) {
        if (zi < flowsPerZone.size()) zones_[zi].incomingFlows = flowsPerZone[zi];
        else zones_[zi].incomingFlows.clear();
    }
}

int ThermalModel::ensureAirSlot(int targetZone, int sourceZone) {
    auto& bySource = airSlotBySource_[static_cast<size_t>(targetZone)];
    const auto it = bySource.find(sourceZone);
    if (it != bySource.end()) return it->second;
    const int slot = zones_[static_cast<size_t>(targetZone)].sys.addExternalSlot();
    SlotBinding b;
    b.targetZone = targetZone;
    b.targetSlot = slot;
    b.sourceZone = sourceZone;
    b.sourceNode = zones_[static_cast<size_t>(sourceZone)].sys.airNode;
    bindings_.push_back(b);
    bySource.emplace(sourceZone, slot);
    return slot;
}

double ThermalModel::refreshSlots() {
    double maxDelta = 0;
    for (const SlotBinding& b : bindings_) {
        const double v = b.constant
                             ? b.value
                             : zones_[static_cast<size_t>(b.sourceZone)].sys.state(b.sourceNode);
        double& slot = zones_[static_cast<size_t>(b.targetZone)].sys.externalSlots
                           [static_cast<size_t>(b.targetSlot)];
        maxDelta = std::max(maxDelta, std::abs(v - slot));
        slot = v;
    }
    return maxDelta;
}

// ---- ThermalModel: stepping ----------------------------------------------

void ThermalModel::advanceAll(double dt) {
    for (size_t zi = 0; zi < zones_.size(); ++zi) {
        ZoneRuntime& z = zones_[zi];
        z.previous = z.sys.state;
        z.sys.links.resize(static_cast<size_t>(z.sys.structuralLinkCount));
        z.sys.sources.clear();
        for (const SourceTerm& s : z.solarSources) z.sys.sources.push_back(s);
        if (z.pendingLoad != 0)
            z.sys.sources.push_back(
                SourceTerm{z.sys.airNode, z.pendingLoad, SourceOrigin::InternalLoad});
        for (const IncomingFlow& fl : z.incomingFlows) {
            const double g = fl.massFlow * kAirCp;
            if (g <= 0) continue;
            if (fl.sourceZone < 0) {
                z.sys.addBoundaryLink(z.sys.airNode, {ThermalBoundaryKind::OutdoorAir, -1}, g,
                                      ThermalLinkKind::AirTransport);
            } else {
                const int slot = ensureAirSlot(static_cast<int>(zi), fl.sourceZone);
                z.sys.addBoundaryLink(z.sys.airNode, {ThermalBoundaryKind::External, slot}, g,
                                      ThermalLinkKind::AirTransport);
            }
        }
    }

    lastSweeps_ = 0;
    bool converged = bindings_.empty();
    double delta = 0;
    for (int sweep = 0; sweep < maxSweeps; ++sweep) {
        delta = refreshSlots();
        if (sweep > 0 && delta < sweepTolerance) {
            converged = true;
            break;
        }
        for (ZoneRuntime& z : zones_) {
            z.sys.advance(dt, bc_, z.previous);
            ++solveCount_;
            maxRadiantResidual_ = std::max(maxRadiantResidual_, z.sys.radiantResidualRelative(bc_));
        }
        ++lastSweeps_;
        if (bindings_.empty()) break;
    }
    if (!converged) {
        // Tightly coupled zones (large shared surfaces, strong air exchange)
        // can need more passes than the cap allows; the leftover boundary
        // drift is usually harmless, so record it and let the caller report
        // once instead of flooding the log every step.
        ++sweepCapHits_;
        worstSweepResidual_ = std::max(worstSweepResidual_, delta);
        log::debug("interzone sweep hit the iteration cap before boundary temperatures settled");
    }

    // Final refresh so paired interzone-boundary fluxes cancel exactly in the
    // building-level audit.
    refreshSlots();
    for (ZoneRuntime& z : zones_) computeAudit(z, dt);
}

void ThermalModel::computeAudit(ZoneRuntime& z, double dt) {
    EnergyAudit a;
    const ZoneThermalSystem& sys = z.sys;
    for (const ThermalLink& l : sys.links) {
        if (l.toNode) {
            a.flowMagnitude += std::abs(l.conductance * (sys.state(l.nodeB) - sys.state(l.nodeA)));
        } else {
            const double f =
                l.conductance * (boundaryValue(sys, bc_, l.boundary) - sys.state(l.nodeA));
            a.boundaryInflow += f;
            a.flowMagnitude += std::abs(f);
        }
    }
    for (const SourceTerm& s : sys.sources) {
        a.sourceTotal += s.flux;
        a.flowMagnitude += std::abs(s.flux);
    }
    a.sourceTotal += sys.hvacPower;
    a.flowMagnitude += std::abs(sys.hvacPower);
    for (size_t i = 0; i < sys.nodes.size(); ++i)
        a.storageRate += sys.nodes[i].capacitance *
                         (sys.state(static_cast<Eigen::Index>(i)) - z.previous(static_cast<Eigen::Index>(i))) / dt;
    z.audit = a;
}

// ---- ThermalModel: state and observation ---------------------------------

std::vector<Eigen::VectorXd> ThermalModel::saveState() const {
    std::vector<Eigen::VectorXd> snap;
    snap.reserve(zones_.size());
    for (const ZoneRuntime& z : zones_) snap.push_back(z.sys.state);
    return snap;
}

void ThermalModel::restoreState(const std::vector<Eigen::VectorXd>& snapshot) {
    if (snapshot.size() != zones_.size())
        throw SimulationError("thermal state snapshot does not match the zone count");
    for (size_t zi = 0; zi < zones_.size(); ++zi) {
        zones_[zi].sys.state = snapshot[zi];
        zones_[zi].previous = snapshot[zi];
        zones_[zi].sys.hvacPower = 0;
    }
    refreshSlots();
}

void ThermalModel::setUniformTemperature(double tempC) {
    for (ZoneRuntime& z : zones_) {
        z.sys.state.setConstant(tempC);
        z.previous = z.sys.state;
        z.sys.hvacPower = 0;
    }
    refreshSlots();
}

double ThermalModel::zoneAirTemperature(int zone) const {
    const ZoneThermalSystem& sys = zones_[static_cast<size_t>(zone)].sys;
    return sys.state(sys.airNode);
}

double ThermalModel::zoneRadiantTemperature(int zone) const {
    const ZoneThermalSystem& sys = zones_[static_cast<size_t>(zone)].sys;
    return sys.radiantNode >= 0 ? sys.state(sys.radiantNode) : sys.state(sys.airNode);
}

EnergyAudit ThermalModel::buildingAudit() const {
    EnergyAudit total;
    for (const ZoneRuntime& z : zones_) {
        total.boundaryInflow += z.audit.boundaryInflow;
        total.sourceTotal += z.audit.sourceTotal;
        total.storageRate += z.audit.storageRate;
        total.flowMagnitude += z.audit.flowMagnitude;
    }
    return total;
}

const ThermalModel::ComponentLocation& ThermalModel::locate(const std::string& componentId) const {
    const auto it = componentIndex_.find(componentId);
    if (it == componentIndex_.end())
        throw SimulationError("unknown wall or glazing component: " + componentId);
    return it->second;
}

double ThermalModel::surfaceTemperature(const ComponentLocation& loc, bool interior) const {
    const ZoneThermalSystem& sys = zones_[static_cast<size_t>(loc.zone)].sys;
    const WallMesh& w = sys.walls[static_cast<size_t>(loc.wallIndex)];
    return sys.state(interior ? w.interiorSurfaceNode : w.exteriorSurfaceNode);
}

double ThermalModel::surfaceFlux(const ComponentLocation& loc) const {
    const ZoneThermalSystem& sys = zones_[static_cast<size_t>(loc.zone)].sys;
    return sys.surfaceFlux(sys.walls[static_cast<size_t>(loc.wallIndex)]);
}

} // namespace codasim
