// Space-time tiling of the slab Omega x [0, dt] between two tessellations.
//
// Every cell sweeps a space-time volume: its dual vertices move along linear
// trajectories, the polygon is fan-triangulated from the (moving) generator,
// and each fan triangle becomes an isoparametric sub-prism
//     x(lambda, tau) = (1 - tau) b(lambda) + tau t(lambda),
// integrated with a tensor rule (triangle rule in lambda, Gauss-Legendre in
// tau). Dual vertices are matched across the two levels by provenance key; a
// vertex present at one level only belongs to a topology event and collapses
// onto the event's barycenter segment at the other level, producing the
// degenerate sub-prisms. Each 2-2 flip additionally creates one sliver: the
// tetrahedron spanned by the two old barycenters at t^n and the two new
// barycenters at t^{n+1}, with zero spatial extent at both levels but
// positive space-time measure.
//
// Lateral faces are the bilinear patches swept by the dual edges; flux
// integrals use the unnormalized parametric normal (a polynomial), so the
// divergence identity -- and with it free-stream preservation and exact
// conservation -- holds to machine precision. Collapsed patches (slivers,
// degenerate sub-prisms) are genuine space-time triangles.
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "alevor/core.hpp"
#include "alevor/dual.hpp"
#include "alevor/quadrature.hpp"
#include "alevor/topology.hpp"

namespace alevor {

struct VolumeRef {
    enum class Kind : std::uint8_t { Cell, Sliver, Wall };
    Kind kind = Kind::Cell;
    int idx = -1;

    static VolumeRef cell(int i) { return {Kind::Cell, i}; }
    static VolumeRef sliver(int i) { return {Kind::Sliver, i}; }
    static VolumeRef wall(Wall w) { return {Kind::Wall, static_cast<int>(w)}; }
    bool operator==(const VolumeRef&) const = default;
};

// Bilinear lateral patch swept by a moving dual edge:
//   x(s, tau) = (1-tau) [(1-s) a0 + s b0] + tau [(1-s) a1 + s b1],  t = tau dt.
// The stored orientation makes the parametric normal point out of `owner`.
struct SpaceTimeFace {
    Vec2 a0, b0; // bottom edge (owner's polygon orientation)
    Vec2 a1, b1; // top edge (a0 -> a1 and b0 -> b1 are the trajectories)
    VolumeRef owner;
    VolumeRef other;
    double area = 0.0; // 3D measure (diagnostic)
};

// Fan sub-prism: bottom triangle (gen, v_i, v_j) at t=0, top at t=dt.
struct SubPrism {
    std::array<Vec2, 3> bot;
    std::array<Vec2, 3> top;
};

struct SpaceTimeVolume {
    int cell = -1;
    std::vector<SubPrism> prisms;
    std::vector<int> faces;        // indices into the tiling face table
    std::vector<double> face_sign; // +1 when this volume owns the orientation
    double volume = 0.0;
};

struct SliverVolume {
    int event = -1;
    Vec2 p1, p2; // barycenters of the vanishing pair at t^n
    Vec2 q1, q2; // barycenters of the emerging pair at t^{n+1}
    std::array<int, 2> cells_n{-1, -1};   // share the vanishing dual edge
    std::array<int, 2> cells_np1{-1, -1}; // share the emerging dual edge
    std::array<int, 4> faces{-1, -1, -1, -1};
    double volume = 0.0;
    Vec2 bottom_mid;
    double h = 0.0; // spatial scale for the predictor basis
};

struct SpaceTimeTiling {
    double dt = 0.0;
    std::vector<SpaceTimeVolume> cells;
    std::vector<SliverVolume> slivers;
    std::vector<SpaceTimeFace> faces;
    double total_volume = 0.0;
};

inline int quadrature_degree(int N) {
    if (N < 0 || N > 3)
        throw UnsupportedDegree("degree " + std::to_string(N) + " not in {0,1,2,3}");
    return 2 * N + 1;
}

namespace detail {

inline double tri_area2(Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); }

} // namespace detail

// Signed space-time measure: dt * Simpson on the quadratic slice area.
inline double subprism_volume(const SubPrism& p, double dt) {
    const double a0 = 0.5 * detail::tri_area2(p.bot[0], p.bot[1], p.bot[2]);
    const double a1 = 0.5 * detail::tri_area2(p.top[0], p.top[1], p.top[2]);
    const Vec2 m0 = (p.bot[0] + p.top[0]) * 0.5;
    const Vec2 m1 = (p.bot[1] + p.top[1]) * 0.5;
    const Vec2 m2 = (p.bot[2] + p.top[2]) * 0.5;
    const double am = 0.5 * detail::tri_area2(m0, m1, m2);
    return dt * (a0 + 4.0 * am + a1) / 6.0;
}

// Tensor rule on the sub-prism, exact for space-time polynomials of total
// degree <= `degree`; signed weights sum to the signed measure.
template <typename Fn>
void subprism_quadrature(const SubPrism& p, double dt, int degree, Fn&& fn) {
    const TriangleRule& tr = triangle_rule(degree);
    const GaussRule& gt = gauss_legendre((degree + 3) / 2);
    for (std::size_t qt = 0; qt < gt.x.size(); ++qt) {
        const double tau = gt.x[qt];
        Vec2 v[3];
        for (int m = 0; m < 3; ++m) v[m] = p.bot[m] * (1.0 - tau) + p.top[m] * tau;
        const double jac2 = detail::tri_area2(v[0], v[1], v[2]); // = 2 A(tau)
        const double wt = gt.w[qt] * jac2 * dt;
        for (std::size_t ql = 0; ql < tr.pts.size(); ++ql) {
            const Vec2 r = tr.pts[ql];
            const Vec2 x = v[0] + (v[1] - v[0]) * r.x + (v[2] - v[0]) * r.y;
            fn(Vec3(x, tau * dt), tr.w[ql] * wt);
        }
    }
}

// Quadrature over a sliver tetrahedron; weights sum to its positive measure.
template <typename Fn>
void sliver_quadrature(const SliverVolume& s, double dt, int degree, Fn&& fn) {
    const TetRule& rule = tet_rule(degree);
    const Vec3 v0(s.p1, 0.0), v1(s.p2, 0.0), v2(s.q1, dt), v3(s.q2, dt);
    const Vec3 e1 = v1 - v0, e2 = v2 - v0, e3 = v3 - v0;
    const double jac = std::abs(e1.cross(e2).dot(e3));
    for (std::size_t q = 0; q < rule.pts.size(); ++q) {
        const Vec3 r = rule.pts[q];
        const Vec3 x = v0 + e1 * r.x + e2 * r.y + e3 * r.t;
        fn(x, rule.w[q] * jac);
    }
}

// Face rule: fn(x, w, n_unit) where w carries the physical area element and
// n_unit the owner-outward unit normal at the quadrature point. Exact for
// contractions of polynomials with the vector area element to total degree
// `degree`.
template <typename Fn>
void face_quadrature(const SpaceTimeFace& f, double dt, int degree, Fn&& fn) {
    const int n = (degree + 3) / 2;
    const GaussRule& g = gauss_legendre(n);
    for (std::size_t qs = 0; qs < g.x.size(); ++qs) {
        const double s = g.x[qs];
        const Vec2 e0 = f.a0 + (f.b0 - f.a0) * s; // bottom point
        const Vec2 e1 = f.a1 + (f.b1 - f.a1) * s; // top point
        for (std::size_t qt = 0; qt < g.x.size(); ++qt) {
            const double tau = g.x[qt];
            const Vec2 x = e0 * (1.0 - tau) + e1 * tau;
            // tangents of the parametrization
            const Vec2 xs = (f.b0 - f.a0) * (1.0 - tau) + (f.b1 - f.a1) * tau;
            const Vec2 xt = e1 - e0;
            const Vec3 ts(xs, 0.0);
            const Vec3 tt(xt, dt);
            const Vec3 raw = ts.cross(tt);
            const double ds = raw.norm();
            if (ds == 0.0) continue;
            fn(Vec3(x, tau * dt), g.w[qs] * g.w[qt] * ds, raw * (1.0 / ds));
        }
    }
}

inline double face_area(const SpaceTimeFace& f, double dt) {
    double a = 0.0;
    face_quadrature(f, dt, 7, [&](Vec3, double w, Vec3) { a += w; });
    return a;
}

namespace detail {

struct TrajEntry {
    Vec2 b, t;
    DualVertexKey key_b, key_t;
    int bot_idx = -1; // bottom loop index this entry descends from
    int event = -1;   // topology event id, -1 for persistent vertices
};

struct TilingBuilder {
    const Tessellation& tn;
    const Tessellation& tnp1;
    const std::vector<TopologyEvent>& events;
    double dt;
    SpaceTimeTiling& out;

    std::map<TriKey, std::pair<int, int>> old_key_event; // key -> (event, which)
    std::map<TriKey, std::pair<int, int>> new_key_event;
    std::map<std::pair<int, int>, int> pending_faces; // (lo cell, hi cell) -> face
    std::vector<Vec2> gen_bottom, gen_top;

    void build(const Triangulation& tri_n, const Triangulation& tri_np1) {
        out.dt = dt;
        out.cells.resize(tn.size());
        out.slivers.resize(events.size());

        for (std::size_t e = 0; e < events.size(); ++e) {
            const TopologyEvent& ev = events[e];
            old_key_event[tri_n.key(ev.old_pair[0])] = {static_cast<int>(e), 0};
            old_key_event[tri_n.key(ev.old_pair[1])] = {static_cast<int>(e), 1};
            new_key_event[tri_np1.key(ev.new_pair[0])] = {static_cast<int>(e), 0};
            new_key_event[tri_np1.key(ev.new_pair[1])] = {static_cast<int>(e), 1};

            SliverVolume& s = out.slivers[e];
            s.event = static_cast<int>(e);
            s.p1 = tri_n.barycenter[ev.old_pair[0]];
            s.p2 = tri_n.barycenter[ev.old_pair[1]];
            s.q1 = tri_np1.barycenter[ev.new_pair[0]];
            s.q2 = tri_np1.barycenter[ev.new_pair[1]];
            s.cells_n = {ev.old_diag.first, ev.old_diag.second};
            s.cells_np1 = {ev.new_diag.first, ev.new_diag.second};
            s.bottom_mid = (s.p1 + s.p2) * 0.5;
            s.volume = std::abs(Vec3(s.p2 - s.p1, 0.0)
                                    .cross(Vec3(s.q1 - s.p1, dt))
                                    .dot(Vec3(s.q2 - s.p1, dt))) / 6.0;
            if (!(s.volume > 0.0))
                throw MeshTangling("sliver of event " + std::to_string(e) +
                                   " has zero space-time measure");
            s.h = std::max({(s.p2 - s.p1).norm(), (s.q2 - s.q1).norm(),
                            (s.q1 - s.p1).norm(), (s.q2 - s.p2).norm()});
        }

        for (int g = 0; g < tn.size(); ++g) build_cell(g, tri_np1);

        for (const auto& [key, fidx] : pending_faces) {
            (void)key;
            if (out.faces[fidx].other.kind == VolumeRef::Kind::Cell &&
                out.faces[fidx].other.idx < 0)
                throw TilingGap("unpaired interior face");
        }
        for (const SliverVolume& s : out.slivers)
            for (const int f : s.faces)
                if (f < 0) throw TilingGap("sliver with missing lateral face");

        out.total_volume = 0.0;
        for (const SpaceTimeVolume& cv : out.cells) out.total_volume += cv.volume;
        for (const SliverVolume& s : out.slivers) out.total_volume += s.volume;
        const double expect = tn.domain.area() * dt;
        if (std::abs(out.total_volume - expect) > 1e-11 * expect)
            throw TilingGap("tiling volume defect " +
                            std::to_string(out.total_volume - expect));
    }

    void build_cell(int g, const Triangulation& tri_np1) {
        const Cell& cb = tn.cells[g];
        const Cell& ct = tnp1.cells[g];
        const Vec2 gb = gen_bottom[g];
        const Vec2 gt = gen_top[g];

        std::map<DualVertexKey, int> top_index;
        for (int i = 0; i < ct.n_vertices(); ++i) top_index[ct.keys[i]] = i;

        std::vector<TrajEntry> loop;
        loop.reserve(cb.n_vertices() + 2);
        for (int i = 0; i < cb.n_vertices(); ++i) {
            const DualVertexKey kb = cb.keys[i];
            auto it = top_index.find(kb);
            if (it != top_index.end()) {
                TrajEntry te;
                te.b = cb.verts[i];
                te.t = ct.verts[it->second];
                te.key_b = te.key_t = kb;
                te.bot_idx = i;
                loop.push_back(te);
                continue;
            }
            if (kb.kind != DualVertexKey::Kind::TriangleBary)
                throw TilingGap("non-persistent wall vertex in cell " + std::to_string(g));
            const auto ev_it = old_key_event.find(TriKey{kb.id});
            if (ev_it == old_key_event.end())
                throw TilingGap("vanished dual vertex without topology event");
            const int e = ev_it->second.first;
            const TopologyEvent& ev = events[e];
            const bool in0 = tri_np1.vertex_slot(ev.new_pair[0], g) >= 0;
            const bool in1 = tri_np1.vertex_slot(ev.new_pair[1], g) >= 0;
            if (in0 != in1) {
                // collapses onto the single emerging barycenter incident to g
                const int which = in0 ? 0 : 1;
                TrajEntry te;
                te.b = cb.verts[i];
                te.t = tri_np1.barycenter[ev.new_pair[which]];
                te.key_b = kb;
                te.key_t = DualVertexKey::bary(tri_np1.key(ev.new_pair[which]));
                te.bot_idx = i;
                te.event = e;
                loop.push_back(te);
            } else if (in0 && in1) {
                // the bottom vertex splits; order the two emerging barycenters
                // like the counterclockwise top loop
                const int j0 = top_index.at(DualVertexKey::bary(tri_np1.key(ev.new_pair[0])));
                const int j1 = top_index.at(DualVertexKey::bary(tri_np1.key(ev.new_pair[1])));
                int first;
                if ((j0 + 1) % ct.n_vertices() == j1) first = 0;
                else if ((j1 + 1) % ct.n_vertices() == j0) first = 1;
                else throw TilingGap("emerging barycenters not adjacent in top loop");
                for (const int which : {first, 1 - first}) {
                    TrajEntry te;
                    te.b = cb.verts[i];
                    te.t = tri_np1.barycenter[ev.new_pair[which]];
                    te.key_b = kb;
                    te.key_t = DualVertexKey::bary(tri_np1.key(ev.new_pair[which]));
                    te.bot_idx = i;
                    te.event = e;
                    loop.push_back(te);
                }
            } else {
                throw TilingGap("flip event does not involve cell " + std::to_string(g));
            }
        }

        validate_top_cycle(g, loop, ct);

        SpaceTimeVolume& cv = out.cells[g];
        cv.cell = g;
        const int m = static_cast<int>(loop.size());
        cv.prisms.reserve(m);
        for (int i = 0; i < m; ++i) {
            const TrajEntry& a = loop[i];
            const TrajEntry& b = loop[(i + 1) % m];

            SubPrism p;
            p.bot = {gb, a.b, b.b};
            p.top = {gt, a.t, b.t};
            check_time_slice(g, p);
            cv.prisms.push_back(p);

            // patch neighbor: two entries of one event sharing an endpoint key
            // bound the event's sliver
            VolumeRef other;
            if (a.event >= 0 && a.event == b.event &&
                (a.key_b == b.key_b || a.key_t == b.key_t)) {
                other = VolumeRef::sliver(a.event);
            } else {
                const int nb = cb.neighbor[a.bot_idx];
                other = edge_is_wall(nb) ? VolumeRef::wall(decode_wall(nb))
                                         : VolumeRef::cell(nb);
            }
            emit_face(g, a, b, other, cv);
        }
        cv.volume = 0.0;
        for (const SubPrism& p : cv.prisms) cv.volume += subprism_volume(p, dt);
        if (!(cv.volume > 0.0) && tn.cells[g].area > 0.0)
            throw MeshTangling("cell " + std::to_string(g) +
                               " swept non-positive space-time volume");
    }

    void validate_top_cycle(int g, const std::vector<TrajEntry>& loop, const Cell& ct) {
        std::vector<Vec2> seq;
        for (const TrajEntry& e : loop)
            if (seq.empty() || !(seq.back() == e.t)) seq.push_back(e.t);
        while (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
        if (static_cast<int>(seq.size()) != ct.n_vertices())
            throw TilingGap("top cycle length mismatch in cell " + std::to_string(g));
        int off = -1;
        for (int i = 0; i < ct.n_vertices(); ++i)
            if (ct.verts[i] == seq[0]) { off = i; break; }
        if (off < 0) throw TilingGap("top cycle start mismatch in cell " + std::to_string(g));
        for (std::size_t i = 0; i < seq.size(); ++i)
            if (!(ct.verts[(off + i) % ct.n_vertices()] == seq[i]))
                throw TilingGap("top cycle order mismatch in cell " + std::to_string(g));
    }

    void emit_face(int g, const TrajEntry& a, const TrajEntry& b, VolumeRef other,
                   SpaceTimeVolume& cv) {
        // fully collapsed patch (identical trajectories): no face
        if (a.b == b.b && a.t == b.t) return;

        if (other.kind == VolumeRef::Kind::Cell) {
            const int n = other.idx;
            const std::pair<int, int> key{std::min(g, n), std::max(g, n)};
            auto it = pending_faces.find(key);
            if (it != pending_faces.end() &&
                out.faces[it->second].other.idx == -9) {
                SpaceTimeFace& f = out.faces[it->second];
                f.other = VolumeRef::cell(g);
                cv.faces.push_back(it->second);
                cv.face_sign.push_back(-1.0);
                return;
            }
            const int fidx = push_face(g, a, b, VolumeRef::cell(-9));
            pending_faces[key] = fidx;
            cv.faces.push_back(fidx);
            cv.face_sign.push_back(1.0);
            return;
        }

        const int fidx = push_face(g, a, b, other);
        cv.faces.push_back(fidx);
        cv.face_sign.push_back(1.0);
        if (other.kind == VolumeRef::Kind::Sliver) {
            SliverVolume& s = out.slivers[other.idx];
            for (int k = 0; k < 4; ++k) {
                if (s.faces[k] < 0) {
                    s.faces[k] = fidx;
                    break;
                }
            }
        }
    }

    int push_face(int g, const TrajEntry& a, const TrajEntry& b, VolumeRef other) {
        SpaceTimeFace f;
        f.a0 = a.b;
        f.b0 = b.b;
        f.a1 = a.t;
        f.b1 = b.t;
        f.owner = VolumeRef::cell(g);
        f.other = other;
        f.area = face_area(f, dt);
        out.faces.push_back(f);
        return static_cast<int>(out.faces.size()) - 1;
    }

    void check_time_slice(int g, const SubPrism& p) const {
        const double a0 = tri_area2(p.bot[0], p.bot[1], p.bot[2]);
        const double a1 = tri_area2(p.top[0], p.top[1], p.top[2]);
        const Vec2 m0 = (p.bot[0] + p.top[0]) * 0.5;
        const Vec2 m1 = (p.bot[1] + p.top[1]) * 0.5;
        const Vec2 m2 = (p.bot[2] + p.top[2]) * 0.5;
        const double ah = tri_area2(m0, m1, m2);
        const double c0 = a0;
        const double c2 = 2.0 * a0 + 2.0 * a1 - 4.0 * ah;
        const double c1 = a1 - a0 - c2;
        const double ref = std::max({std::abs(a0), std::abs(a1), 1e-300});
        const double tol = -1e-10 * ref;
        double amin = std::min(a0, a1);
        if (c2 != 0.0) {
            const double ts = -c1 / (2.0 * c2);
            if (ts > 0.0 && ts < 1.0) amin = std::min(amin, c0 + c1 * ts + c2 * ts * ts);
        }
        if (amin < tol)
            throw MeshTangling("negative time-slice Jacobian in cell " + std::to_string(g));
    }
};

} // namespace detail

// Assembles the closed space-time tiling. gen_n / gen_np1 give the generator
// positions at the two levels (identical ids). Throws MeshTangling on
// inverted sweeps and TilingGap if the closed-tiling identities fail.
inline SpaceTimeTiling build_spacetime_tiling(
    const Triangulation& tri_n, const Tessellation& tess_n,
    const Triangulation& tri_np1, const Tessellation& tess_np1,
    const std::vector<Vec2>& gen_n, const std::vector<Vec2>& gen_np1,
    const std::vector<TopologyEvent>& events, double dt) {
    if (!(dt > 0.0)) throw VanishingDt("non-positive timestep");
    SpaceTimeTiling tiling;
    detail::TilingBuilder builder{tess_n, tess_np1, events, dt, tiling};
    builder.gen_bottom = gen_n;
    builder.gen_top = gen_np1;
    builder.build(tri_n, tri_np1);
    return tiling;
}

// Plain-text dump (volume id, type, measure, face pairings) for golden tests.
inline void dump_tiling(const SpaceTimeTiling& tiling, std::string& out) {
    char buf[160];
    auto ref_str = [](VolumeRef r) {
        switch (r.kind) {
            case VolumeRef::Kind::Cell: return "cell " + std::to_string(r.idx);
            case VolumeRef::Kind::Sliver: return "sliver " + std::to_string(r.idx);
            case VolumeRef::Kind::Wall: return "wall " + std::to_string(r.idx);
        }
        return std::string("?");
    };
    std::snprintf(buf, sizeof buf, "tiling dt=%.17g volumes=%zu slivers=%zu faces=%zu\n",
                  tiling.dt, tiling.cells.size(), tiling.slivers.size(),
                  tiling.faces.size());
    out += buf;
    for (const SpaceTimeVolume& cv : tiling.cells) {
        std::snprintf(buf, sizeof buf, "cell %d measure=%.17g prisms=%zu faces=%zu\n",
                      cv.cell, cv.volume, cv.prisms.size(), cv.faces.size());
        out += buf;
    }
    for (const SliverVolume& s : tiling.slivers) {
        std::snprintf(buf, sizeof buf,
                      "sliver %d measure=%.17g cells_n=(%d,%d) cells_np1=(%d,%d)\n",
                      s.event, s.volume, s.cells_n[0], s.cells_n[1], s.cells_np1[0],
                      s.cells_np1[1]);
        out += buf;
    }
    for (std::size_t i = 0; i < tiling.faces.size(); ++i) {
        const SpaceTimeFace& f = tiling.faces[i];
        out += "face " + std::to_string(i) + " area=";
        std::snprintf(buf, sizeof buf, "%.17g", f.area);
        out += buf;
        out += " " + ref_str(f.owner) + " | " + ref_str(f.other) + "\n";
    }
}

} // namespace alevor
