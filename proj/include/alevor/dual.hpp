// Centroid-based dual tessellation of the Delaunay triangulation.
//
// Interior dual vertices are triangle barycenters, ordered counterclockwise
// around each generator. Cells of wall generators are closed with the
// midpoints of the wall edges adjacent to the generator (plus the domain
// corner for corner generators), which keeps wall faces exactly on the wall
// and makes the cells an exact partition of the rectangle. Every dual vertex
// carries its provenance key so vertices can be matched across timesteps.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "alevor/core.hpp"
#include "alevor/delaunay.hpp"
#include "alevor/generators.hpp"

namespace alevor {

struct DualVertexKey {
    enum class Kind : std::uint8_t { TriangleBary = 0, WallMid = 1, Corner = 2 };
    Kind kind = Kind::TriangleBary;
    std::array<int, 3> id{-1, -1, -1};

    static DualVertexKey bary(TriKey k) { return {Kind::TriangleBary, k.v}; }
    static DualVertexKey wall_mid(int a, int b, Wall w) {
        if (a > b) std::swap(a, b);
        return {Kind::WallMid, {a, b, static_cast<int>(w)}};
    }
    static DualVertexKey corner(int c) { return {Kind::Corner, {c, -1, -1}}; }

    auto operator<=>(const DualVertexKey&) const = default;
};

// Neighbor encoding on cell edges: >= 0 is a cell id, negative values encode
// the wall: -1 - (int)Wall.
inline int encode_wall(Wall w) { return -1 - static_cast<int>(w); }
inline bool edge_is_wall(int neighbor) { return neighbor < 0; }
inline Wall decode_wall(int neighbor) { return static_cast<Wall>(-1 - neighbor); }

struct Cell {
    std::vector<Vec2> verts;          // counterclockwise, simple polygon
    std::vector<DualVertexKey> keys;  // provenance per vertex
    std::vector<int> neighbor;        // per edge verts[i] -> verts[i+1]
    double area = 0.0;
    double diameter = 0.0;
    double inradius = 0.0;
    Vec2 centroid;

    int n_vertices() const { return static_cast<int>(verts.size()); }
};

struct Tessellation {
    std::vector<Cell> cells; // indexed by generator id
    Rect domain;
    double h = 0.0;          // max cell diameter
    double total_area = 0.0;

    int size() const { return static_cast<int>(cells.size()); }
};

namespace detail {

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    const double s = clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * s)).norm();
}

inline void finish_cell_metrics(Cell& c) {
    const int n = c.n_vertices();
    double a2 = 0.0;
    Vec2 cm{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const Vec2 p = c.verts[i];
        const Vec2 q = c.verts[(i + 1) % n];
        const double cr = p.cross(q);
        a2 += cr;
        cm += (p + q) * cr;
    }
    c.area = 0.5 * a2;
    c.centroid = c.area != 0.0 ? cm / (3.0 * a2) : c.verts[0];
    c.diameter = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            c.diameter = std::max(c.diameter, (c.verts[i] - c.verts[j]).norm());
    c.inradius = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i)
        c.inradius = std::min(c.inradius, point_segment_distance(
                                              c.centroid, c.verts[i], c.verts[(i + 1) % n]));
}

inline Wall wall_of_edge(const GeneratorSet& gen, int a, int b) {
    for (int w = 0; w < 4; ++w) {
        const Wall wall = static_cast<Wall>(w);
        if (gen.on_wall(a, wall) && gen.on_wall(b, wall)) return wall;
    }
    throw OpenCell("hull edge (" + std::to_string(a) + "," + std::to_string(b) +
                   ") does not lie on a wall");
}

inline int corner_index(const Rect& d, Vec2 p) {
    if (p.x == d.xmin && p.y == d.ymin) return 0;
    if (p.x == d.xmax && p.y == d.ymin) return 1;
    if (p.x == d.xmax && p.y == d.ymax) return 2;
    if (p.x == d.xmin && p.y == d.ymax) return 3;
    return -1;
}

} // namespace detail

// Builds the dual tessellation: one cell per generator. With validate=true
// (the Delaunay path) positivity of cell areas and the exact area partition
// are enforced; fixed-topology stepping passes validate=false and relies on
// the space-time Jacobian checks to detect tangling.
inline Tessellation dual_tessellation(const Triangulation& tri, const GeneratorSet& gen,
                                      const Rect& domain, bool validate = true) {
    Tessellation tess;
    tess.domain = domain;
    tess.cells.resize(gen.size());

    for (int g = 0; g < gen.size(); ++g) {
        Cell& cell = tess.cells[g];
        const Triangulation::Fan fan = tri.fan_around(g);
        if (fan.tris.empty()) throw OpenCell("generator " + std::to_string(g) +
                                             " belongs to no triangle");

        if (fan.closed) {
            const int k = static_cast<int>(fan.tris.size());
            cell.verts.reserve(k);
            for (const int t : fan.tris) {
                cell.verts.push_back(tri.barycenter[t]);
                cell.keys.push_back(DualVertexKey::bary(tri.key(t)));
            }
            // edge between consecutive barycenters crosses Delaunay edge (g, x)
            cell.neighbor.resize(k);
            for (int i = 0; i < k; ++i) {
                const int t = fan.tris[i];
                const int s = tri.vertex_slot(t, g);
                cell.neighbor[i] = tri.tri[t][(s + 2) % 3]; // ccw crossing vertex
            }
        } else {
            if (!gen.on_any_wall(g))
                throw OpenCell("interior generator " + std::to_string(g) +
                               " has an open triangle fan");
            const int t_first = fan.tris.front();
            const int t_last = fan.tris.back();
            const int k_first = tri.vertex_slot(t_first, g);
            const int k_last = tri.vertex_slot(t_last, g);
            // hull edge on the clockwise side of the chain is (g, a_start)
            const int a_start = tri.tri[t_first][(k_first + 1) % 3];
            const int a_end = tri.tri[t_last][(k_last + 2) % 3];
            const Wall w_start = detail::wall_of_edge(gen, g, a_start);
            const Wall w_end = detail::wall_of_edge(gen, g, a_end);

            const Vec2 m_start = (gen.position[g] + gen.position[a_start]) * 0.5;
            const Vec2 m_end = (gen.position[g] + gen.position[a_end]) * 0.5;

            cell.verts.push_back(m_start);
            cell.keys.push_back(DualVertexKey::wall_mid(g, a_start, w_start));
            cell.neighbor.push_back(a_start);
            for (std::size_t i = 0; i < fan.tris.size(); ++i) {
                const int t = fan.tris[i];
                cell.verts.push_back(tri.barycenter[t]);
                cell.keys.push_back(DualVertexKey::bary(tri.key(t)));
                const int s = tri.vertex_slot(t, g);
                cell.neighbor.push_back(tri.tri[t][(s + 2) % 3]);
            }
            // last barycenter connects to the end midpoint across (g, a_end)
            cell.neighbor.back() = a_end;
            cell.verts.push_back(m_end);
            cell.keys.push_back(DualVertexKey::wall_mid(g, a_end, w_end));

            if (w_start == w_end) {
                cell.neighbor.push_back(encode_wall(w_end)); // m_end -> m_start
            } else {
                const int ci = detail::corner_index(domain, gen.position[g]);
                if (ci < 0)
                    throw OpenCell("generator " + std::to_string(g) +
                                   " spans two walls but is not a corner");
                cell.neighbor.push_back(encode_wall(w_end)); // m_end -> corner
                cell.verts.push_back(gen.position[g]);
                cell.keys.push_back(DualVertexKey::corner(ci));
                cell.neighbor.push_back(encode_wall(w_start)); // corner -> m_start
            }
        }

        detail::finish_cell_metrics(cell);
        if (validate && !(cell.area > 0.0))
            throw OpenCell("cell " + std::to_string(g) + " has non-positive area");
    }

    tess.h = 0.0;
    tess.total_area = 0.0;
    for (const Cell& c : tess.cells) {
        tess.h = std::max(tess.h, c.diameter);
        tess.total_area += c.area;
    }
    if (validate) {
        const double defect = std::abs(tess.total_area - domain.area()) / domain.area();
        if (defect > 1e-9)
            throw OpenCell("cells do not partition the domain (relative defect " +
                           std::to_string(defect) + ")");
    }
    return tess;
}

// ---------------------------------------------------------------------------
// Mesh quality report
// ---------------------------------------------------------------------------

struct QualityReport {
    std::vector<double> aspect; // per-cell diameter / inradius
    double min_edge_length = 0.0;
    double min_aspect = 0.0;
    double max_aspect = 0.0;
    double mean_aspect = 0.0;
};

inline QualityReport mesh_quality(const Tessellation& tess) {
    QualityReport q;
    q.aspect.reserve(tess.size());
    q.min_edge_length = std::numeric_limits<double>::max();
    double sum = 0.0;
    for (const Cell& c : tess.cells) {
        const double a = c.inradius > 0.0 ? c.diameter / c.inradius
                                          : std::numeric_limits<double>::infinity();
        q.aspect.push_back(a);
        sum += a;
        const int n = c.n_vertices();
        for (int i = 0; i < n; ++i) {
            const double len = (c.verts[(i + 1) % n] - c.verts[i]).norm();
            if (len > 0.0) q.min_edge_length = std::min(q.min_edge_length, len);
        }
    }
    if (!q.aspect.empty()) {
        q.min_aspect = *std::min_element(q.aspect.begin(), q.aspect.end());
        q.max_aspect = *std::max_element(q.aspect.begin(), q.aspect.end());
        q.mean_aspect = sum / static_cast<double>(q.aspect.size());
    }
    return q;
}

} // namespace alevor
