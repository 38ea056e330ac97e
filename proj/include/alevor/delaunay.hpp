// Delaunay triangulation of the generator points.
//
// Incremental Bowyer-Watson inside an enclosing box of four far-away fake
// points, with exact predicates. The box keeps every insertion strictly
// interior, which removes all hull special cases; fake triangles are dropped
// at the end after verifying that no real circumdisk reaches a fake corner
// (otherwise the box is enlarged and the construction repeated).
//
// Cocircular ties are canonicalized in a deterministic post-pass: the kept
// diagonal of a cocircular quadrilateral is the one containing the smallest
// generator id, so identical generator sets always triangulate identically.
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <vector>

#include "alevor/core.hpp"
#include "alevor/generators.hpp"
#include "alevor/predicates.hpp"

namespace alevor {

// Sorted generator-id triple; the persistent identity of a Delaunay triangle
// (and of the dual vertex it induces).
struct TriKey {
    std::array<int, 3> v;

    static TriKey of(int a, int b, int c) {
        TriKey k{{a, b, c}};
        std::sort(k.v.begin(), k.v.end());
        return k;
    }
    auto operator<=>(const TriKey&) const = default;
};

struct Triangulation {
    // vertices are generator ids, counterclockwise
    std::vector<std::array<int, 3>> tri;
    // neighbor triangle index across the edge opposite vertex k; -1 on hull
    std::vector<std::array<int, 3>> adj;
    std::vector<Vec2> barycenter;
    // one incident triangle per generator (-1 if none)
    std::vector<int> vertex_tri;

    int size() const { return static_cast<int>(tri.size()); }
    TriKey key(int t) const { return TriKey::of(tri[t][0], tri[t][1], tri[t][2]); }

    int vertex_slot(int t, int g) const {
        for (int k = 0; k < 3; ++k)
            if (tri[t][k] == g) return k;
        return -1;
    }

    // Slot k whose opposite edge is the directed edge (a, b) of triangle t.
    int slot_of_edge(int t, int a, int b) const {
        for (int k = 0; k < 3; ++k)
            if (tri[t][(k + 1) % 3] == a && tri[t][(k + 2) % 3] == b) return k;
        return -1;
    }

    // Triangle adjacent to t counterclockwise around generator g.
    int next_ccw_around(int t, int g) const {
        const int k = vertex_slot(t, g);
        // edge (g, tri[(k+2)%3]) is opposite vertex (k+1)%3
        return adj[t][(k + 1) % 3];
    }
    int next_cw_around(int t, int g) const {
        const int k = vertex_slot(t, g);
        return adj[t][(k + 2) % 3];
    }

    // Sorted edge list (unique, undirected). Hull edges appear in only one
    // triangle, so every edge is normalized before deduplication.
    std::vector<std::pair<int, int>> edge_set() const {
        std::vector<std::pair<int, int>> edges;
        edges.reserve(tri.size() * 3);
        for (const auto& t : tri) {
            for (int k = 0; k < 3; ++k) {
                const auto [a, b] = std::minmax(t[k], t[(k + 1) % 3]);
                edges.emplace_back(a, b);
            }
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return edges;
    }

    // Ordered fan of triangles around generator g, counterclockwise. For an
    // interior generator the fan is a closed cycle; for a hull generator it
    // is an open chain starting at the clockwise-most triangle.
    struct Fan {
        std::vector<int> tris;
        bool closed = false;
    };

    Fan fan_around(int g) const {
        Fan f;
        int t0 = vertex_tri[g];
        if (t0 < 0) return f;
        // rewind clockwise to the chain start (or detect a closed cycle)
        int t = t0;
        for (std::size_t guard = 0; guard <= tri.size(); ++guard) {
            const int prev = next_cw_around(t, g);
            if (prev < 0) break;
            if (prev == t0) { f.closed = true; break; }
            t = prev;
        }
        const int start = f.closed ? t0 : t;
        t = start;
        for (std::size_t guard = 0; guard <= tri.size(); ++guard) {
            f.tris.push_back(t);
            const int next = next_ccw_around(t, g);
            if (next < 0 || next == start) break;
            t = next;
        }
        return f;
    }
};

namespace detail {

// Work representation during construction: vertex indices address the
// extended point array (n real points + 4 fake corners).
struct BwMesh {
    std::vector<Vec2> pts;
    int n_real = 0;
    std::vector<std::array<int, 3>> tri;
    std::vector<std::array<int, 3>> adj;
    std::vector<bool> alive;

    bool is_fake(int v) const { return v >= n_real; }

    int add_tri(int a, int b, int c) {
        tri.push_back({a, b, c});
        adj.push_back({-1, -1, -1});
        alive.push_back(true);
        return static_cast<int>(tri.size()) - 1;
    }

    int slot_of(int t, int v) const {
        for (int k = 0; k < 3; ++k)
            if (tri[t][k] == v) return k;
        return -1;
    }

    void link(int t1, int k1, int t2) {
        adj[t1][k1] = t2;
        if (t2 >= 0) {
            const int a = tri[t1][(k1 + 1) % 3];
            const int b = tri[t1][(k1 + 2) % 3];
            for (int k = 0; k < 3; ++k) {
                const int u = tri[t2][(k + 1) % 3];
                const int v = tri[t2][(k + 2) % 3];
                if ((u == b && v == a)) {
                    adj[t2][k] = t1;
                    return;
                }
            }
        }
    }

    // Visibility walk from hint to the triangle containing p (boundary
    // inclusive). Deterministic; falls back to a linear scan if the walk
    // exceeds its step budget on degenerate input.
    int locate(Vec2 p, int hint) const {
        int t = hint;
        const int budget = static_cast<int>(tri.size()) * 4 + 16;
        for (int step = 0; step < budget && t >= 0; ++step) {
            if (!alive[t]) break;
            bool moved = false;
            for (int k = 0; k < 3; ++k) {
                const Vec2 a = pts[tri[t][(k + 1) % 3]];
                const Vec2 b = pts[tri[t][(k + 2) % 3]];
                if (orient2d(a, b, p) < 0) {
                    const int nb = adj[t][k];
                    if (nb >= 0) {
                        t = nb;
                        moved = true;
                        break;
                    }
                }
            }
            if (!moved) return t;
        }
        for (int i = static_cast<int>(tri.size()) - 1; i >= 0; --i) {
            if (!alive[i]) continue;
            bool inside = true;
            for (int k = 0; k < 3 && inside; ++k) {
                const Vec2 a = pts[tri[i][(k + 1) % 3]];
                const Vec2 b = pts[tri[i][(k + 2) % 3]];
                if (orient2d(a, b, p) < 0) inside = false;
            }
            if (inside) return i;
        }
        return -1;
    }

    void insert(int vp, int& hint) {
        const Vec2 p = pts[vp];
        const int t0 = locate(p, hint);
        if (t0 < 0) throw DegenerateInput("point location failed");

        // cavity: BFS over triangles whose open circumdisk contains p
        std::vector<int> cavity;
        std::vector<int> stack{t0};
        std::vector<char> mark(tri.size(), 0);
        mark[t0] = 1;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int k = 0; k < 3; ++k) {
                const int nb = adj[t][k];
                if (nb < 0 || mark[nb]) continue;
                const auto& u = tri[nb];
                if (incircle(pts[u[0]], pts[u[1]], pts[u[2]], p) > 0) {
                    mark[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }

        // boundary edges of the cavity, directed so the cavity is on the left
        struct BEdge {
            int a, b;      // directed edge
            int outer;     // triangle outside the cavity (-1 on box hull)
            int outer_slot;
        };
        std::vector<BEdge> boundary;
        for (const int t : cavity) {
            for (int k = 0; k < 3; ++k) {
                const int nb = adj[t][k];
                if (nb >= 0 && mark[nb]) continue;
                BEdge e;
                e.a = tri[t][(k + 1) % 3];
                e.b = tri[t][(k + 2) % 3];
                e.outer = nb;
                e.outer_slot = nb >= 0 ? slot_of_edge(nb, e.b, e.a) : -1;
                boundary.push_back(e);
            }
        }
        for (const int t : cavity) alive[t] = false;

        // fan the cavity from p
        std::map<std::pair<int, int>, std::pair<int, int>> open_edges;
        for (const BEdge& e : boundary) {
            const int nt = add_tri(vp, e.a, e.b);
            if (e.outer >= 0) {
                adj[nt][0] = e.outer;
                adj[e.outer][e.outer_slot] = nt;
            }
            // internal fan edges: (vp, e.a) and (e.b, vp)
            for (int k = 1; k <= 2; ++k) {
                const int u = tri[nt][(k + 1) % 3];
                const int v = tri[nt][(k + 2) % 3];
                const auto key = std::minmax(u, v);
                auto it = open_edges.find({key.first, key.second});
                if (it == open_edges.end()) {
                    open_edges[{key.first, key.second}] = {nt, k};
                } else {
                    adj[nt][k] = it->second.first;
                    adj[it->second.first][it->second.second] = nt;
                }
            }
            hint = nt;
        }
    }

    int slot_of_edge(int t, int a, int b) const {
        for (int k = 0; k < 3; ++k)
            if (tri[t][(k + 1) % 3] == a && tri[t][(k + 2) % 3] == b) return k;
        return -1;
    }

    int size_all() const { return static_cast<int>(tri.size()); }
};

} // namespace detail

// Delaunay triangulation covering the convex hull of the generators.
// Deterministic for a fixed input ordering; cocircular ties are broken by the
// smallest-id-on-diagonal rule. Throws DegenerateInput for fewer than 3
// points, all-collinear input, or (near-)duplicate points.
inline Triangulation delaunay_triangulate(const GeneratorSet& gen) {
    const int n = gen.size();
    if (n < 3) throw DegenerateInput("need at least 3 generators");
    gen.validate();

    // bounding box of the points themselves
    double xlo = gen.position[0].x, xhi = xlo, ylo = gen.position[0].y, yhi = ylo;
    for (const Vec2 p : gen.position) {
        xlo = std::min(xlo, p.x);
        xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y);
        yhi = std::max(yhi, p.y);
    }
    const double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
    double diam = std::max({xhi - xlo, yhi - ylo, 1e-300});

    detail::BwMesh mesh;
    for (double margin = 4096.0 * diam;; margin *= 4096.0) {
        if (!std::isfinite(margin)) throw DegenerateInput("unbounded enclosing box");
        mesh = detail::BwMesh{};
        mesh.n_real = n;
        mesh.pts = gen.position;
        const int f0 = n + 0, f1 = n + 1, f2 = n + 2, f3 = n + 3;
        mesh.pts.push_back({cx - margin, cy - margin});
        mesh.pts.push_back({cx + margin, cy - margin});
        mesh.pts.push_back({cx + margin, cy + margin});
        mesh.pts.push_back({cx - margin, cy + margin});
        const int t0 = mesh.add_tri(f0, f1, f2);
        const int t1 = mesh.add_tri(f0, f2, f3);
        mesh.adj[t0] = {-1, t1, -1};
        mesh.adj[t1] = {-1, -1, t0};

        int hint = t0;
        for (int i = 0; i < n; ++i) mesh.insert(i, hint);

        // every real circumdisk must avoid the fake corners, otherwise the
        // triangulation of the real subset is not Delaunay yet
        bool clean = true;
        for (int t = 0; t < mesh.size_all() && clean; ++t) {
            if (!mesh.alive[t]) continue;
            const auto& v = mesh.tri[t];
            if (mesh.is_fake(v[0]) || mesh.is_fake(v[1]) || mesh.is_fake(v[2])) continue;
            for (int f = 0; f < 4 && clean; ++f) {
                if (incircle(mesh.pts[v[0]], mesh.pts[v[1]], mesh.pts[v[2]],
                             mesh.pts[n + f]) > 0)
                    clean = false;
            }
        }
        if (clean) break;
    }

    // extract real triangles
    Triangulation out;
    std::vector<std::array<int, 3>> real_tris;
    for (std::size_t t = 0; t < mesh.tri.size(); ++t) {
        if (!mesh.alive[t]) continue;
        const auto& v = mesh.tri[t];
        if (mesh.is_fake(v[0]) || mesh.is_fake(v[1]) || mesh.is_fake(v[2])) continue;
        real_tris.push_back(v);
    }
    if (real_tris.empty()) throw DegenerateInput("all generators collinear");

    // canonical ordering: sort by the sorted id triple, then rotate each
    // triangle so the smallest id comes first (counterclockwise preserved)
    for (auto& v : real_tris) {
        if (orient2d(gen.position[v[0]], gen.position[v[1]], gen.position[v[2]]) <= 0)
            std::swap(v[1], v[2]);
        int k = 0;
        if (v[1] < v[k]) k = 1;
        if (v[2] < v[k]) k = 2;
        std::rotate(v.begin(), v.begin() + k, v.end());
    }
    std::sort(real_tris.begin(), real_tris.end(),
              [](const auto& a, const auto& b) { return TriKey::of(a[0], a[1], a[2]) < TriKey::of(b[0], b[1], b[2]); });

    out.tri = std::move(real_tris);
    out.adj.assign(out.tri.size(), {-1, -1, -1});
    {
        std::map<std::pair<int, int>, std::pair<int, int>> half; // directed edge -> (tri, slot)
        for (std::size_t t = 0; t < out.tri.size(); ++t) {
            for (int k = 0; k < 3; ++k) {
                const int a = out.tri[t][(k + 1) % 3];
                const int b = out.tri[t][(k + 2) % 3];
                half[{a, b}] = {static_cast<int>(t), k};
            }
        }
        for (std::size_t t = 0; t < out.tri.size(); ++t) {
            for (int k = 0; k < 3; ++k) {
                const int a = out.tri[t][(k + 1) % 3];
                const int b = out.tri[t][(k + 2) % 3];
                auto it = half.find({b, a});
                if (it != half.end()) out.adj[t][k] = it->second.first;
            }
        }
    }

    // Deterministic cocircular canonicalization: the kept diagonal of a
    // cocircular quad must contain the smallest of the four ids. Also
    // legalizes any residual non-Delaunay edge (none expected). Each flip
    // introduces an edge with a strictly smaller minimum id, so the sorted
    // edge multiset decreases lexicographically and the pass terminates.
    for (int pass = 0; pass < 256; ++pass) {
        bool changed = false;
        for (int t1 = 0; t1 < out.size(); ++t1) {
            for (int k = 0; k < 3; ++k) {
                const int t2 = out.adj[t1][k];
                if (t2 < 0 || t2 < t1) continue; // each interior edge once
                const int u = out.tri[t1][(k + 1) % 3];
                const int v = out.tri[t1][(k + 2) % 3];
                const int w1 = out.tri[t1][k];
                const int s2 = out.slot_of_edge(t2, v, u);
                if (s2 < 0) continue;
                const int w2 = out.tri[t2][s2];
                const int ic = incircle(gen.position[w1], gen.position[u],
                                        gen.position[v], gen.position[w2]);
                const int mn = std::min(std::min(u, v), std::min(w1, w2));
                const bool want_flip = ic > 0 || (ic == 0 && mn != u && mn != v);
                if (!want_flip) continue;
                // flipping requires a strictly convex quad (always true when
                // w2 is inside or on the circumcircle and not collinear)
                if (orient2d(gen.position[u], gen.position[w2], gen.position[w1]) <= 0 ||
                    orient2d(gen.position[v], gen.position[w1], gen.position[w2]) <= 0)
                    continue;
                // quad CCW cycle: u -> w2 -> v -> w1; replace diagonal (u,v)
                // by (w1,w2): A=(u,w2,w1) in slot t1, B=(v,w1,w2) in slot t2
                const int n1 = out.adj[t1][out.slot_of_edge(t1, v, w1)];
                const int n2 = out.adj[t1][out.slot_of_edge(t1, w1, u)];
                const int n3 = out.adj[t2][out.slot_of_edge(t2, u, w2)];
                const int n4 = out.adj[t2][out.slot_of_edge(t2, w2, v)];
                out.tri[t1] = {u, w2, w1};
                out.adj[t1] = {t2, n2, n3};
                out.tri[t2] = {v, w1, w2};
                out.adj[t2] = {t1, n4, n1};
                auto relink = [&](int nb, int a, int b, int self) {
                    if (nb < 0) return;
                    const int s = out.slot_of_edge(nb, b, a);
                    if (s >= 0) out.adj[nb][s] = self;
                };
                relink(n1, v, w1, t2);  // n1 sees directed edge (w1, v)
                relink(n2, w1, u, t1);  // n2 sees (u, w1)
                relink(n3, u, w2, t1);  // n3 sees (w2, u)
                relink(n4, w2, v, t2);  // n4 sees (v, w2)
                changed = true;
            }
        }
        if (!changed) break;
    }

    out.barycenter.resize(out.size());
    for (int t = 0; t < out.size(); ++t) {
        const auto& v = out.tri[t];
        out.barycenter[t] = (gen.position[v[0]] + gen.position[v[1]] + gen.position[v[2]]) / 3.0;
    }
    out.vertex_tri.assign(n, -1);
    for (int t = 0; t < out.size(); ++t)
        for (int k = 0; k < 3; ++k) out.vertex_tri[out.tri[t][k]] = t;
    return out;
}

} // namespace alevor
