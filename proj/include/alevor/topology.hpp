// Connectivity diff between two triangulations over the same generators:
// decomposes the edge-set difference into elementary 2-2 flips.
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "alevor/core.hpp"
#include "alevor/delaunay.hpp"

namespace alevor {

// One diagonal swap inside a quadrilateral of four generators.
struct TopologyEvent {
    std::array<int, 2> old_pair; // triangle indices in the old triangulation
    std::array<int, 2> new_pair; // triangle indices in the new triangulation
    std::array<int, 4> quad;     // the four generator ids, sorted
    std::pair<int, int> old_diag; // vanishing Delaunay edge (sorted)
    std::pair<int, int> new_diag; // emerging Delaunay edge (sorted)
};

namespace detail {

// undirected edge -> up to two adjacent triangle indices
inline std::map<std::pair<int, int>, std::pair<int, int>>
edge_triangles(const Triangulation& tri) {
    std::map<std::pair<int, int>, std::pair<int, int>> m;
    for (int t = 0; t < tri.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            int a = tri.tri[t][k], b = tri.tri[t][(k + 1) % 3];
            if (a > b) std::swap(a, b);
            auto [it, fresh] = m.try_emplace({a, b}, std::pair<int, int>{t, -1});
            if (!fresh) it->second.second = t;
        }
    }
    return m;
}

} // namespace detail

// Returns exactly the 2-2 flips transforming tri_n's edge set into tri_np1's
// (empty when the edge sets coincide). Throws NonElementaryChange when the
// difference is not a union of disjoint flips; the driver reacts by halving
// the timestep.
inline std::vector<TopologyEvent> diff_connectivity(const Triangulation& tri_n,
                                                    const Triangulation& tri_np1) {
    const auto e_n = tri_n.edge_set();
    const auto e_np1 = tri_np1.edge_set();

    std::vector<std::pair<int, int>> removed, added;
    std::set_difference(e_n.begin(), e_n.end(), e_np1.begin(), e_np1.end(),
                        std::back_inserter(removed));
    std::set_difference(e_np1.begin(), e_np1.end(), e_n.begin(), e_n.end(),
                        std::back_inserter(added));
    if (removed.empty() && added.empty()) return {};
    if (removed.size() != added.size())
        throw NonElementaryChange("edge-set difference is unbalanced (" +
                                  std::to_string(removed.size()) + " removed, " +
                                  std::to_string(added.size()) + " added)");

    const auto et_n = detail::edge_triangles(tri_n);
    const auto et_np1 = detail::edge_triangles(tri_np1);
    std::vector<std::pair<int, int>> added_left = added;
    std::vector<char> used_old(tri_n.size(), 0), used_new(tri_np1.size(), 0);

    std::vector<TopologyEvent> events;
    events.reserve(removed.size());
    for (const auto& diag : removed) {
        const auto it_old = et_n.find(diag);
        if (it_old == et_n.end() || it_old->second.second < 0)
            throw NonElementaryChange("removed edge is not an interior edge");
        const int t1 = it_old->second.first;
        const int t2 = it_old->second.second;
        // opposite vertices across the vanishing diagonal
        auto opposite = [&](int t) {
            for (int k = 0; k < 3; ++k) {
                const int v = tri_n.tri[t][k];
                if (v != diag.first && v != diag.second) return v;
            }
            return -1;
        };
        const int w1 = opposite(t1);
        const int w2 = opposite(t2);
        std::pair<int, int> ndiag = std::minmax(w1, w2);
        if (!std::binary_search(added.begin(), added.end(), ndiag))
            throw NonElementaryChange("flip partner edge missing from the new mesh");
        auto it_left = std::find(added_left.begin(), added_left.end(), ndiag);
        if (it_left == added_left.end())
            throw NonElementaryChange("two flips claim the same emerging edge");
        added_left.erase(it_left);

        const auto it_new = et_np1.find(ndiag);
        if (it_new == et_np1.end() || it_new->second.second < 0)
            throw NonElementaryChange("emerging edge is not interior");
        const int u1 = it_new->second.first;
        const int u2 = it_new->second.second;

        TopologyEvent ev;
        ev.old_pair = {t1, t2};
        ev.new_pair = {u1, u2};
        ev.quad = {diag.first, diag.second, w1, w2};
        std::sort(ev.quad.begin(), ev.quad.end());
        ev.old_diag = diag;
        ev.new_diag = ndiag;

        // the four generators of the new pair must coincide with the quad
        std::array<int, 4> check{};
        int idx = 0;
        for (const int t : {u1, u2})
            for (int k = 0; k < 3; ++k) {
                const int v = tri_np1.tri[t][k];
                if (std::find(check.begin(), check.begin() + idx, v) ==
                    check.begin() + idx) {
                    if (idx >= 4) throw NonElementaryChange("emerging pair spans > 4 generators");
                    check[idx++] = v;
                }
            }
        std::sort(check.begin(), check.end());
        if (idx != 4 || check != ev.quad)
            throw NonElementaryChange("flip quadrilateral mismatch");

        for (const int t : {t1, t2}) {
            if (used_old[t]) throw NonElementaryChange("overlapping flips in the old mesh");
            used_old[t] = 1;
        }
        for (const int t : {u1, u2}) {
            if (used_new[t]) throw NonElementaryChange("overlapping flips in the new mesh");
            used_new[t] = 1;
        }
        events.push_back(ev);
    }
    if (!added_left.empty())
        throw NonElementaryChange("unmatched emerging edges remain");
    return events;
}

} // namespace alevor
