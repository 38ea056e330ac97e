// Generator points: identity, position, velocity, wall pinning.
#pragma once

#include <algorithm>
#include <cstdio>
#include <vector>

#include "alevor/core.hpp"

namespace alevor {

// The id of a generator is its index; ids are stable across timesteps (the
// generator count never changes during a run).
struct GeneratorSet {
    std::vector<Vec2> position;
    std::vector<Vec2> velocity;
    std::vector<bool> is_boundary; // pinned to at least one wall
    Rect domain;

    int size() const { return static_cast<int>(position.size()); }

    // Checks the structural invariants: positions in the closed domain
    // rectangle, pairwise separation above 1e-12 * diameter, matching array
    // lengths. Throws DegenerateInput on violation.
    void validate() const {
        const std::size_t n = position.size();
        if (velocity.size() != n || is_boundary.size() != n)
            throw DegenerateInput("generator array lengths disagree");
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_finite(position[i].x) || !is_finite(position[i].y))
                throw DegenerateInput("non-finite generator position");
            if (!domain.contains(position[i]))
                throw DegenerateInput("generator outside domain rectangle (id " +
                                      std::to_string(i) + ")");
        }
        const double min_sep = 1e-12 * domain.diameter();
        // sort a copy by coordinates; near-duplicates end up adjacent in x
        std::vector<int> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (position[a].x != position[b].x) return position[a].x < position[b].x;
            return position[a].y < position[b].y;
        });
        for (std::size_t i = 0; i + 1 < n; ++i) {
            // scan forward while x-distance could still beat min_sep
            for (std::size_t j = i + 1; j < n; ++j) {
                const Vec2 a = position[order[i]];
                const Vec2 b = position[order[j]];
                if (b.x - a.x > min_sep) break;
                if ((b - a).norm() <= min_sep)
                    throw DegenerateInput("duplicate or near-duplicate generators " +
                                          std::to_string(order[i]) + "," +
                                          std::to_string(order[j]));
            }
        }
    }

    // Walls a generator is pinned to (positions exactly on the wall line).
    // Boundary generators keep their wall coordinates bit-exact while moving.
    bool on_wall(int id, Wall w) const {
        const Vec2 p = position[id];
        switch (w) {
            case Wall::XMin: return p.x == domain.xmin;
            case Wall::XMax: return p.x == domain.xmax;
            case Wall::YMin: return p.y == domain.ymin;
            case Wall::YMax: return p.y == domain.ymax;
        }
        return false;
    }

    bool on_any_wall(int id) const {
        return on_wall(id, Wall::XMin) || on_wall(id, Wall::XMax) ||
               on_wall(id, Wall::YMin) || on_wall(id, Wall::YMax);
    }

    bool is_corner(int id) const {
        const Vec2 p = position[id];
        const bool onx = p.x == domain.xmin || p.x == domain.xmax;
        const bool ony = p.y == domain.ymin || p.y == domain.ymax;
        return onx && ony;
    }
};

} // namespace alevor
