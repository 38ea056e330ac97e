// Quasi-uniform generator layouts for the bundled benchmarks: a rectangular
// lattice with pinned wall chains (corners included) and deterministic
// interior jitter.
#pragma once

#include <cmath>

#include "alevor/core.hpp"
#include "alevor/generators.hpp"

namespace alevor {

// (nx+1) x (ny+1) lattice on the domain; boundary rows are pinned to the
// walls, interior points get `jitter` * spacing of hash-based displacement.
inline GeneratorSet make_lattice_generators(const Rect& domain, int nx, int ny,
                                            double jitter = 0.0,
                                            std::uint64_t seed = 0) {
    if (nx < 2 || ny < 2) throw DegenerateInput("lattice needs nx, ny >= 2");
    GeneratorSet gen;
    gen.domain = domain;
    const double dx = domain.width() / nx;
    const double dy = domain.height() / ny;
    const double amp = jitter * std::min(dx, dy);
    int id = 0;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i, ++id) {
            const bool bnd = i == 0 || i == nx || j == 0 || j == ny;
            Vec2 p{domain.xmin + i * dx, domain.ymin + j * dy};
            if (i == nx) p.x = domain.xmax; // exact wall coordinates
            if (j == ny) p.y = domain.ymax;
            if (!bnd && amp > 0.0) {
                p.x += amp * (2.0 * hash_unit(seed, 2 * id) - 1.0);
                p.y += amp * (2.0 * hash_unit(seed, 2 * id + 1) - 1.0);
            }
            gen.position.push_back(p);
            gen.velocity.push_back({0.0, 0.0});
            gen.is_boundary.push_back(bnd);
        }
    }
    return gen;
}

// Lattice sized so cells come out roughly square with spacing ~s.
inline GeneratorSet make_lattice_by_spacing(const Rect& domain, double s,
                                            double jitter = 0.0,
                                            std::uint64_t seed = 0) {
    const int nx = std::max(2, static_cast<int>(std::lround(domain.width() / s)));
    const int ny = std::max(2, static_cast<int>(std::lround(domain.height() / s)));
    return make_lattice_generators(domain, nx, ny, jitter, seed);
}

} // namespace alevor
