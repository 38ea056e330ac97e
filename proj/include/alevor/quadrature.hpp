// Quadrature rules: Gauss-Legendre on [0,1], symmetric triangle rules, and
// collapsed (Duffy) tensor rules on triangles and tetrahedra.
//
// Conventions: reference triangle {x,y >= 0, x+y <= 1} with weights summing
// to 1/2; reference tetrahedron {x,y,z >= 0, x+y+z <= 1} with weights summing
// to 1/6. A physical integral is then |J| * sum(w_q f(x_q)) with J the affine
// Jacobian determinant (2*area resp. 6*volume).
#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "alevor/core.hpp"

namespace alevor {

struct GaussRule {
    std::vector<double> x; // nodes in [0,1]
    std::vector<double> w; // weights summing to 1
};

namespace detail {

// Newton iteration on Legendre polynomials; accurate to ~1e-15 for the small
// point counts used here.
inline GaussRule make_gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        // recompute derivative at the converged node
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        r.x[n - 1 - i] = 0.5 * (1.0 + t);
        r.w[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    return r;
}

} // namespace detail

// Cached Gauss-Legendre rule on [0,1], exact for polynomials of degree 2n-1.
inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::make_gauss_legendre(n)).first;
    return it->second;
}

struct TriangleRule {
    std::vector<Vec2> pts;
    std::vector<double> w; // sums to 1/2
};

struct TetRule {
    std::vector<Vec3> pts;
    std::vector<double> w; // sums to 1/6
};

namespace detail {

inline void push_orbit3(TriangleRule& r, double a, double weight) {
    // permutations of barycentric (a, a, 1-2a); weight given per point in
    // area-normalized form (sums to 1), scaled to reference measure 1/2.
    const double b = 1.0 - 2.0 * a;
    r.pts.push_back({a, a});
    r.pts.push_back({a, b});
    r.pts.push_back({b, a});
    for (int i = 0; i < 3; ++i) r.w.push_back(0.5 * weight);
}

inline TriangleRule make_triangle_tabulated(int degree) {
    TriangleRule r;
    if (degree <= 1) {
        r.pts.push_back({1.0 / 3.0, 1.0 / 3.0});
        r.w.push_back(0.5);
    } else if (degree <= 2) {
        push_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    } else if (degree <= 4) {
        push_orbit3(r, 0.445948490915965, 0.223381589678011);
        push_orbit3(r, 0.091576213509771, 0.109951743655322);
    } else { // degree 5
        r.pts.push_back({1.0 / 3.0, 1.0 / 3.0});
        r.w.push_back(0.5 * 0.225);
        push_orbit3(r, 0.470142064105115, 0.132394152788506);
        push_orbit3(r, 0.101286507323456, 0.125939180544827);
    }
    return r;
}

// Collapsed tensor rule; exact for any total degree <= d, positive weights.
inline TriangleRule make_triangle_duffy(int d) {
    TriangleRule r;
    const GaussRule& gu = gauss_legendre((d + 3) / 2);
    const GaussRule& gv = gauss_legendre((d + 2) / 2);
    for (std::size_t i = 0; i < gu.x.size(); ++i) {
        for (std::size_t j = 0; j < gv.x.size(); ++j) {
            const double u = gu.x[i], v = gv.x[j];
            r.pts.push_back({u, v * (1.0 - u)});
            r.w.push_back(gu.w[i] * gv.w[j] * (1.0 - u));
        }
    }
    return r;
}

inline TetRule make_tet_duffy(int d) {
    TetRule r;
    const GaussRule& gu = gauss_legendre((d + 4) / 2);
    const GaussRule& gv = gauss_legendre((d + 3) / 2);
    const GaussRule& gw = gauss_legendre((d + 2) / 2);
    for (std::size_t i = 0; i < gu.x.size(); ++i) {
        for (std::size_t j = 0; j < gv.x.size(); ++j) {
            for (std::size_t k = 0; k < gw.x.size(); ++k) {
                const double u = gu.x[i], v = gv.x[j], w = gw.x[k];
                const double e = v * (1.0 - u);
                const double z = w * (1.0 - u) * (1.0 - v);
                r.pts.push_back({u, e, z});
                r.w.push_back(gu.w[i] * gv.w[j] * gw.w[k] * (1.0 - u) * (1.0 - u) * (1.0 - v));
            }
        }
    }
    return r;
}

} // namespace detail

// Triangle rule exact to total degree `degree` (tabulated symmetric rules up
// to degree 5, collapsed tensor rules beyond). All weights positive.
inline const TriangleRule& triangle_rule(int degree) {
    static std::map<int, TriangleRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(degree);
    if (it == cache.end()) {
        TriangleRule r = degree <= 5 ? detail::make_triangle_tabulated(degree)
                                     : detail::make_triangle_duffy(degree);
        it = cache.emplace(degree, std::move(r)).first;
    }
    return it->second;
}

// Tetrahedron rule exact to total degree `degree`, positive weights.
inline const TetRule& tet_rule(int degree) {
    static std::map<int, TetRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(degree);
    if (it == cache.end()) it = cache.emplace(degree, detail::make_tet_duffy(degree)).first;
    return it->second;
}

} // namespace alevor
