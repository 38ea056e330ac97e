// Governing-system interface and its Euler instantiation.
//
// The scheme is generic over a Model type providing the members used below
// (variable count, flux, nonconservative matrix, source, wavespeed bound,
// admissibility). Euler specializes the general form with B = 0 and S = 0 at
// compile time; the path-conservative terms stay in the numerical flux for
// models that carry them.
#pragma once

#include <array>
#include <cmath>

#include "alevor/core.hpp"

namespace alevor {

// Conserved variables (rho, rho u, rho v, rho E).
using ConservedState = std::array<double, 4>;

inline ConservedState operator+(const ConservedState& a, const ConservedState& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline ConservedState operator-(const ConservedState& a, const ConservedState& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline ConservedState operator*(double s, const ConservedState& a) {
    return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

struct EulerModel {
    static constexpr int n_vars = 4;
    static constexpr bool has_nonconservative = false;
    static constexpr bool has_source = false;

    double gamma = 7.0 / 5.0;

    static ConservedState from_primitive_impl(double rho, double u, double v, double p,
                                              double gamma) {
        return {rho, rho * u, rho * v, p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)};
    }
    ConservedState from_primitive(double rho, double u, double v, double p) const {
        return from_primitive_impl(rho, u, v, p, gamma);
    }

    // p = (gamma - 1)(rho E - rho |v|^2 / 2). The returned pressure may be
    // non-positive; admissibility is the caller's decision.
    double pressure(const ConservedState& q) const {
        if (!(q[0] > 0.0)) throw NonPhysical("pressure of state with rho <= 0");
        return (gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0]);
    }

    double sound_speed(const ConservedState& q) const {
        const double p = pressure(q);
        if (!(p > 0.0)) throw NonPhysical("sound speed of state with p <= 0");
        return std::sqrt(gamma * p / q[0]);
    }

    bool admissible(const ConservedState& q) const {
        for (const double v : q)
            if (!is_finite(v)) return false;
        if (!(q[0] > 0.0)) return false;
        return (gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0]) > 0.0;
    }

    // physical flux; columns F_x, F_y as functions of the conserved state
    void flux(const ConservedState& q, ConservedState& fx, ConservedState& fy) const {
        const double rho = q[0];
        if (!(rho > 0.0)) throw NonPhysical("flux of state with rho <= 0");
        const double u = q[1] / rho;
        const double v = q[2] / rho;
        const double p = (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v));
        fx = {q[1], q[1] * u + p, q[2] * u, u * (q[3] + p)};
        fy = {q[2], q[1] * v, q[2] * v + p, v * (q[3] + p)};
    }

    // Jacobian of the direction-n flux, dF.n/dQ (standard ideal-gas form).
    void flux_jacobian(const ConservedState& q, Vec2 n,
                       std::array<std::array<double, 4>, 4>& a) const {
        const double rho = q[0];
        const double u = q[1] / rho;
        const double v = q[2] / rho;
        const double un = u * n.x + v * n.y;
        const double g1 = gamma - 1.0;
        const double phi2 = 0.5 * g1 * (u * u + v * v);
        const double p = g1 * (q[3] - 0.5 * rho * (u * u + v * v));
        const double H = (q[3] + p) / rho;
        a[0] = {0.0, n.x, n.y, 0.0};
        a[1] = {phi2 * n.x - u * un, un - g1 * u * n.x + u * n.x, u * n.y - g1 * v * n.x,
                g1 * n.x};
        a[2] = {phi2 * n.y - v * un, v * n.x - g1 * u * n.y, un - g1 * v * n.y + v * n.y,
                g1 * n.y};
        a[3] = {(phi2 - H) * un, H * n.x - g1 * u * un, H * n.y - g1 * v * un,
                gamma * un};
    }

    // nonconservative matrix B(Q).n (identically zero for Euler)
    void noncons_matrix(const ConservedState&, Vec2,
                        std::array<std::array<double, 4>, 4>& b) const {
        for (auto& row : b) row = {0.0, 0.0, 0.0, 0.0};
    }

    ConservedState source(const ConservedState&) const { return {0.0, 0.0, 0.0, 0.0}; }

    // ALE wavespeeds {w-c, w, w, w+c} with w = u.n - Vn.
    std::array<double, 4> ale_eigenvalues(const ConservedState& q, Vec2 n,
                                          double vn) const {
        const double c = sound_speed(q);
        const double w = (q[1] * n.x + q[2] * n.y) / q[0] - vn;
        return {w - c, w, w, w + c};
    }

    double max_abs_eigenvalue(const ConservedState& q, Vec2 n, double vn) const {
        const double c = sound_speed(q);
        const double w = (q[1] * n.x + q[2] * n.y) / q[0] - vn;
        return std::abs(w) + c;
    }
};

// Largest ALE wavespeed magnitude over the two interface states (the s_max
// of the Rusanov flux).
template <typename Model>
double ale_smax(const Model& model, const ConservedState& qm, const ConservedState& qp,
                Vec2 n_unit, double vn) {
    return std::max(model.max_abs_eigenvalue(qm, n_unit, vn),
                    model.max_abs_eigenvalue(qp, n_unit, vn));
}

// Path-conservative Rusanov flux across a space-time face with unit normal
// n_st = (n_x, n_y, n_t). Returns the full contraction F~ . n_st including
// the temporal component (F~ = (F, Q)), the |n_sp|-scaled dissipation, and,
// for models with nonconservative products, the segment-path integral by
// 3-point Gauss-Legendre.
template <typename Model>
ConservedState rusanov_ale_flux(const Model& model, const ConservedState& qm,
                                const ConservedState& qp, Vec3 n_st) {
    const Vec2 nsp{n_st.x, n_st.y};
    const double a = nsp.norm();
    ConservedState fxm, fym, fxp, fyp;
    model.flux(qm, fxm, fym);
    model.flux(qp, fxp, fyp);

    ConservedState out;
    for (int k = 0; k < 4; ++k)
        out[k] = 0.5 * ((fxm[k] + fxp[k]) * n_st.x + (fym[k] + fyp[k]) * n_st.y +
                        (qm[k] + qp[k]) * n_st.t);

    if (a > 0.0) {
        const Vec2 n_unit = nsp / a;
        const double vn = -n_st.t / a;
        const double smax = ale_smax(model, qm, qp, n_unit, vn);
        for (int k = 0; k < 4; ++k) out[k] -= 0.5 * a * smax * (qp[k] - qm[k]);

        if constexpr (Model::has_nonconservative) {
            // straight-line segment path, 3-point Gauss-Legendre in s
            static constexpr double s_pts[3] = {0.1127016653792583, 0.5,
                                                0.8872983346207417};
            static constexpr double s_wts[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
            std::array<std::array<double, 4>, 4> b{}, bsum{};
            for (auto& row : bsum) row = {0, 0, 0, 0};
            for (int g = 0; g < 3; ++g) {
                ConservedState psi;
                for (int k = 0; k < 4; ++k) psi[k] = qm[k] + s_pts[g] * (qp[k] - qm[k]);
                model.noncons_matrix(psi, nsp, b);
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) bsum[r][c] += s_wts[g] * b[r][c];
            }
            for (int r = 0; r < 4; ++r) {
                double acc = 0.0;
                for (int c = 0; c < 4; ++c) acc += bsum[r][c] * (qp[c] - qm[c]);
                out[r] += 0.5 * acc;
            }
        }
    }
    return out;
}

// Exact space-time flux contraction for a single state (used for
// consistency checks and wall bookkeeping).
template <typename Model>
ConservedState spacetime_flux_dot(const Model& model, const ConservedState& q, Vec3 n_st) {
    ConservedState fx, fy;
    model.flux(q, fx, fy);
    ConservedState out;
    for (int k = 0; k < 4; ++k)
        out[k] = fx[k] * n_st.x + fy[k] * n_st.y + q[k] * n_st.t;
    return out;
}

} // namespace alevor
