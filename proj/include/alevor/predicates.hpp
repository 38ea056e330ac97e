// Robust 2D geometric predicates: orientation and in-circle with exact sign.
//
// Fast floating-point evaluation with a forward error bound decides the
// common case; near-degenerate inputs fall back to exact rational
// arithmetic (doubles convert to rationals exactly, so the fallback sign is
// the true sign). Flip detection across timesteps is meaningless without
// consistent predicates, hence the exact branch.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "alevor/core.hpp"

namespace alevor {

namespace detail {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = 1.1102230246251565e-16; // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

inline int sign_of(const Rational& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

inline int orient2d_exact(Vec2 a, Vec2 b, Vec2 c) {
    const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    const Rational det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
    return sign_of(det);
}

inline int incircle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const Rational adx = Rational(a.x) - Rational(d.x);
    const Rational ady = Rational(a.y) - Rational(d.y);
    const Rational bdx = Rational(b.x) - Rational(d.x);
    const Rational bdy = Rational(b.y) - Rational(d.y);
    const Rational cdx = Rational(c.x) - Rational(d.x);
    const Rational cdy = Rational(c.y) - Rational(d.y);
    const Rational det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
                         (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
                         (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
    return sign_of(det);
}

} // namespace detail

// Sign of the signed area of triangle (a,b,c): +1 counterclockwise,
// -1 clockwise, 0 collinear.
inline int orient2d(Vec2 a, Vec2 b, Vec2 c) {
    const double detl = (a.x - c.x) * (b.y - c.y);
    const double detr = (a.y - c.y) * (b.x - c.x);
    const double det = detl - detr;
    const double mag = std::abs(detl) + std::abs(detr);
    if (std::abs(det) > detail::kOrientBound * mag) return det > 0 ? 1 : -1;
    return detail::orient2d_exact(a, b, c);
}

// +1 iff d lies strictly inside the circumcircle of the counterclockwise
// triangle (a,b,c), -1 strictly outside, 0 exactly on the circle.
inline int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    if (std::abs(det) > detail::kIncircleBound * permanent) return det > 0 ? 1 : -1;
    return detail::incircle_exact(a, b, c, d);
}

// Exact signed-area sign with the collinear case distinguished; convenience
// wrapper used by polygon code.
inline double signed_area(Vec2 a, Vec2 b, Vec2 c) {
    return 0.5 * ((b - a).cross(c - a));
}

} // namespace alevor
