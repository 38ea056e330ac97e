// Core value types and error taxonomy shared by every module.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace alevor {

// ---------------------------------------------------------------------------
// Small vectors
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Vec2&) const = default;

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Point or direction in space-time (x, y, t).
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double t_) : x(x_), y(y_), t(t_) {}
    constexpr Vec3(Vec2 p, double t_) : x(p.x), y(p.y), t(t_) {}

    Vec2 spatial() const { return {x, y}; }
    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, t + o.t}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, t - o.t}; }
    Vec3 operator*(double s) const { return {x * s, y * s, t * s}; }
    bool operator==(const Vec3&) const = default;

    double dot(Vec3 o) const { return x * o.x + y * o.y + t * o.t; }
    Vec3 cross(Vec3 o) const {
        return {y * o.t - t * o.y, t * o.x - x * o.t, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + t * t); }
};

inline Vec3 operator*(double s, Vec3 v) { return v * s; }

// Axis-aligned domain rectangle.
struct Rect {
    double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    double diameter() const { return std::hypot(width(), height()); }
    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    Rect shifted(Vec2 d) const {
        return {xmin + d.x, ymin + d.y, xmax + d.x, ymax + d.y};
    }
};

// Walls of the rectangle, used as boundary tags. Order matters for output.
enum class Wall : int { XMin = 0, XMax = 1, YMin = 2, YMax = 3 };

inline Vec2 wall_normal(Wall w) {
    switch (w) {
        case Wall::XMin: return {-1.0, 0.0};
        case Wall::XMax: return {1.0, 0.0};
        case Wall::YMin: return {0.0, -1.0};
        case Wall::YMax: return {0.0, 1.0};
    }
    return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define ALEVOR_DEFINE_ERROR(Name)                                   \
    struct Name : Error {                                           \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

ALEVOR_DEFINE_ERROR(DegenerateInput);
ALEVOR_DEFINE_ERROR(OpenCell);
ALEVOR_DEFINE_ERROR(NonElementaryChange);
ALEVOR_DEFINE_ERROR(MeshTangling);
ALEVOR_DEFINE_ERROR(TilingGap);
ALEVOR_DEFINE_ERROR(UnsupportedDegree);
ALEVOR_DEFINE_ERROR(NonPhysical);
ALEVOR_DEFINE_ERROR(SingularMassMatrix);
ALEVOR_DEFINE_ERROR(PredictorDiverged);
ALEVOR_DEFINE_ERROR(FallbackFailure);
ALEVOR_DEFINE_ERROR(VanishingDt);
ALEVOR_DEFINE_ERROR(FixedTopologyViolation);
ALEVOR_DEFINE_ERROR(NoOriginCell);
ALEVOR_DEFINE_ERROR(NoExactSolution);
ALEVOR_DEFINE_ERROR(RankDeficient);
ALEVOR_DEFINE_ERROR(ParseError);
ALEVOR_DEFINE_ERROR(ValidationError);
ALEVOR_DEFINE_ERROR(IoError);

#undef ALEVOR_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

inline bool is_finite(double v) { return std::isfinite(v); }

template <typename T>
T clamp(T v, T lo, T hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

// SplitMix64; used wherever deterministic pseudo-random numbers are needed so
// results never depend on platform RNG state.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0,1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }
    // Uniform in [a,b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }
};

// Deterministic per-key hash stream, independent of call order.
inline double hash_unit(std::uint64_t seed, std::uint64_t key) {
    SplitMix64 rng(seed ^ (0x632be59bd9b4e019ULL * (key + 1)));
    rng.next_u64();
    return rng.next_double();
}

} // namespace alevor
