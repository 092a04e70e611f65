#pragma once

#include <cmath>
#include <numbers>

namespace apf {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(const Vec2& v, double s) { return {s * v.x, s * v.y}; }
inline Vec2& operator+=(Vec2& a, const Vec2& b) { a.x += b.x; a.y += b.y; return a; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm_sq(const Vec2& v) { return v.x * v.x + v.y * v.y; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

// Normalized representative in the half-open interval (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) {
        a += 2.0 * kPi;
    } else if (a > kPi) {
        a -= 2.0 * kPi;
    }
    return a;
}

// Counterclockwise rotation by theta.
inline Vec2 rotate(const Vec2& v, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {v.x * c - v.y * s, v.x * s + v.y * c};
}

// Coordinates of a world-frame displacement in the obstacle ellipse frame:
// X runs along the relative-velocity direction theta, Y completes the pair.
// The matrix [[c, s], [s, -c]] is symmetric and involutory, so applying the
// same map to a frame vector returns it to world coordinates.
inline Vec2 to_obstacle_frame(const Vec2& delta, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {delta.x * c + delta.y * s, delta.x * s - delta.y * c};
}

struct RelativeVelocity {
    Vec2 v;                   // agent velocity minus obstacle velocity
    double theta = 0.0;       // direction of v, in (-pi, pi]; 0 when degenerate
    bool degenerate = false;  // |v| below 1e-9, direction undefined
};

inline RelativeVelocity relative_velocity(const Vec2& agent_vel, const Vec2& obstacle_vel) {
    RelativeVelocity r;
    r.v = agent_vel - obstacle_vel;
    if (norm(r.v) < 1e-9) {
        r.theta = 0.0;
        r.degenerate = true;
    } else {
        r.theta = wrap_angle(std::atan2(r.v.y, r.v.x));
    }
    return r;
}

}  // namespace apf
