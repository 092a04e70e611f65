#pragma once

#include "apf/geometry.hpp"

namespace apf {

struct AgentState {
    Vec2 position;
    double heading = 0.0;  // psi, rad, kept in (-pi, pi]
    double roll = 0.0;     // phi, rad
    double speed = 15.0;   // constant airspeed V, m/s
};

struct VehicleLimits {
    double roll_limit = kPi / 4.0;  // max |phi|, rad
    double heading_gain = 1.2;      // commanded roll per rad of heading error
    double roll_rate_limit = 2.0;   // max |phi| slew, rad/s
    double gravity = 9.81;          // m/s^2
};

inline Vec2 velocity_of(const AgentState& s) {
    return {s.speed * std::cos(s.heading), s.speed * std::sin(s.heading)};
}

// Instant heading response: heading snaps to the command, position advances
// along it for dt. Roll is not modelled and held at zero.
AgentState step_direct(const AgentState& s, double heading_cmd, double dt);

// Coordinated-turn lateral kinematics: xdot = V cos psi, ydot = V sin psi,
// psidot = (g / V) tan phi. A proportional controller commands
// phi_c = clamp(heading_gain * wrap(cmd - psi), +-roll_limit); roll slews
// toward phi_c by at most roll_rate_limit * dt, then is held over a single
// RK4 step of the three remaining states. |roll| never exceeds roll_limit.
AgentState step_coordinated(const AgentState& s, double heading_cmd, const VehicleLimits& lim,
                            double dt);

}  // namespace apf
