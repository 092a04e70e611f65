#include "apf/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace apf {

AgentState step_direct(const AgentState& s, double heading_cmd, double dt) {
    AgentState n = s;
    n.heading = wrap_angle(heading_cmd);
    n.roll = 0.0;
    n.position.x += s.speed * std::cos(n.heading) * dt;
    n.position.y += s.speed * std::sin(n.heading) * dt;
    return n;
}

AgentState step_coordinated(const AgentState& s, double heading_cmd, const VehicleLimits& lim,
                            double dt) {
    AgentState n = s;

    const double err = wrap_angle(heading_cmd - s.heading);
    const double phi_c = std::clamp(lim.heading_gain * err, -lim.roll_limit, lim.roll_limit);
    const double slew = lim.roll_rate_limit * dt;
    n.roll = s.roll + std::clamp(phi_c - s.roll, -slew, slew);

    // Roll is held over the step, so psidot is constant and the step is a
    // circular arc; RK4 integrates (x, y, psi) through it.
    const double V = s.speed;
    const double psidot = lim.gravity / V * std::tan(n.roll);

    const double k1 = s.heading;
    const double k2 = s.heading + 0.5 * dt * psidot;
    const double k3 = k2;
    const double k4 = s.heading + dt * psidot;

    n.position.x += V * dt / 6.0 * (std::cos(k1) + 2.0 * std::cos(k2) + 2.0 * std::cos(k3) + std::cos(k4));
    n.position.y += V * dt / 6.0 * (std::sin(k1) + 2.0 * std::sin(k2) + 2.0 * std::sin(k3) + std::sin(k4));
    n.heading = wrap_angle(s.heading + dt * psidot);
    return n;
}

}  // namespace apf
