#include "apf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apf {

double attractive_potential(const Vec2& pos, const Vec2& goal, double k_att) {
    return k_att * norm_sq(pos - goal);
}

Vec2 attractive_force(const Vec2& pos, const Vec2& goal, double k_att) {
    return 2.0 * k_att * (goal - pos);
}

RepulsiveParams adaptive_params(const Vec2& agent_pos, const Vec2& agent_vel,
                                const ObstacleSpec& obs, const FieldGains& gains) {
    const Vec2 los = obs.position - agent_pos;
    const double dist = norm(los);
    if (dist < 1e-9) {
        throw std::domain_error("obstacle-coincident");
    }
    const RelativeVelocity rel = relative_velocity(agent_vel, obs.velocity);
    double xi = 0.0;
    if (!rel.degenerate) {
        xi = dot(los, rel.v) / (dist * norm(rel.v));
        xi = std::clamp(xi, -1.0, 1.0);
    }
    RepulsiveParams p;
    p.xi = xi;
    p.theta = rel.theta;
    p.k_rep = gains.k_rep0 * (std::sin(kPi * xi / 2.0) + 1.0);
    p.a = obs.b * (gains.axis_offset + xi);
    return p;
}

double repulsive_potential(const Vec2& pos, const RepulsiveParams& p, const ObstacleSpec& obs) {
    const Vec2 q = to_obstacle_frame(pos - obs.position, p.theta);
    const double sx = q.x / p.a;
    const double sy = q.y / obs.b;
    return p.k_rep / (1.0 + sx * sx + sy * sy);
}

Vec2 repulsive_force(const Vec2& pos, const RepulsiveParams& p, const ObstacleSpec& obs,
                     double gamma) {
    const Vec2 q = to_obstacle_frame(pos - obs.position, p.theta);
    const double sx = q.x / p.a;
    const double sy = q.y / obs.b;
    const double u = 1.0 + gamma * (sx * sx + sy * sy);
    const double mag = 2.0 * p.k_rep / (u * u);
    // Gradient components in the obstacle frame; the frame map is involutory,
    // so it also carries the frame-space gradient back to world coordinates.
    const Vec2 grad{q.x / (p.a * p.a), q.y / (obs.b * obs.b)};
    return mag * to_obstacle_frame(grad, p.theta);
}

double force_maximum_radius(double b, double gamma) {
    return b / std::sqrt(3.0 * gamma);
}

Vec2 baseline_repulsive_force(const Vec2& pos, const ObstacleSpec& obs, double k_base, double d0) {
    const Vec2 away = pos - obs.position;
    const double d = norm(away);
    if (d >= d0) {
        return {0.0, 0.0};
    }
    if (d < 1e-9) {
        throw std::domain_error("obstacle-coincident");
    }
    const double mag = k_base * (1.0 / d - 1.0 / d0) / (d * d);
    return (mag / d) * away;
}

Vec2 net_force(const Vec2& pos, const Vec2& vel, const Vec2& goal,
               std::span<const ObstacleSpec> obstacles, const FieldGains& gains) {
    Vec2 f = attractive_force(pos, goal, gains.k_att);
    for (const ObstacleSpec& obs : obstacles) {
        const RepulsiveParams p = adaptive_params(pos, vel, obs, gains);
        f += repulsive_force(pos, p, obs, gains.gamma);
    }
    return f;
}

Vec2 baseline_net_force(const Vec2& pos, const Vec2& goal,
                        std::span<const ObstacleSpec> obstacles, const FieldGains& gains) {
    Vec2 f = attractive_force(pos, goal, gains.k_att);
    for (const ObstacleSpec& obs : obstacles) {
        const double d0 = gains.baseline_d0 > 0.0 ? gains.baseline_d0 : 3.0 * obs.b;
        f += baseline_repulsive_force(pos, obs, gains.baseline_k, d0);
    }
    return f;
}

std::optional<double> heading_command(const Vec2& force) {
    if (norm(force) <= 1e-12) {
        return std::nullopt;
    }
    return wrap_angle(std::atan2(force.y, force.x));
}

}  // namespace apf
