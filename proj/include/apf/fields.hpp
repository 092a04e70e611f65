#pragma once

#include <optional>
#include <span>

#include "apf/geometry.hpp"

namespace apf {

enum class ObstacleKind { static_obstacle, dynamic_obstacle, agent };

struct ObstacleSpec {
    Vec2 position;
    Vec2 velocity;                 // zero for static obstacles
    double b = 30.0;               // repulsive ellipse minor semi-axis, m
    double physical_radius = 0.0;  // hard-body radius; separation below it is a collision
    ObstacleKind kind = ObstacleKind::static_obstacle;
};

struct FieldGains {
    double k_att = 0.008;
    double k_rep0 = 30.0;
    double gamma = 0.34;         // Cauchy falloff sharpness, in (0, 1]
    double axis_offset = 1.734;  // major semi-axis = b * (axis_offset + xi)
    double baseline_k = 1.0e5;   // classic circular-APF gain
    double baseline_d0 = 0.0;    // classic influence radius; 0 selects 3*b per obstacle
};

// Per-obstacle repulsive shape for one evaluation instant.
struct RepulsiveParams {
    double k_rep = 0.0;  // adapted strength, in [0, 2*k_rep0]
    double a = 0.0;      // major semi-axis, m
    double theta = 0.0;  // ellipse orientation = relative-velocity direction, rad
    double xi = 0.0;     // collision likelihood: cos of angle(LOS, relative velocity), [-1, 1]
};

double attractive_potential(const Vec2& pos, const Vec2& goal, double k_att);

// -grad of attractive_potential: 2 * k_att * (goal - pos), pointing at the goal.
Vec2 attractive_force(const Vec2& pos, const Vec2& goal, double k_att);

// Collision-likelihood-adaptive strength and major axis. xi = +1 head-on
// doubles k_rep and stretches the ellipse; xi = -1 receding zeroes it.
// Degenerate relative velocity (|v_rel| < 1e-9) falls back to xi = 0.
// Throws std::domain_error("obstacle-coincident") when the agent sits within
// 1e-9 m of the obstacle center.
RepulsiveParams adaptive_params(const Vec2& agent_pos, const Vec2& agent_vel,
                                const ObstacleSpec& obs, const FieldGains& gains);

// k_rep / (1 + (X/a)^2 + (Y/b)^2) in the rotated obstacle frame.
double repulsive_potential(const Vec2& pos, const RepulsiveParams& p, const ObstacleSpec& obs);

// Outward repulsive force. With gamma = 1 this is exactly -grad of
// repulsive_potential; gamma < 1 sharpens the falloff of the same gradient
// direction field.
Vec2 repulsive_force(const Vec2& pos, const RepulsiveParams& p, const ObstacleSpec& obs,
                     double gamma);

// Distance along the minor axis where |repulsive_force| peaks: b / sqrt(3*gamma).
double force_maximum_radius(double b, double gamma);

// Classic circular APF term: zero at or beyond d0, k_base*(1/d - 1/d0)/d^2 inside.
Vec2 baseline_repulsive_force(const Vec2& pos, const ObstacleSpec& obs, double k_base, double d0);

// Attractive force plus adaptive repulsion summed over obstacles in the order given.
Vec2 net_force(const Vec2& pos, const Vec2& vel, const Vec2& goal,
               std::span<const ObstacleSpec> obstacles, const FieldGains& gains);

// Attractive force plus classic circular repulsion (d0 per obstacle: baseline_d0,
// or 3*b when baseline_d0 is zero).
Vec2 baseline_net_force(const Vec2& pos, const Vec2& goal,
                        std::span<const ObstacleSpec> obstacles, const FieldGains& gains);

// Direction of the net force in (-pi, pi]; nullopt when |force| <= 1e-12,
// in which case the caller holds its previous heading.
std::optional<double> heading_command(const Vec2& force);

}  // namespace apf
