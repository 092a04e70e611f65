#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "apf/fields.hpp"
#include "apf/vehicle.hpp"

namespace apf {

struct ScenarioConfig;  // scenario.hpp

enum class ControlMode { direct, coordinated };
enum class GuidanceMode { proposed, baseline };
enum class Verdict { reached, collision, stall, timeout };

const char* to_string(ControlMode m);
const char* to_string(GuidanceMode g);
const char* to_string(Verdict v);

struct SimConfig {
    double dt = 0.05;             // s
    double t_max = 300.0;         // s
    double goal_radius = 10.0;    // m
    double stall_window = 20.0;   // s
    double stall_progress = 1.0;  // min distance-to-goal progress per window, m
    ControlMode mode = ControlMode::direct;
    GuidanceMode guidance = GuidanceMode::proposed;
    VehicleLimits vehicle;
};

struct StepRecord {
    double t = 0.0;
    int agent = 0;
    Vec2 position;
    double heading = 0.0;
    double roll = 0.0;
    double heading_cmd = 0.0;
    Vec2 force;
    // Center-to-center distances at time t: scripted obstacles in scenario
    // order, then the other agents in ascending index order (self omitted).
    std::vector<double> separations;
};

// Records are step-major: agent_count records at t = 0, then at dt, 2*dt, ...
// Every logged time has one record per agent, including agents frozen at
// their goals.
struct TrajectoryLog {
    double dt = 0.0;
    std::size_t agent_count = 0;
    std::size_t obstacle_count = 0;
    std::vector<StepRecord> records;
};

struct CollisionEvent {
    int agent = -1;
    int obstacle = -1;     // scripted obstacle index, -1 when agent-agent
    int other_agent = -1;  // agent index, -1 when agent-obstacle
    double t = 0.0;
};

struct AgentMetrics {
    bool reached_goal = false;
    double time_to_goal = std::numeric_limits<double>::quiet_NaN();
    double min_separation = std::numeric_limits<double>::infinity();
    double max_cross_track = 0.0;  // m, from the start->goal line
    double path_length = 0.0;
    double heading_jitter = 0.0;  // mean |wrap(dpsi)| / dt up to goal capture, rad/s
    bool stalled = false;
};

struct RunMetrics {
    Verdict verdict = Verdict::timeout;
    double duration = 0.0;  // last logged time
    std::vector<AgentMetrics> agents;
    std::optional<CollisionEvent> collision;
};

struct RunResult {
    TrajectoryLog log;
    RunMetrics metrics;
};

// Scripted obstacles move at constant velocity from their configured start.
inline Vec2 obstacle_position_at(const ObstacleSpec& o, double t) {
    return o.position + t * o.velocity;
}

// Synchronous fixed-step simulation of a validated scenario. All forces for a
// step are evaluated from the common time-t state before any agent advances,
// so results do not depend on agent ordering. Terminates on: every agent at
// its goal, physical collision, an agent making less than stall_progress of
// goal progress over stall_window, or t reaching t_max.
RunResult simulate(const ScenarioConfig& scenario, const SimConfig& sim);

// Log-level metric scans; usable on synthetic logs in tests.
double min_separation(const TrajectoryLog& log, int agent);
double max_cross_track(const TrajectoryLog& log, int agent, const Vec2& start, const Vec2& goal);
double heading_jitter(const TrajectoryLog& log, int agent);
double path_length(const TrajectoryLog& log, int agent);

}  // namespace apf
