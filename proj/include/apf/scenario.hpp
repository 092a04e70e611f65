#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apf/engine.hpp"
#include "apf/fields.hpp"
#include "apf/geometry.hpp"

namespace apf {

// One vehicle: where it starts, where it wants to go, how fast it flies.
// If initial_heading is empty the vehicle starts pointed at its goal.
struct AgentConfig {
    Vec2 start{};
    Vec2 goal{};
    double speed = 15.0;
    std::optional<double> initial_heading;  // rad, world frame
};

// A full simulation setup: vehicles, scripted obstacles, field gains and
// engine settings.  agent_b is the repulsive semi-minor axis each vehicle
// presents to the others.
struct ScenarioConfig {
    std::string name;
    std::string frame = "ENU";
    std::vector<AgentConfig> agents;
    std::vector<ObstacleSpec> obstacles;
    double agent_b = 30.0;
    FieldGains gains{};
    SimConfig sim{};
    std::string notes;
};

struct ScenarioError : std::runtime_error {
    enum class Kind { parse, schema, validation };
    Kind kind;
    ScenarioError(Kind k, const std::string& what)
        : std::runtime_error(what), kind(k) {}
};

// Checks invariants that JSON shape alone cannot express (positive axes,
// distinct starts, static obstacles at rest, ...).  Throws ScenarioError
// with Kind::validation on the first violation; returns human-readable
// warnings for conditions that are suspicious but legal.
std::vector<std::string> validate_scenario(const ScenarioConfig& sc);

// Parse + validate.  Angles are stored in the file in degrees
// (initial_heading_deg, roll_limit_deg, roll_rate_limit_deg_s) and
// converted to radians here.  Unknown keys are rejected.
ScenarioConfig load_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

// Inverse of load_scenario: emits a canonical JSON document (stable key
// order, degrees at the file level) that loads back to an identical config.
std::string serialize_scenario(const ScenarioConfig& sc);

// Built-in scenario library.
std::vector<ScenarioConfig> builtin_scenarios();
std::optional<ScenarioConfig> find_builtin(const std::string& name);

// Writes one row per (step, agent):
//   t,agent,x,y,psi,phi,cmd_psi,fx,fy,min_sep
// min_sep is the smallest entry of the record's separation list ("inf"
// when there is nothing to separate from).  Values use %.9g.
std::string trajectory_csv(const TrajectoryLog& log);
void write_trajectory_csv(const TrajectoryLog& log, const std::string& path);

// Per-run metrics as a JSON document (stable key order).
std::string metrics_json(const ScenarioConfig& sc, const RunResult& res,
                         GuidanceMode guidance);
void write_metrics_json(const ScenarioConfig& sc, const RunResult& res,
                        GuidanceMode guidance, const std::string& path);

}  // namespace apf
