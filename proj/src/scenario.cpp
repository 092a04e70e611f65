#include "apf/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"

namespace apf {
namespace {

using ordered_json = nlohmann::ordered_json;

// File-level angles are degrees; in-memory angles are radians.  to_rad is
// exactly inverted by to_deg for every value we emit, so serialize/load is
// a fixed point at the string level.
double to_deg(double r) { return r * (180.0 / kPi); }
double to_rad(double d) { return d * (kPi / 180.0); }

[[noreturn]] void schema_error(const std::string& msg) {
    throw ScenarioError(ScenarioError::Kind::schema, msg);
}

[[noreturn]] void invalid(const std::string& msg) {
    throw ScenarioError(ScenarioError::Kind::validation, msg);
}

void check_keys(const ordered_json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) { known = true; break; }
        }
        if (!known) schema_error("unknown key \"" + it.key() + "\" in " + where);
    }
}

const ordered_json& require_key(const ordered_json& obj, const std::string& where,
                                const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        schema_error("missing key \"" + std::string(key) + "\" in " + where);
    return *it;
}

double as_number(const ordered_json& j, const std::string& where) {
    if (!j.is_number()) schema_error(where + " must be a number");
    return j.get<double>();
}

std::string as_string(const ordered_json& j, const std::string& where) {
    if (!j.is_string()) schema_error(where + " must be a string");
    return j.get<std::string>();
}

Vec2 as_vec2(const ordered_json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        schema_error(where + " must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

AgentConfig parse_agent(const ordered_json& j, const std::string& where) {
    if (!j.is_object()) schema_error(where + " must be an object");
    check_keys(j, where, {"start", "goal", "speed", "initial_heading_deg"});
    AgentConfig a;
    a.start = as_vec2(require_key(j, where, "start"), where + ".start");
    a.goal = as_vec2(require_key(j, where, "goal"), where + ".goal");
    if (auto it = j.find("speed"); it != j.end())
        a.speed = as_number(*it, where + ".speed");
    if (auto it = j.find("initial_heading_deg"); it != j.end())
        a.initial_heading = to_rad(as_number(*it, where + ".initial_heading_deg"));
    return a;
}

ObstacleSpec parse_obstacle(const ordered_json& j, const std::string& where) {
    if (!j.is_object()) schema_error(where + " must be an object");
    check_keys(j, where, {"position", "velocity", "b", "physical_radius", "kind"});
    ObstacleSpec o;
    o.position = as_vec2(require_key(j, where, "position"), where + ".position");
    if (auto it = j.find("velocity"); it != j.end())
        o.velocity = as_vec2(*it, where + ".velocity");
    if (auto it = j.find("b"); it != j.end())
        o.b = as_number(*it, where + ".b");
    if (auto it = j.find("physical_radius"); it != j.end())
        o.physical_radius = as_number(*it, where + ".physical_radius");
    if (auto it = j.find("kind"); it != j.end()) {
        const std::string k = as_string(*it, where + ".kind");
        if (k == "static")
            o.kind = ObstacleKind::static_obstacle;
        else if (k == "dynamic")
            o.kind = ObstacleKind::dynamic_obstacle;
        else
            schema_error(where + ".kind must be \"static\" or \"dynamic\"");
    }
    return o;
}

void parse_gains(const ordered_json& j, FieldGains& g) {
    if (!j.is_object()) schema_error("gains must be an object");
    check_keys(j, "gains",
               {"k_att", "k_rep0", "gamma", "axis_offset", "baseline_k", "baseline_d0"});
    if (auto it = j.find("k_att"); it != j.end()) g.k_att = as_number(*it, "gains.k_att");
    if (auto it = j.find("k_rep0"); it != j.end()) g.k_rep0 = as_number(*it, "gains.k_rep0");
    if (auto it = j.find("gamma"); it != j.end()) g.gamma = as_number(*it, "gains.gamma");
    if (auto it = j.find("axis_offset"); it != j.end())
        g.axis_offset = as_number(*it, "gains.axis_offset");
    if (auto it = j.find("baseline_k"); it != j.end())
        g.baseline_k = as_number(*it, "gains.baseline_k");
    if (auto it = j.find("baseline_d0"); it != j.end())
        g.baseline_d0 = as_number(*it, "gains.baseline_d0");
}

void parse_vehicle(const ordered_json& j, VehicleLimits& v) {
    if (!j.is_object()) schema_error("sim.vehicle must be an object");
    check_keys(j, "sim.vehicle",
               {"roll_limit_deg", "heading_gain", "roll_rate_limit_deg_s", "gravity"});
    if (auto it = j.find("roll_limit_deg"); it != j.end())
        v.roll_limit = to_rad(as_number(*it, "sim.vehicle.roll_limit_deg"));
    if (auto it = j.find("heading_gain"); it != j.end())
        v.heading_gain = as_number(*it, "sim.vehicle.heading_gain");
    if (auto it = j.find("roll_rate_limit_deg_s"); it != j.end())
        v.roll_rate_limit = to_rad(as_number(*it, "sim.vehicle.roll_rate_limit_deg_s"));
    if (auto it = j.find("gravity"); it != j.end())
        v.gravity = as_number(*it, "sim.vehicle.gravity");
}

void parse_sim(const ordered_json& j, SimConfig& s) {
    if (!j.is_object()) schema_error("sim must be an object");
    check_keys(j, "sim",
               {"dt", "t_max", "goal_radius", "stall_window", "stall_progress", "mode",
                "guidance", "vehicle"});
    if (auto it = j.find("dt"); it != j.end()) s.dt = as_number(*it, "sim.dt");
    if (auto it = j.find("t_max"); it != j.end()) s.t_max = as_number(*it, "sim.t_max");
    if (auto it = j.find("goal_radius"); it != j.end())
        s.goal_radius = as_number(*it, "sim.goal_radius");
    if (auto it = j.find("stall_window"); it != j.end())
        s.stall_window = as_number(*it, "sim.stall_window");
    if (auto it = j.find("stall_progress"); it != j.end())
        s.stall_progress = as_number(*it, "sim.stall_progress");
    if (auto it = j.find("mode"); it != j.end()) {
        const std::string m = as_string(*it, "sim.mode");
        if (m == "direct")
            s.mode = ControlMode::direct;
        else if (m == "coordinated")
            s.mode = ControlMode::coordinated;
        else
            schema_error("sim.mode must be \"direct\" or \"coordinated\"");
    }
    if (auto it = j.find("guidance"); it != j.end()) {
        const std::string g = as_string(*it, "sim.guidance");
        if (g == "proposed")
            s.guidance = GuidanceMode::proposed;
        else if (g == "baseline")
            s.guidance = GuidanceMode::baseline;
        else
            schema_error("sim.guidance must be \"proposed\" or \"baseline\"");
    }
    if (auto it = j.find("vehicle"); it != j.end()) parse_vehicle(*it, s.vehicle);
}

ordered_json vec_json(const Vec2& v) { return ordered_json::array({v.x, v.y}); }

std::string index_ref(const char* list, std::size_t i) {
    return std::string(list) + "[" + std::to_string(i) + "]";
}

}  // namespace

std::vector<std::string> validate_scenario(const ScenarioConfig& sc) {
    std::vector<std::string> warnings;
    if (sc.name.empty()) invalid("name must be non-empty");
    if (sc.frame != "ENU") invalid("frame must be \"ENU\"");
    if (sc.agents.empty()) invalid("agents must be non-empty");
    if (!(sc.agent_b > 0.0)) invalid("agent_b must be > 0");

    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        const AgentConfig& a = sc.agents[i];
        const std::string me = index_ref("agents", i);
        if (!(a.speed > 0.0)) invalid(me + ".speed must be > 0");
        if (norm(a.goal - a.start) <= 1e-9) invalid(me + ".goal must differ from start");
        for (std::size_t k = 0; k < i; ++k) {
            const double d = norm(a.start - sc.agents[k].start);
            if (d <= 1e-9)
                invalid(me + ".start coincides with " + index_ref("agents", k) + ".start");
            if (d < sc.agent_b)
                warnings.push_back(index_ref("agents", i) + " and " + index_ref("agents", k) +
                                   " start within one repulsive axis of each other");
        }
    }

    for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
        const ObstacleSpec& o = sc.obstacles[i];
        const std::string me = index_ref("obstacles", i);
        if (o.kind == ObstacleKind::agent) invalid(me + ".kind must be static or dynamic");
        if (!(o.b > 0.0)) invalid(me + ".b must be > 0");
        if (o.physical_radius < 0.0) invalid(me + ".physical_radius must be >= 0");
        if (o.b < o.physical_radius) invalid(me + ".b must be >= physical_radius");
        if (o.kind == ObstacleKind::static_obstacle && norm(o.velocity) > 0.0)
            invalid(me + ".velocity must be zero for a static obstacle");
        for (std::size_t k = 0; k < sc.agents.size(); ++k) {
            if (norm(sc.agents[k].start - o.position) < o.b)
                warnings.push_back(index_ref("agents", k) + " starts within " + me + ".b");
            if (norm(sc.agents[k].goal - o.position) < o.b)
                warnings.push_back(index_ref("agents", k) + ".goal lies within " + me + ".b");
        }
    }

    const FieldGains& g = sc.gains;
    if (!(g.k_att > 0.0)) invalid("gains.k_att must be > 0");
    if (g.k_rep0 < 0.0) invalid("gains.k_rep0 must be >= 0");
    if (!(g.gamma > 0.0 && g.gamma <= 1.0)) invalid("gains.gamma must be in (0, 1]");
    if (!(g.axis_offset > 1.0)) invalid("gains.axis_offset must be > 1");
    if (!(g.baseline_k > 0.0)) invalid("gains.baseline_k must be > 0");
    if (g.baseline_d0 < 0.0) invalid("gains.baseline_d0 must be >= 0");

    const SimConfig& s = sc.sim;
    if (!(s.dt > 0.0)) invalid("sim.dt must be > 0");
    if (!(s.t_max >= s.dt)) invalid("sim.t_max must be >= dt");
    if (!(s.goal_radius > 0.0)) invalid("sim.goal_radius must be > 0");
    if (!(s.stall_window >= s.dt)) invalid("sim.stall_window must be >= dt");
    if (s.stall_progress < 0.0) invalid("sim.stall_progress must be >= 0");

    const VehicleLimits& v = s.vehicle;
    if (!(v.roll_limit > 0.0 && v.roll_limit < kPi / 2))
        invalid("vehicle.roll_limit must be in (0, pi/2)");
    if (!(v.heading_gain > 0.0)) invalid("vehicle.heading_gain must be > 0");
    if (!(v.roll_rate_limit > 0.0)) invalid("vehicle.roll_rate_limit must be > 0");
    if (!(v.gravity > 0.0)) invalid("vehicle.gravity must be > 0");

    return warnings;
}

ScenarioConfig load_scenario(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError(ScenarioError::Kind::parse, e.what());
    }
    if (!j.is_object()) schema_error("top level must be an object");
    check_keys(j, "top level",
               {"name", "frame", "notes", "agent_b", "agents", "obstacles", "gains", "sim"});

    ScenarioConfig sc;
    sc.name = as_string(require_key(j, "top level", "name"), "name");
    if (auto it = j.find("frame"); it != j.end()) sc.frame = as_string(*it, "frame");
    if (auto it = j.find("notes"); it != j.end()) sc.notes = as_string(*it, "notes");
    if (auto it = j.find("agent_b"); it != j.end()) sc.agent_b = as_number(*it, "agent_b");

    const ordered_json& agents = require_key(j, "top level", "agents");
    if (!agents.is_array()) schema_error("agents must be an array");
    for (std::size_t i = 0; i < agents.size(); ++i)
        sc.agents.push_back(parse_agent(agents[i], index_ref("agents", i)));

    if (auto it = j.find("obstacles"); it != j.end()) {
        if (!it->is_array()) schema_error("obstacles must be an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            sc.obstacles.push_back(parse_obstacle((*it)[i], index_ref("obstacles", i)));
    }

    if (auto it = j.find("gains"); it != j.end()) parse_gains(*it, sc.gains);
    if (auto it = j.find("sim"); it != j.end()) parse_sim(*it, sc.sim);

    validate_scenario(sc);
    return sc;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(ScenarioError::Kind::parse, "cannot read scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioConfig& sc) {
    ordered_json j;
    j["name"] = sc.name;
    j["frame"] = sc.frame;
    if (!sc.notes.empty()) j["notes"] = sc.notes;
    j["agent_b"] = sc.agent_b;

    ordered_json g;
    g["k_att"] = sc.gains.k_att;
    g["k_rep0"] = sc.gains.k_rep0;
    g["gamma"] = sc.gains.gamma;
    g["axis_offset"] = sc.gains.axis_offset;
    g["baseline_k"] = sc.gains.baseline_k;
    g["baseline_d0"] = sc.gains.baseline_d0;
    j["gains"] = g;

    ordered_json s;
    s["dt"] = sc.sim.dt;
    s["t_max"] = sc.sim.t_max;
    s["goal_radius"] = sc.sim.goal_radius;
    s["stall_window"] = sc.sim.stall_window;
    s["stall_progress"] = sc.sim.stall_progress;
    s["mode"] = to_string(sc.sim.mode);
    s["guidance"] = to_string(sc.sim.guidance);
    ordered_json v;
    v["roll_limit_deg"] = to_deg(sc.sim.vehicle.roll_limit);
    v["heading_gain"] = sc.sim.vehicle.heading_gain;
    v["roll_rate_limit_deg_s"] = to_deg(sc.sim.vehicle.roll_rate_limit);
    v["gravity"] = sc.sim.vehicle.gravity;
    s["vehicle"] = v;
    j["sim"] = s;

    ordered_json agents = ordered_json::array();
    for (const AgentConfig& a : sc.agents) {
        ordered_json e;
        e["start"] = vec_json(a.start);
        e["goal"] = vec_json(a.goal);
        e["speed"] = a.speed;
        if (a.initial_heading) e["initial_heading_deg"] = to_deg(*a.initial_heading);
        agents.push_back(e);
    }
    j["agents"] = agents;

    ordered_json obstacles = ordered_json::array();
    for (const ObstacleSpec& o : sc.obstacles) {
        ordered_json e;
        e["position"] = vec_json(o.position);
        e["velocity"] = vec_json(o.velocity);
        e["b"] = o.b;
        e["physical_radius"] = o.physical_radius;
        e["kind"] = o.kind == ObstacleKind::dynamic_obstacle ? "dynamic" : "static";
        obstacles.push_back(e);
    }
    j["obstacles"] = obstacles;

    return j.dump(2) + "\n";
}

std::vector<ScenarioConfig> builtin_scenarios() {
    std::vector<ScenarioConfig> out;

    {
        ScenarioConfig sc;
        sc.name = "head_on";
        sc.notes = "Single vehicle with one field obstacle centred on the start-goal line.";
        sc.agents.push_back({{0.0, 0.0}, {800.0, 0.0}, 15.0, std::nullopt});
        sc.obstacles.push_back(
            {{400.0, 0.0}, {0.0, 0.0}, 30.0, 0.0, ObstacleKind::static_obstacle});
        out.push_back(sc);
    }

    {
        ScenarioConfig sc;
        sc.name = "narrow_gap";
        sc.notes = "Two field obstacles flanking the straight-line path through a 70 m gap.";
        sc.agents.push_back({{0.0, 0.0}, {800.0, 0.0}, 15.0, std::nullopt});
        sc.obstacles.push_back(
            {{400.0, 35.0}, {0.0, 0.0}, 30.0, 0.0, ObstacleKind::static_obstacle});
        sc.obstacles.push_back(
            {{400.0, -35.0}, {0.0, 0.0}, 30.0, 0.0, ObstacleKind::static_obstacle});
        out.push_back(sc);
    }

    {
        ScenarioConfig sc;
        sc.name = "four_agent_swap";
        sc.notes =
            "Four vehicles exchange opposite corners of an 800 m square; staggered "
            "speeds keep the encounter off the exact symmetry point.";
        sc.agents.push_back({{0.0, 0.0}, {800.0, 800.0}, 14.0, std::nullopt});
        sc.agents.push_back({{800.0, 0.0}, {0.0, 800.0}, 15.0, std::nullopt});
        sc.agents.push_back({{800.0, 800.0}, {0.0, 0.0}, 16.0, std::nullopt});
        sc.agents.push_back({{0.0, 800.0}, {800.0, 0.0}, 17.0, std::nullopt});
        out.push_back(sc);
    }

    {
        ScenarioConfig sc;
        sc.name = "urban_dynamic";
        sc.notes =
            "One vehicle crosses a field of three static obstacles while a dynamic "
            "obstacle sweeps south across the route; coordinated-turn dynamics.";
        sc.agents.push_back({{0.0, 0.0}, {800.0, 800.0}, 15.0, 0.0});
        sc.obstacles.push_back(
            {{500.0, 550.0}, {0.0, 0.0}, 11.0, 0.0, ObstacleKind::static_obstacle});
        sc.obstacles.push_back(
            {{450.0, 500.0}, {0.0, 0.0}, 6.0, 0.0, ObstacleKind::static_obstacle});
        sc.obstacles.push_back(
            {{250.0, 250.0}, {0.0, 0.0}, 9.0, 0.0, ObstacleKind::static_obstacle});
        sc.obstacles.push_back(
            {{600.0, 800.0}, {0.0, -10.0}, 20.0, 0.0, ObstacleKind::dynamic_obstacle});
        sc.sim.mode = ControlMode::coordinated;
        out.push_back(sc);
    }

    return out;
}

std::optional<ScenarioConfig> find_builtin(const std::string& name) {
    for (ScenarioConfig& sc : builtin_scenarios())
        if (sc.name == name) return std::move(sc);
    return std::nullopt;
}

std::string trajectory_csv(const TrajectoryLog& log) {
    std::string out = "t,agent,x,y,psi,phi,cmd_psi,fx,fy,min_sep\n";
    char buf[64];
    const auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.9g", x);
        out += buf;
    };
    for (const StepRecord& r : log.records) {
        num(r.t);
        out += ',';
        out += std::to_string(r.agent);
        out += ',';
        num(r.position.x);
        out += ',';
        num(r.position.y);
        out += ',';
        num(r.heading);
        out += ',';
        num(r.roll);
        out += ',';
        num(r.heading_cmd);
        out += ',';
        num(r.force.x);
        out += ',';
        num(r.force.y);
        out += ',';
        double min_sep = std::numeric_limits<double>::infinity();
        for (double s : r.separations) min_sep = std::min(min_sep, s);
        num(min_sep);
        out += '\n';
    }
    return out;
}

namespace {

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw std::runtime_error("cannot write file: " + path);
    outf << text;
    if (!outf) throw std::runtime_error("write failed: " + path);
}

ordered_json finite_or_na(double x) {
    if (std::isfinite(x)) return x;
    return "n/a";
}

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path) {
    write_text_file(path, trajectory_csv(log));
}

std::string metrics_json(const ScenarioConfig& sc, const RunResult& res,
                         GuidanceMode guidance) {
    ordered_json j;
    j["scenario"] = sc.name;
    j["guidance"] = to_string(guidance);
    j["mode"] = to_string(sc.sim.mode);
    j["verdict"] = to_string(res.metrics.verdict);
    j["duration"] = res.metrics.duration;
    j["dt"] = res.log.dt;
    if (res.metrics.collision) {
        ordered_json c;
        c["agent"] = res.metrics.collision->agent;
        c["obstacle"] = res.metrics.collision->obstacle;
        c["other_agent"] = res.metrics.collision->other_agent;
        c["t"] = res.metrics.collision->t;
        j["collision"] = c;
    } else {
        j["collision"] = nullptr;
    }
    ordered_json agents = ordered_json::array();
    for (std::size_t i = 0; i < res.metrics.agents.size(); ++i) {
        const AgentMetrics& m = res.metrics.agents[i];
        ordered_json e;
        e["index"] = static_cast<int>(i);
        e["reached_goal"] = m.reached_goal;
        e["time_to_goal"] = finite_or_na(m.time_to_goal);
        e["min_separation"] = finite_or_na(m.min_separation);
        e["max_cross_track"] = m.max_cross_track;
        e["path_length"] = m.path_length;
        e["heading_jitter"] = m.heading_jitter;
        e["stalled"] = m.stalled;
        agents.push_back(e);
    }
    j["agents"] = agents;
    return j.dump(2) + "\n";
}

void write_metrics_json(const ScenarioConfig& sc, const RunResult& res,
                        GuidanceMode guidance, const std::string& path) {
    write_text_file(path, metrics_json(sc, res, guidance));
}

}  // namespace apf
