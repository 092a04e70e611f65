#include "apf/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "apf/engine.hpp"
#include "apf/scenario.hpp"

namespace apf {
namespace {

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::reached: return 0;
        case Verdict::collision: return 3;
        case Verdict::stall:
        case Verdict::timeout: return 4;
    }
    return 4;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ScenarioConfig resolve_scenario(const std::string& ref) {
    if (auto sc = find_builtin(ref)) return std::move(*sc);
    if (std::filesystem::exists(ref)) return load_scenario_file(ref);
    throw UsageError("unknown scenario \"" + ref + "\": not a built-in name and no such file");
}

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("invalid numeric value for --set " + key + "=" + text);
    }
    if (used != text.size())
        throw UsageError("invalid numeric value for --set " + key + "=" + text);
    return v;
}

// Dotted-key overrides, applied before explicit flags so flags win.
void apply_set(ScenarioConfig& sc, const std::string& entry) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
        throw UsageError("--set expects key=value, got \"" + entry + "\"");
    const std::string key = entry.substr(0, eq);
    const std::string val = entry.substr(eq + 1);

    const auto num = [&] { return parse_double(key, val); };
    const double deg = kPi / 180.0;

    if (key == "agent_b") sc.agent_b = num();
    else if (key == "gains.k_att") sc.gains.k_att = num();
    else if (key == "gains.k_rep0") sc.gains.k_rep0 = num();
    else if (key == "gains.gamma") sc.gains.gamma = num();
    else if (key == "gains.axis_offset") sc.gains.axis_offset = num();
    else if (key == "gains.baseline_k") sc.gains.baseline_k = num();
    else if (key == "gains.baseline_d0") sc.gains.baseline_d0 = num();
    else if (key == "sim.dt") sc.sim.dt = num();
    else if (key == "sim.t_max") sc.sim.t_max = num();
    else if (key == "sim.goal_radius") sc.sim.goal_radius = num();
    else if (key == "sim.stall_window") sc.sim.stall_window = num();
    else if (key == "sim.stall_progress") sc.sim.stall_progress = num();
    else if (key == "sim.mode") {
        if (val == "direct") sc.sim.mode = ControlMode::direct;
        else if (val == "coordinated") sc.sim.mode = ControlMode::coordinated;
        else throw UsageError("--set sim.mode expects direct or coordinated");
    } else if (key == "sim.guidance") {
        if (val == "proposed") sc.sim.guidance = GuidanceMode::proposed;
        else if (val == "baseline") sc.sim.guidance = GuidanceMode::baseline;
        else throw UsageError("--set sim.guidance expects proposed or baseline");
    } else if (key == "vehicle.roll_limit_deg") sc.sim.vehicle.roll_limit = num() * deg;
    else if (key == "vehicle.heading_gain") sc.sim.vehicle.heading_gain = num();
    else if (key == "vehicle.roll_rate_limit_deg_s") sc.sim.vehicle.roll_rate_limit = num() * deg;
    else if (key == "vehicle.gravity") sc.sim.vehicle.gravity = num();
    else throw UsageError("unknown --set key \"" + key + "\"");
}

struct RunFlags {
    std::string guidance;
    std::string mode;
    double dt = 0.0;
    double t_max = 0.0;
    bool has_dt = false;
    bool has_t_max = false;
    std::string out_dir = ".";
    std::vector<std::string> sets;
};

void apply_flags(ScenarioConfig& sc, const RunFlags& f, std::ostream& err) {
    for (const std::string& s : f.sets) apply_set(sc, s);
    if (!f.guidance.empty())
        sc.sim.guidance = f.guidance == "proposed" ? GuidanceMode::proposed : GuidanceMode::baseline;
    if (!f.mode.empty())
        sc.sim.mode = f.mode == "direct" ? ControlMode::direct : ControlMode::coordinated;
    if (f.has_dt) sc.sim.dt = f.dt;
    if (f.has_t_max) sc.sim.t_max = f.t_max;
    for (const std::string& w : validate_scenario(sc)) err << "warning: " << w << "\n";
}

void print_agent_line(std::ostream& out, std::size_t i, const AgentMetrics& m) {
    out << "  agent " << i << ": " << (m.reached_goal ? "reached" : "active");
    if (m.reached_goal) out << " t=" << m.time_to_goal;
    out << " min_sep=";
    if (std::isfinite(m.min_separation)) out << m.min_separation;
    else out << "n/a";
    out << " max_xtrack=" << m.max_cross_track << " path=" << m.path_length
        << " jitter=" << m.heading_jitter;
    if (m.stalled) out << " stalled";
    out << "\n";
}

std::pair<std::string, std::string> write_outputs(const ScenarioConfig& sc, const RunResult& res,
                                                  const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string stem = sc.name + "_" + to_string(sc.sim.guidance);
    const auto csv = (std::filesystem::path(out_dir) / (stem + ".csv")).string();
    const auto json = (std::filesystem::path(out_dir) / (stem + ".json")).string();
    write_trajectory_csv(res.log, csv);
    write_metrics_json(sc, res, sc.sim.guidance, json);
    return {csv, json};
}

int do_run(const std::string& ref, const RunFlags& flags, std::ostream& out, std::ostream& err) {
    ScenarioConfig sc = resolve_scenario(ref);
    apply_flags(sc, flags, err);

    const RunResult res = simulate(sc, sc.sim);
    out << "scenario=" << sc.name << " guidance=" << to_string(sc.sim.guidance)
        << " mode=" << to_string(sc.sim.mode) << "\n";
    out << "verdict=" << to_string(res.metrics.verdict) << " duration=" << res.metrics.duration
        << " s\n";
    for (std::size_t i = 0; i < res.metrics.agents.size(); ++i)
        print_agent_line(out, i, res.metrics.agents[i]);
    if (res.metrics.collision) {
        const CollisionEvent& c = *res.metrics.collision;
        out << "  collision: agent " << c.agent;
        if (c.obstacle >= 0) out << " vs obstacle " << c.obstacle;
        if (c.other_agent >= 0) out << " vs agent " << c.other_agent;
        out << " at t=" << c.t << "\n";
    }

    const auto [csv, json] = write_outputs(sc, res, flags.out_dir);
    out << "wrote " << csv << "\n";
    out << "wrote " << json << "\n";
    return verdict_exit(res.metrics.verdict);
}

double fleet_min_separation(const RunMetrics& m) {
    double v = std::numeric_limits<double>::infinity();
    for (const AgentMetrics& a : m.agents) v = std::min(v, a.min_separation);
    return v;
}

double fleet_mean(const RunMetrics& m, double AgentMetrics::* field) {
    double sum = 0.0;
    for (const AgentMetrics& a : m.agents) sum += a.*field;
    return m.agents.empty() ? 0.0 : sum / static_cast<double>(m.agents.size());
}

double fleet_max(const RunMetrics& m, double AgentMetrics::* field) {
    double v = 0.0;
    for (const AgentMetrics& a : m.agents) v = std::max(v, a.*field);
    return v;
}

int do_compare(const std::string& ref, const RunFlags& flags, std::ostream& out,
               std::ostream& err) {
    ScenarioConfig base = resolve_scenario(ref);
    apply_flags(base, flags, err);

    ScenarioConfig prop = base;
    prop.sim.guidance = GuidanceMode::proposed;
    ScenarioConfig clas = base;
    clas.sim.guidance = GuidanceMode::baseline;

    const RunResult rp = simulate(prop, prop.sim);
    const RunResult rb = simulate(clas, clas.sim);
    write_outputs(prop, rp, flags.out_dir);
    write_outputs(clas, rb, flags.out_dir);

    const auto row = [&](const std::string& label, auto pv, auto bv) {
        out << std::left << std::setw(22) << label << std::setw(16) << pv << bv << "\n";
    };
    out << "scenario=" << base.name << " mode=" << to_string(base.sim.mode) << "\n";
    row("metric", "proposed", "baseline");
    row("verdict", to_string(rp.metrics.verdict), to_string(rb.metrics.verdict));
    row("duration", rp.metrics.duration, rb.metrics.duration);
    row("min_separation", fleet_min_separation(rp.metrics), fleet_min_separation(rb.metrics));
    row("max_cross_track", fleet_max(rp.metrics, &AgentMetrics::max_cross_track),
        fleet_max(rb.metrics, &AgentMetrics::max_cross_track));
    row("mean_path_length", fleet_mean(rp.metrics, &AgentMetrics::path_length),
        fleet_mean(rb.metrics, &AgentMetrics::path_length));
    row("mean_heading_jitter", fleet_mean(rp.metrics, &AgentMetrics::heading_jitter),
        fleet_mean(rb.metrics, &AgentMetrics::heading_jitter));
    return verdict_exit(rp.metrics.verdict);
}

int do_validate(const std::string& ref, const std::vector<std::string>& sets, std::ostream& out,
                std::ostream& err) {
    ScenarioConfig sc = resolve_scenario(ref);
    for (const std::string& s : sets) apply_set(sc, s);
    for (const std::string& w : validate_scenario(sc)) err << "warning: " << w << "\n";
    out << serialize_scenario(sc);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Potential-field guidance simulator for fixed-wing vehicles"};
    app.require_subcommand(1);

    CLI::App* list_cmd = app.add_subcommand("list", "List built-in scenarios");

    RunFlags flags;
    std::string scenario_ref;
    std::vector<std::string> validate_sets;
    std::string validate_ref;

    CLI::App* run_cmd =
        app.add_subcommand("run", "Simulate a scenario; writes <name>_<guidance>.csv/.json");
    run_cmd->add_option("scenario", scenario_ref, "Built-in name or scenario JSON path")
        ->required();
    run_cmd->add_option("--guidance", flags.guidance, "Guidance law")
        ->check(CLI::IsMember({"proposed", "baseline"}));
    run_cmd->add_option("--mode", flags.mode, "Vehicle response model")
        ->check(CLI::IsMember({"direct", "coordinated"}));
    auto* dt_opt = run_cmd->add_option("--dt", flags.dt, "Step size, s");
    auto* tmax_opt = run_cmd->add_option("--t-max", flags.t_max, "Time limit, s");
    run_cmd->add_option("--out", flags.out_dir, "Output directory (default .)");
    run_cmd->add_option("--set", flags.sets,
                        "Override a config value, e.g. --set gains.k_rep0=45");

    CLI::App* cmp_cmd = app.add_subcommand(
        "compare", "Run both guidance laws on one scenario and tabulate the metrics");
    cmp_cmd->add_option("scenario", scenario_ref, "Built-in name or scenario JSON path")
        ->required();
    cmp_cmd->add_option("--mode", flags.mode, "Vehicle response model")
        ->check(CLI::IsMember({"direct", "coordinated"}));
    auto* cdt_opt = cmp_cmd->add_option("--dt", flags.dt, "Step size, s");
    auto* ctmax_opt = cmp_cmd->add_option("--t-max", flags.t_max, "Time limit, s");
    cmp_cmd->add_option("--out", flags.out_dir, "Output directory (default .)");
    cmp_cmd->add_option("--set", flags.sets,
                        "Override a config value, e.g. --set gains.k_rep0=45");

    CLI::App* val_cmd = app.add_subcommand(
        "validate", "Check a scenario and print its canonical JSON form");
    val_cmd->add_option("scenario", validate_ref, "Built-in name or scenario JSON path")
        ->required();
    val_cmd->add_option("--set", validate_sets,
                        "Override a config value before validation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);  // help text, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    flags.has_dt = dt_opt->count() > 0 || cdt_opt->count() > 0;
    flags.has_t_max = tmax_opt->count() > 0 || ctmax_opt->count() > 0;

    try {
        if (list_cmd->parsed()) {
            for (const ScenarioConfig& sc : builtin_scenarios()) {
                out << sc.name << "\n    " << sc.notes << "\n";
            }
            return 0;
        }
        if (run_cmd->parsed()) return do_run(scenario_ref, flags, out, err);
        if (cmp_cmd->parsed()) return do_compare(scenario_ref, flags, out, err);
        if (val_cmd->parsed()) return do_validate(validate_ref, validate_sets, out, err);
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.push_back("apfsim");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) argv.push_back(s.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace apf
