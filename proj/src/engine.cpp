#include "apf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "apf/scenario.hpp"

namespace apf {

const char* to_string(ControlMode m) {
    return m == ControlMode::direct ? "direct" : "coordinated";
}

const char* to_string(GuidanceMode g) {
    return g == GuidanceMode::proposed ? "proposed" : "baseline";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::reached: return "reached";
        case Verdict::collision: return "collision";
        case Verdict::stall: return "stall";
        case Verdict::timeout: return "timeout";
    }
    return "timeout";
}

namespace {

// Ordering key for agents viewed as obstacles. Summation order must not
// depend on how agents are indexed in the scenario, or permuting them would
// change floating-point sums and with them whole trajectories.
std::tuple<double, double, double, double, double> view_key(const ObstacleSpec& o) {
    return {o.position.x, o.position.y, o.velocity.x, o.velocity.y, o.b};
}

double distance_to_goal_line(const Vec2& p, const Vec2& start, const Vec2& goal) {
    const Vec2 axis = goal - start;
    return std::abs(cross(axis, p - start)) / norm(axis);
}

}  // namespace

RunResult simulate(const ScenarioConfig& sc, const SimConfig& cfg) {
    const std::size_t n = sc.agents.size();
    const std::size_t n_obs = sc.obstacles.size();

    std::vector<AgentState> st(n);
    std::vector<double> heading0(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentConfig& a = sc.agents[i];
        heading0[i] = a.initial_heading
                          ? wrap_angle(*a.initial_heading)
                          : wrap_angle(std::atan2(a.goal.y - a.start.y, a.goal.x - a.start.x));
        st[i] = AgentState{a.start, heading0[i], 0.0, a.speed};
    }

    RunResult out;
    out.log.dt = cfg.dt;
    out.log.agent_count = n;
    out.log.obstacle_count = n_obs;
    out.metrics.agents.assign(n, AgentMetrics{});

    std::vector<bool> reached(n, false);
    std::vector<double> jitter_sum(n, 0.0);
    std::vector<long long> jitter_steps(n, 0);
    std::vector<std::vector<double>> d2g_hist(n);

    const long long max_steps = std::llround(cfg.t_max / cfg.dt);
    const long long stall_steps = std::llround(cfg.stall_window / cfg.dt);

    std::vector<Vec2> obs_pos(n_obs);
    std::vector<double> cmds(n, 0.0);
    std::vector<Vec2> forces(n);
    std::vector<ObstacleSpec> views;

    Verdict verdict = Verdict::timeout;
    double t = 0.0;

    for (long long k = 0;; ++k) {
        t = static_cast<double>(k) * cfg.dt;
        for (std::size_t j = 0; j < n_obs; ++j) {
            obs_pos[j] = obstacle_position_at(sc.obstacles[j], t);
        }

        // Goal capture is part of the time-t state: a captured agent freezes
        // and is seen by the others with zero velocity from this step on.
        for (std::size_t i = 0; i < n; ++i) {
            if (!reached[i] && norm(sc.agents[i].goal - st[i].position) <= cfg.goal_radius) {
                reached[i] = true;
                out.metrics.agents[i].reached_goal = true;
                out.metrics.agents[i].time_to_goal = t;
            }
        }

        // Separations, collision scan, and per-agent bookkeeping at time t.
        std::optional<CollisionEvent> hit;
        for (std::size_t i = 0; i < n; ++i) {
            StepRecord rec;
            rec.t = t;
            rec.agent = static_cast<int>(i);
            rec.position = st[i].position;
            rec.heading = st[i].heading;
            rec.roll = st[i].roll;
            rec.heading_cmd = st[i].heading;  // overwritten when a command is issued
            rec.separations.reserve(n_obs + n - 1);
            for (std::size_t j = 0; j < n_obs; ++j) {
                const double sep = norm(st[i].position - obs_pos[j]);
                rec.separations.push_back(sep);
                if (!hit && sep < sc.obstacles[j].physical_radius) {
                    hit = CollisionEvent{static_cast<int>(i), static_cast<int>(j), -1, t};
                }
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                rec.separations.push_back(norm(st[i].position - st[j].position));
            }
            const double d2g = norm(sc.agents[i].goal - st[i].position);
            d2g_hist[i].push_back(d2g);

            AgentMetrics& am = out.metrics.agents[i];
            if (!rec.separations.empty()) {
                am.min_separation = std::min(
                    am.min_separation, *std::min_element(rec.separations.begin(), rec.separations.end()));
            }
            am.max_cross_track = std::max(
                am.max_cross_track,
                distance_to_goal_line(st[i].position, sc.agents[i].start, sc.agents[i].goal));
            out.log.records.push_back(std::move(rec));
        }

        if (hit) {
            out.metrics.collision = hit;
            verdict = Verdict::collision;
            break;
        }

        if (std::all_of(reached.begin(), reached.end(), [](bool r) { return r; })) {
            verdict = Verdict::reached;
            break;
        }

        bool stalled = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (reached[i]) continue;
            const auto& h = d2g_hist[i];
            if (static_cast<long long>(h.size()) > stall_steps &&
                h[h.size() - 1 - stall_steps] - h.back() < cfg.stall_progress) {
                out.metrics.agents[i].stalled = true;
                stalled = true;
            }
        }
        if (stalled) {
            verdict = Verdict::stall;
            break;
        }

        if (k >= max_steps) {
            verdict = Verdict::timeout;
            break;
        }

        // Commands for this step, all from the time-t state.
        for (std::size_t i = 0; i < n; ++i) {
            if (reached[i]) {
                forces[i] = Vec2{0.0, 0.0};
                cmds[i] = st[i].heading;
                continue;
            }
            views.clear();
            for (std::size_t j = 0; j < n_obs; ++j) {
                ObstacleSpec o = sc.obstacles[j];
                o.position = obs_pos[j];
                views.push_back(o);
            }
            const std::size_t agent_views_begin = views.size();
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                ObstacleSpec o;
                o.position = st[j].position;
                o.velocity = reached[j] ? Vec2{0.0, 0.0} : velocity_of(st[j]);
                o.b = sc.agent_b;
                o.physical_radius = 0.0;
                o.kind = ObstacleKind::agent;
                views.push_back(o);
            }
            std::sort(views.begin() + agent_views_begin, views.end(),
                      [](const ObstacleSpec& a, const ObstacleSpec& b) {
                          return view_key(a) < view_key(b);
                      });

            const Vec2 vel = velocity_of(st[i]);
            forces[i] = cfg.guidance == GuidanceMode::proposed
                            ? net_force(st[i].position, vel, sc.agents[i].goal, views, sc.gains)
                            : baseline_net_force(st[i].position, sc.agents[i].goal, views, sc.gains);
            cmds[i] = heading_command(forces[i]).value_or(st[i].heading);
        }
        for (std::size_t i = 0; i < n; ++i) {
            StepRecord& rec = out.log.records[out.log.records.size() - n + i];
            rec.heading_cmd = cmds[i];
            rec.force = forces[i];
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (reached[i]) continue;
            const AgentState next = cfg.mode == ControlMode::direct
                                        ? step_direct(st[i], cmds[i], cfg.dt)
                                        : step_coordinated(st[i], cmds[i], cfg.vehicle, cfg.dt);
            out.metrics.agents[i].path_length += norm(next.position - st[i].position);
            jitter_sum[i] += std::abs(wrap_angle(next.heading - st[i].heading));
            jitter_steps[i] += 1;
            st[i] = next;
        }
    }

    out.metrics.verdict = verdict;
    out.metrics.duration = t;
    for (std::size_t i = 0; i < n; ++i) {
        if (jitter_steps[i] > 0) {
            out.metrics.agents[i].heading_jitter =
                jitter_sum[i] / static_cast<double>(jitter_steps[i]) / cfg.dt;
        }
    }
    return out;
}

double min_separation(const TrajectoryLog& log, int agent) {
    double m = std::numeric_limits<double>::infinity();
    for (const StepRecord& r : log.records) {
        if (r.agent != agent) continue;
        for (double s : r.separations) m = std::min(m, s);
    }
    return m;
}

double max_cross_track(const TrajectoryLog& log, int agent, const Vec2& start, const Vec2& goal) {
    double m = 0.0;
    for (const StepRecord& r : log.records) {
        if (r.agent != agent) continue;
        m = std::max(m, distance_to_goal_line(r.position, start, goal));
    }
    return m;
}

double heading_jitter(const TrajectoryLog& log, int agent) {
    double sum = 0.0;
    long long steps = 0;
    const StepRecord* prev = nullptr;
    for (const StepRecord& r : log.records) {
        if (r.agent != agent) continue;
        if (prev) {
            sum += std::abs(wrap_angle(r.heading - prev->heading));
            steps += 1;
        }
        prev = &r;
    }
    return steps > 0 ? sum / static_cast<double>(steps) / log.dt : 0.0;
}

double path_length(const TrajectoryLog& log, int agent) {
    double sum = 0.0;
    const StepRecord* prev = nullptr;
    for (const StepRecord& r : log.records) {
        if (r.agent != agent) continue;
        if (prev) sum += norm(r.position - prev->position);
        prev = &r;
    }
    return sum;
}

}  // namespace apf
