#include "wisar/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wisar/errors.hpp"
#include "wisar/rng.hpp"

namespace wisar {

std::string to_string(SearchStrategy s) {
    switch (s) {
        case SearchStrategy::rhs: return "RHS";
        case SearchStrategy::tps: return "TPS";
        case SearchStrategy::iso: return "ISO";
    }
    return "?";
}

SearchStrategy parse_search_strategy(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (n == "RHS") return SearchStrategy::rhs;
    if (n == "TPS") return SearchStrategy::tps;
    if (n == "ISO") return SearchStrategy::iso;
    throw ConfigError("unknown search strategy: " + name);
}

void MissionConfig::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(area_width > 0.0) || !(area_height > 0.0)) throw ConfigError("mission: area must be positive");
    if (!finite(lkp.x) || !finite(lkp.y) || lkp.x < 0.0 || lkp.y < 0.0 || lkp.x > area_width || lkp.y > area_height) {
        throw ConfigError("mission: LKP outside the search area");
    }
    if (n_uavs < 1) throw ConfigError("mission: n_uavs must be >= 1");
    if (!(uav_speed > 0.0) || !finite(uav_speed)) throw ConfigError("mission: uav_speed must be positive");
    if (!(search_delay >= 0.0) || !finite(search_delay)) throw ConfigError("mission: search_delay must be >= 0");
    if (!(sensor_radius > 0.0) || !finite(sensor_radius)) throw ConfigError("mission: sensor_radius must be positive");
    if (!(comm_range >= 0.0)) throw ConfigError("mission: comm_range must be >= 0");
    if (!finite(time_limit)) throw ConfigError("mission: time_limit must be finite");
    if (!(tick > 0.0) || !finite(tick)) throw ConfigError("mission: tick must be positive");
    if (detection_substeps < 1) throw ConfigError("mission: detection_substeps must be >= 1");
    if (!(water_percentile >= 0.0 && water_percentile <= 1.0)) {
        throw ConfigError("mission: water_percentile must be in [0, 1]");
    }
    if (n_agents < 1) throw ConfigError("mission: n_agents must be >= 1");
    if (!(planner_width >= 0.0)) throw ConfigError("mission: planner_width must be >= 0");
    if (!(cell_margin >= 0.0)) throw ConfigError("mission: cell_margin must be >= 0");
    if (!(lkp_freeboard >= 0.0)) throw ConfigError("mission: lkp_freeboard must be >= 0");
    if (iso_sectors < 1) throw ConfigError("mission: iso_sectors must be >= 1");
    terrain.validate();
    const double extent = (terrain.n_e - 1) * terrain.cell_size;
    if (extent + 1e-9 < area_width || extent + 1e-9 < area_height) {
        throw ConfigError("mission: terrain does not cover the search area");
    }
    profile.validate();
    speed.validate();
    speed_scale.validate();
    motion.validate();
    apf.validate();
    if (!(delta_theta > 0.0)) throw ConfigError("mission: delta_theta must be positive");
    effective_planner().validate();
}

PlannerWeights MissionConfig::effective_planner() const {
    PlannerWeights w = planner;
    w.step_len = uav_speed * tick;
    return w;
}

namespace {

MissionConfig with_roughness(MissionConfig c, Roughness r) {
    const TerrainParams preset = roughness_preset(r, c.terrain.n_e, c.terrain.cell_size);
    c.terrain.el = preset.el;
    c.terrain.r_0 = preset.r_0;
    c.terrain.r_r = preset.r_r;
    return c;
}

}  // namespace

MissionConfig MissionConfig::desk(Roughness roughness) {
    MissionConfig c;
    return with_roughness(c, roughness);
}

MissionConfig MissionConfig::full(Roughness roughness) {
    MissionConfig c;
    c.area_width = 65000.0;
    c.area_height = 65000.0;
    c.lkp = {30000.0, 30000.0};
    c.time_limit = 7200.0;
    c.n_agents = 1080;
    c.terrain.n_e = 1001;
    c.terrain.cell_size = 65.0;
    return with_roughness(c, roughness);
}

int scenario_steps(const MissionConfig& config) {
    const double span = config.search_delay + std::max(config.time_limit, 0.0) +
                        config.planner.n_l * config.tick;
    return static_cast<int>(std::ceil(span / config.motion.dt - 1e-9)) + 1;
}

namespace {

WalkerWorld make_world(const MissionConfig& config, const TerrainGrid& terrain, double z_0,
                       const GuidelineMap& guidelines) {
    WalkerWorld world;
    world.passability = {&terrain, config.speed_scale, z_0};
    world.guidelines = &guidelines;
    world.trails = config.trails;
    world.speed = config.speed;
    world.motion = config.motion;
    return world;
}

}  // namespace

std::vector<Vec2> simulate_target(const MissionConfig& config, const TerrainGrid& terrain, double z_0,
                                  const GuidelineMap& guidelines) {
    const WalkerWorld world = make_world(config, terrain, z_0, guidelines);
    return simulate_walker(config.lkp, config.profile, world, scenario_steps(config),
                           stream_seed(config.trial_seed, StreamTag::target));
}

double water_level(const MissionConfig& config, const TerrainGrid& terrain) {
    // A person cannot go missing from under water: keep the LKP dry.
    return std::min(height_percentile(terrain, config.water_percentile),
                    terrain.elevation_at(config.lkp) - config.lkp_freeboard);
}

Scenario build_scenario(const MissionConfig& config) {
    config.validate();
    Scenario s{generate_terrain(config.terrain, config.terrain_seed), 0.0, {}, {}, {}, {}};
    s.z_0 = water_level(config, s.terrain);
    const PassabilityModel pass{&s.terrain, config.speed_scale, s.z_0};
    s.guidelines = build_guideline_map(config.lkp, pass, config.obstacles, config.delta_theta, config.apf);
    const WalkerWorld world = make_world(config, s.terrain, s.z_0, s.guidelines);
    const int steps = scenario_steps(config);
    s.cloud = simulate_cloud(config.lkp, config.profile, world, config.n_agents, steps,
                             stream_seed(config.trial_seed, StreamTag::cloud));
    s.target = simulate_walker(config.lkp, config.profile, world, steps,
                               stream_seed(config.trial_seed, StreamTag::target));
    s.slice_widths.reserve(static_cast<std::size_t>(s.cloud.slice_count()));
    for (int k = 0; k < s.cloud.slice_count(); ++k) s.slice_widths.push_back(silverman_bandwidth(s.cloud.slice(k)));
    return s;
}

Vec2 position_at_time(std::span<const Vec2> track, double dt, double t) {
    if (track.empty()) throw std::invalid_argument("position_at_time: empty track");
    const double u = std::clamp(t / dt, 0.0, static_cast<double>(track.size() - 1));
    const auto i = static_cast<std::size_t>(std::floor(u));
    if (i + 1 >= track.size()) return track.back();
    const double f = u - static_cast<double>(i);
    return track[i] + (track[i + 1] - track[i]) * f;
}

std::vector<Vec2> TrialResult::trajectory(int uav) const {
    std::vector<Vec2> out;
    out.reserve(log.size());
    for (const TickRecord& r : log) out.push_back(r.positions.at(static_cast<std::size_t>(uav)));
    return out;
}

int sweep_contact(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double radius, int substeps) {
    const double r2 = radius * radius;
    for (int s = 1; s <= substeps; ++s) {
        const double f = static_cast<double>(s) / substeps;
        const Vec2 a = a0 + (a1 - a0) * f;
        const Vec2 b = b0 + (b1 - b0) * f;
        if (squared_distance(a, b) <= r2) return s;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// ISO

double IsoCurve::radius_at(double bearing) const {
    const int n = static_cast<int>(radii.size());
    if (n == 0) return 0.0;
    const double w = 360.0 / n;
    const double u = wrap_360(bearing) / w - 0.5;
    const double fl = std::floor(u);
    const double f = u - fl;
    const int k0 = ((static_cast<int>(fl) % n) + n) % n;
    const int k1 = (k0 + 1) % n;
    return radii[static_cast<std::size_t>(k0)] * (1.0 - f) + radii[static_cast<std::size_t>(k1)] * f;
}

namespace {

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (v[i + 1] - v[i]) * (pos - static_cast<double>(i));
}

}  // namespace

IsoCurve iso_curve(std::span<const Vec2> particles, Vec2 center, double fraction, int sectors) {
    if (sectors < 1) throw std::invalid_argument("iso_curve: sectors must be >= 1");
    fraction = std::clamp(fraction, 0.0, 1.0);
    const double w = 360.0 / sectors;
    std::vector<std::vector<double>> by_sector(static_cast<std::size_t>(sectors));
    std::vector<double> at_center;
    std::vector<double> all;
    all.reserve(particles.size());
    for (const Vec2& p : particles) {
        const Vec2 d = p - center;
        const double r = norm(d);
        all.push_back(r);
        if (r < 1e-9) {
            at_center.push_back(0.0);
            continue;
        }
        const int k = std::min(sectors - 1, static_cast<int>(wrap_360(bearing_of(d)) / w));
        by_sector[static_cast<std::size_t>(k)].push_back(r);
    }
    IsoCurve curve;
    curve.center = center;
    curve.radii.resize(static_cast<std::size_t>(sectors));
    const double global = quantile(all, fraction);
    for (int k = 0; k < sectors; ++k) {
        // Pool neighboring sectors so sparse clouds still give a stable radius.
        std::vector<double> pool = at_center;
        const int reach = sectors >= 3 ? 1 : 0;
        std::size_t own = 0;
        for (int o = -reach; o <= reach; ++o) {
            const auto& src = by_sector[static_cast<std::size_t>(((k + o) % sectors + sectors) % sectors)];
            own += src.size();
            pool.insert(pool.end(), src.begin(), src.end());
        }
        curve.radii[static_cast<std::size_t>(k)] = own == 0 ? global : quantile(std::move(pool), fraction);
    }
    return curve;
}

double iso_band(int id, int n) { return static_cast<double>(id + 1) / static_cast<double>(n + 1); }

Vec2 iso_plan_step(Vec2 position, const IsoCurve& curve, double step_len, double launch_bearing) {
    const Vec2 d = position - curve.center;
    const double r = norm(d);
    const double theta = r < 1e-9 ? launch_bearing : bearing_of(d);
    const double rc = curve.radius_at(theta);
    const Vec2 radial = unit_from_bearing(theta);
    if (r < rc - step_len) return position + radial * step_len;
    if (r > rc + step_len) return position - radial * step_len;
    const double dtheta = rad_to_deg(step_len / std::max(rc, step_len));
    const Vec2 aim = curve.point_at(theta + dtheta);
    const Vec2 to = aim - position;
    const double len = norm(to);
    if (len < 1e-9) return position + unit_from_bearing(theta + 90.0) * step_len;
    return position + to * (step_len / len);
}

// ---------------------------------------------------------------------------
// Trial loop

namespace {

Vec2 clamp_to(const Box& box, Vec2 p) {
    return {std::clamp(p.x, box.lo.x, box.hi.x), std::clamp(p.y, box.lo.y, box.hi.y)};
}

double launch_bearing(int id, int n) { return 360.0 * id / n; }

}  // namespace

TrialResult run_search(const MissionConfig& config, const Scenario& scenario) {
    config.validate();
    const PlannerWeights weights = config.effective_planner();
    const int n = config.n_uavs;
    const ParticleCloud& cloud = scenario.cloud;
    const Box area = config.area();
    const double t0 = config.search_delay;
    const std::span<const Vec2> target_track(scenario.target);

    TrialResult result;
    result.strategy = config.strategy;
    result.sensor_radius = config.sensor_radius;
    result.detection_substeps = config.detection_substeps;
    result.time_limit = config.time_limit;
    result.search_start = config.search_delay;

    std::vector<UavState> uavs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        UavState& u = uavs[static_cast<std::size_t>(i)];
        u.id = i;
        u.position = config.lkp;
        u.previous = config.lkp - unit_from_bearing(launch_bearing(i, n)) * weights.step_len;
        u.trajectory.push_back(u.position);
        u.marks = MarkSet(cloud.agent_count());
    }

    auto positions = [&] {
        std::vector<Vec2> p;
        p.reserve(uavs.size());
        for (const UavState& u : uavs) p.push_back(u.position);
        return p;
    };
    auto snapshot = [&](double t, Vec2 target, const CommGraph& graph) {
        TickRecord r;
        r.time = t;
        r.target = target;
        r.positions = positions();
        r.edges = graph.edges;
        for (const UavState& u : uavs) r.mark_counts.push_back(u.marks.count());
        return r;
    };

    Vec2 target = position_at_time(target_track, cloud.dt(), t0);
    {
        const int s0 = cloud.slice_at_time(t0);
        for (UavState& u : uavs) detect_particles(u.position, cloud, s0, config.sensor_radius, u.marks);
    }
    if (config.time_limit <= 0.0) {
        result.log.push_back(snapshot(t0, target, comm_graph(positions(), config.comm_range)));
        return result;
    }
    for (const UavState& u : uavs) {
        if (distance(u.position, target) <= config.sensor_radius) {
            result.success = true;
            result.time_to_find = 0.0;
        }
    }

    const int ticks = static_cast<int>(std::floor(config.time_limit / config.tick + 1e-9));
    for (int k = 0; k < ticks && !result.success; ++k) {
        const double t = t0 + k * config.tick;
        const std::vector<Vec2> pos = positions();
        const CommGraph graph = comm_graph(pos, config.comm_range);
        exchange_pheromones(uavs, graph);

        TickRecord record = snapshot(t, target, graph);
        std::vector<Vec2> next(static_cast<std::size_t>(n));
        record.half_planes.resize(static_cast<std::size_t>(n));

        for (int i = 0; i < n; ++i) {
            UavState& u = uavs[static_cast<std::size_t>(i)];
            PlanTelemetry tel;
            if (config.strategy == SearchStrategy::iso) {
                const IsoCurve curve = iso_curve(cloud.slice(cloud.slice_at_time(t)), config.lkp, iso_band(i, n),
                                                 config.iso_sectors);
                next[static_cast<std::size_t>(i)] =
                    clamp_to(area, iso_plan_step(u.position, curve, weights.step_len, launch_bearing(i, n)));
                tel.heading = wrap_360(bearing_of(next[static_cast<std::size_t>(i)] - u.position));
            } else {
                PlanContext ctx;
                ctx.current = u.position;
                ctx.previous = u.previous;
                for (int j = 0; j < n; ++j) {
                    if (j != i) ctx.neighbors.push_back(pos[static_cast<std::size_t>(j)]);
                }
                if (config.strategy == SearchStrategy::rhs) {
                    std::vector<Vec2> linked;
                    for (int j : graph.neighbors_of(i)) {
                        const Vec2 pj = pos[static_cast<std::size_t>(j)];
                        if (squared_distance(pj, u.position) > 1e-12) {
                            linked.push_back(pj);
                            continue;
                        }
                        // Coincident (at launch): split along the bisector of the launch bearings.
                        const Vec2 self_dir = u.position + unit_from_bearing(launch_bearing(i, n));
                        const Vec2 other_dir = pj + unit_from_bearing(launch_bearing(j, n));
                        const Vec2 other[] = {other_dir};
                        const auto wedge = voronoi_half_planes(self_dir, other);
                        ctx.half_planes.insert(ctx.half_planes.end(), wedge.begin(), wedge.end());
                    }
                    const auto cell = voronoi_half_planes(u.position, linked);
                    ctx.half_planes.insert(ctx.half_planes.end(), cell.begin(), cell.end());
                }
                ctx.cloud = &cloud;
                ctx.marks = &u.marks;
                for (int j = 0; j < weights.n_l; ++j) {
                    const int s = cloud.slice_at_time(t + j * config.tick);
                    ctx.stage_slices.push_back(s);
                    ctx.stage_widths.push_back(config.planner_width > 0.0
                                                   ? config.planner_width
                                                   : scenario.slice_widths[static_cast<std::size_t>(s)]);
                }
                ctx.sensor_radius = config.sensor_radius;
                ctx.bounds = area;
                ctx.cell_margin = config.cell_margin;
                const PlanResult plan =
                    config.strategy == SearchStrategy::rhs ? plan_step(ctx, weights) : tps_plan_step(ctx, weights);
                next[static_cast<std::size_t>(i)] = plan.next;
                tel.heading = plan.heading;
                tel.objective = plan.objective;
                tel.degenerate = plan.degenerate;
                tel.feasible = path_feasible(plan.path, ctx, weights);
                record.half_planes[static_cast<std::size_t>(i)] = std::move(ctx.half_planes);
            }
            record.plans.push_back(tel);
        }
        result.log.push_back(std::move(record));

        // Execute the step, sensing along the way.
        const Vec2 target_next = position_at_time(target_track, cloud.dt(), t + config.tick);
        const int S = config.detection_substeps;
        for (int s = 1; s <= S; ++s) {
            const double f = static_cast<double>(s) / S;
            const int slice = cloud.slice_at_time(t + config.tick * f);
            for (int i = 0; i < n; ++i) {
                UavState& u = uavs[static_cast<std::size_t>(i)];
                const Vec2 p = u.position + (next[static_cast<std::size_t>(i)] - u.position) * f;
                detect_particles(p, cloud, slice, config.sensor_radius, u.marks);
            }
        }
        int first = 0;
        for (int i = 0; i < n; ++i) {
            const int c = sweep_contact(pos[static_cast<std::size_t>(i)], next[static_cast<std::size_t>(i)], target,
                                        target_next, config.sensor_radius, S);
            if (c > 0 && (first == 0 || c < first)) first = c;
        }
        if (first > 0) {
            result.success = true;
            result.time_to_find = k * config.tick + config.tick * first / S;
        }
        for (int i = 0; i < n; ++i) {
            UavState& u = uavs[static_cast<std::size_t>(i)];
            u.previous = u.position;
            u.position = next[static_cast<std::size_t>(i)];
            u.trajectory.push_back(u.position);
        }
        target = target_next;
    }
    if (result.log.empty()) {
        result.log.push_back(snapshot(t0, target, comm_graph(positions(), config.comm_range)));
        return result;
    }
    const double t_end = result.log.back().time + config.tick;
    result.log.push_back(snapshot(t_end, target, comm_graph(positions(), config.comm_range)));
    return result;
}

TrialResult run_trial(const MissionConfig& config) { return run_search(config, build_scenario(config)); }

ReplayMetrics replay_metrics(const TrialResult& result) {
    ReplayMetrics m;
    if (result.log.empty()) return m;
    const double r = result.sensor_radius;
    if (result.time_limit <= 0.0) return m;
    const TickRecord& first = result.log.front();
    for (const Vec2& p : first.positions) {
        if (distance(p, first.target) <= r) {
            m.success = true;
            m.time_to_find = 0.0;
            return m;
        }
    }
    for (std::size_t k = 0; k + 1 < result.log.size(); ++k) {
        const TickRecord& a = result.log[k];
        const TickRecord& b = result.log[k + 1];
        int best = 0;
        for (std::size_t i = 0; i < a.positions.size(); ++i) {
            const int c = sweep_contact(a.positions[i], b.positions[i], a.target, b.target, r,
                                        result.detection_substeps);
            if (c > 0 && (best == 0 || c < best)) best = c;
        }
        if (best > 0) {
            m.success = true;
            m.time_to_find = (a.time - result.search_start) + (b.time - a.time) * best / result.detection_substeps;
            return m;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Benchmark

Improvement evaluation_indices(std::optional<double> t_s, std::optional<double> t_ben, double v_s, double v_ben) {
    Improvement imp;
    if (t_s && t_ben && *t_ben != 0.0) imp.time = (*t_ben - *t_s) / *t_ben;
    if (v_ben != 0.0) imp.success = (v_s - v_ben) / v_ben;
    return imp;
}

std::uint64_t benchmark_trial_seed(std::uint64_t seed_base, int k) {
    return stream_seed(seed_base, static_cast<std::uint64_t>(k));
}

BenchmarkReport summarize(std::span<const SearchStrategy> strategies, std::vector<TrialMetrics> trials) {
    BenchmarkReport report;
    for (SearchStrategy s : strategies) {
        StrategyStats st;
        st.strategy = s;
        double sum = 0.0;
        for (const TrialMetrics& m : trials) {
            if (m.strategy != s) continue;
            ++st.trials;
            if (m.success) {
                ++st.successes;
                sum += m.time_to_find;
            }
        }
        st.success_rate = st.trials > 0 ? static_cast<double>(st.successes) / st.trials : 0.0;
        if (st.successes > 0) st.mean_time = sum / st.successes;
        report.stats.push_back(st);
    }
    const auto rhs = std::find_if(report.stats.begin(), report.stats.end(),
                                  [](const StrategyStats& s) { return s.strategy == SearchStrategy::rhs; });
    if (rhs != report.stats.end()) {
        for (const StrategyStats& other : report.stats) {
            if (other.strategy == SearchStrategy::rhs) continue;
            report.comparisons.push_back({SearchStrategy::rhs, other.strategy,
                                          evaluation_indices(rhs->mean_time, other.mean_time, rhs->success_rate,
                                                             other.success_rate)});
        }
    }
    report.trials = std::move(trials);
    return report;
}

BenchmarkReport run_benchmark(const MissionConfig& config_template, std::span<const SearchStrategy> strategies,
                              int n_trials, std::uint64_t seed_base) {
    if (n_trials < 0) throw ConfigError("benchmark: n_trials must be >= 0");
    std::vector<TrialMetrics> trials;
    for (int k = 0; k < n_trials; ++k) {
        MissionConfig c = config_template;
        c.trial_seed = benchmark_trial_seed(seed_base, k);
        c.terrain_seed = c.trial_seed;
        const Scenario scenario = build_scenario(c);
        for (SearchStrategy s : strategies) {
            c.strategy = s;
            const TrialResult r = run_search(c, scenario);
            trials.push_back({k, c.trial_seed, s, r.success, r.time_to_find});
        }
    }
    return summarize(strategies, std::move(trials));
}

}  // namespace wisar
