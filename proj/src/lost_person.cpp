#include "wisar/lost_person.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "wisar/errors.hpp"
#include "wisar/format.hpp"

namespace wisar {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::RM: return "RM";
        case Strategy::DT: return "DT";
        case Strategy::RT: return "RT";
        case Strategy::SP: return "SP";
        case Strategy::VE: return "VE";
        case Strategy::BT: return "BT";
    }
    return "?";
}

Strategy parse_strategy(const std::string& name) {
    for (Strategy s : kAllStrategies) {
        if (to_string(s) == name) return s;
    }
    throw ConfigError("unknown behavior strategy '" + name + "'");
}

void BehaviorProfile::validate() const {
    double total = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0)) throw ConfigError("behavior profile: masses must be >= 0");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("behavior profile: masses must sum to 1");
}

BehaviorProfile BehaviorProfile::experienced_hiker() {
    BehaviorProfile p;
    p[Strategy::RT] = 0.30;
    p[Strategy::DT] = 0.25;
    p[Strategy::RM] = 0.15;
    p[Strategy::SP] = 0.15;
    p[Strategy::VE] = 0.10;
    p[Strategy::BT] = 0.05;
    return p;
}

BehaviorProfile BehaviorProfile::only(Strategy s) {
    BehaviorProfile p;
    p[s] = 1.0;
    return p;
}

BehaviorProfile BehaviorProfile::uniform() {
    BehaviorProfile p;
    p.mass.fill(1.0 / 6.0);
    return p;
}

void SpeedModel::validate() const {
    if (!(v_m > 0.0)) throw ConfigError("speed model: v_m must be > 0");
    if (!(sigma >= 0.0)) throw ConfigError("speed model: sigma must be >= 0");
}

void MotionParams::validate() const {
    if (!(dt > 0.0)) throw ConfigError("motion: dt must be > 0");
    if (!(lookahead > 0.0 && trail_capture_radius >= 0.0 && ve_radius >= 0.0 && ve_lattice > 0.0)) {
        throw ConfigError("motion: lookahead and lattice must be > 0, radii >= 0");
    }
    if (slope_samples < 2) throw ConfigError("motion: slope_samples must be >= 2");
}

AgentState AgentState::at(Vec2 start, int ray_index) {
    AgentState a;
    a.position = start;
    a.ray_index = ray_index;
    a.history.push_back(start);
    return a;
}

Strategy select_action(const BehaviorProfile& profile, Rng& rng) {
    const double u = uniform01(rng);
    double cumulative = 0.0;
    Strategy last_positive = Strategy::SP;
    for (Strategy s : kAllStrategies) {
        if (profile[s] <= 0.0) continue;
        cumulative += profile[s];
        last_positive = s;
        if (u < cumulative) return s;
    }
    return last_positive;
}

namespace {

struct Heading {
    Vec2 dir;                  // unit, or zero for "stay"
    double max_distance = -1;  // < 0: unbounded
};

Heading toward(Vec2 from, Vec2 to, bool stop_at_target) {
    const Vec2 d = to - from;
    const double len = norm(d);
    if (len <= 1e-9) return {};
    return {d * (1.0 / len), stop_at_target ? len : -1.0};
}

const std::vector<Vec2>* nearest_trail(const WalkerWorld& world, Vec2 pos, Vec2* closest, double* arc) {
    const std::vector<Vec2>* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& trail : world.trails) {
        if (trail.empty()) continue;
        const double s = project_arc_length(trail, pos);
        const Vec2 p = point_at_arc_length(trail, s);
        const double d = distance(p, pos);
        if (d < best_d) {
            best_d = d;
            best = &trail;
            *closest = p;
            *arc = s;
        }
    }
    if (best == nullptr || best_d > world.motion.trail_capture_radius) return nullptr;
    return best;
}

Heading direction_travel(AgentState& agent, const WalkerWorld& world, Rng& rng) {
    const GuidelineMap& map = *world.guidelines;
    const Ray* ray = &map.rays[static_cast<std::size_t>(agent.ray_index)];
    if (ray->terminated && distance(agent.position, ray->end()) <= world.motion.lookahead) {
        agent.ray_index = transition_ray(map, agent.ray_index, rng);
        ray = &map.rays[static_cast<std::size_t>(agent.ray_index)];
    }
    return toward(agent.position, target_point_on_ray(*ray, agent.position, world.motion.lookahead), false);
}

Heading route_travel(AgentState& agent, const WalkerWorld& world, Rng& rng) {
    Vec2 closest;
    double arc = 0.0;
    const auto* trail = nearest_trail(world, agent.position, &closest, &arc);
    if (trail == nullptr) return direction_travel(agent, world, rng);
    if (distance(closest, agent.position) > 1.0) return toward(agent.position, closest, true);
    Vec2 ahead = point_at_arc_length(*trail, arc + world.motion.lookahead);
    if (distance(ahead, agent.position) <= 1e-9) ahead = point_at_arc_length(*trail, arc - world.motion.lookahead);
    return toward(agent.position, ahead, false);
}

Heading view_enhance(const AgentState& agent, const WalkerWorld& world) {
    const TerrainGrid& terrain = *world.passability.terrain;
    const double lattice = world.motion.ve_lattice;
    const int reach = static_cast<int>(std::floor(world.motion.ve_radius / lattice));
    double best_h = terrain.elevation_at(agent.position);
    Vec2 best = agent.position;
    for (int j = -reach; j <= reach; ++j) {
        for (int i = -reach; i <= reach; ++i) {
            if (i == 0 && j == 0) continue;
            const Vec2 offset{i * lattice, j * lattice};
            if (norm(offset) > world.motion.ve_radius) continue;
            const Vec2 p = agent.position + offset;
            if (!terrain.contains(p)) continue;
            const double h = terrain.elevation_at(p);
            if (h > best_h) {
                best_h = h;
                best = p;
            }
        }
    }
    return toward(agent.position, best, true);
}

Heading back_track(const AgentState& agent) {
    if (agent.backtrack_cursor < 0) return {};
    return toward(agent.position, agent.history[static_cast<std::size_t>(agent.backtrack_cursor)], true);
}

double draw_speed(const SpeedModel& speed, Rng& rng) {
    const double v = speed.v_m + speed.sigma * standard_normal(rng);
    return std::clamp(v, 0.0, speed.max_speed());
}

bool segment_hits_water(const TerrainGrid& terrain, Vec2 from, Vec2 to, double z_0, int samples) {
    for (int k = 1; k < samples; ++k) {
        const double f = static_cast<double>(k) / (samples - 1);
        if (terrain.is_water(from + (to - from) * f, z_0)) return true;
    }
    return false;
}

}  // namespace

AgentState step_agent(AgentState agent, Strategy strategy, const WalkerWorld& world, Rng& rng) {
    if (!agent.active) return agent;

    Heading heading;
    switch (strategy) {
        case Strategy::RM: heading.dir = unit_from_bearing(360.0 * uniform01(rng)); break;
        case Strategy::DT: heading = direction_travel(agent, world, rng); break;
        case Strategy::RT: heading = route_travel(agent, world, rng); break;
        case Strategy::SP: break;
        case Strategy::VE: heading = view_enhance(agent, world); break;
        case Strategy::BT: heading = back_track(agent); break;
    }

    Vec2 next = agent.position;
    bool reached_backtrack_point = false;
    if (squared_norm(heading.dir) > 0.0) {
        const TerrainGrid& terrain = *world.passability.terrain;
        const double z_0 = world.passability.z_0;
        double length = draw_speed(world.speed, rng) * world.motion.dt;
        bool clamped = false;
        if (heading.max_distance >= 0.0 && heading.max_distance <= length) {
            length = heading.max_distance;
            clamped = true;
        }
        const Vec2 proposal = agent.position + heading.dir * length;
        bool blocked = !terrain.contains(proposal);
        double gamma = 0.0;
        if (!blocked && length > 0.0) {
            gamma = average_slope(terrain, agent.position, proposal, world.motion.slope_samples);
            blocked = !world.passability.speed_params.walkable(gamma) ||
                      segment_hits_water(terrain, agent.position, proposal, z_0, world.motion.slope_samples);
        }
        if (!blocked) {
            const double q = speed_scale(gamma, world.passability.speed_params);
            reached_backtrack_point = strategy == Strategy::BT && clamped && q == 1.0;
            const Vec2 candidate = reached_backtrack_point
                                       ? agent.history[static_cast<std::size_t>(agent.backtrack_cursor)]
                                       : agent.position + heading.dir * (length * q);
            if (!terrain.is_water(candidate, z_0)) {
                next = candidate;
                agent.heading = wrap_360(bearing_of(heading.dir));
            } else {
                blocked = true;
            }
        }
        if (blocked && strategy == Strategy::DT) {
            agent.ray_index = transition_ray(*world.guidelines, agent.ray_index, rng);
        }
    }

    agent.position = next;
    agent.history.push_back(next);
    if (strategy == Strategy::BT) {
        if (agent.backtrack_cursor >= 0 && agent.history[static_cast<std::size_t>(agent.backtrack_cursor)] == next) {
            --agent.backtrack_cursor;
        }
    } else {
        agent.backtrack_cursor = static_cast<int>(agent.history.size()) - 2;
    }
    return agent;
}

ParticleCloud::ParticleCloud(int n_agents, int n_slices, double dt)
    : n_agents_(n_agents), n_slices_(n_slices), dt_(dt),
      positions_(static_cast<std::size_t>(n_agents) * static_cast<std::size_t>(n_slices)) {
    if (n_agents < 0 || n_slices < 1) throw ConfigError("particle cloud: need n_agents >= 0 and >= 1 slice");
    if (!(dt > 0.0)) throw ConfigError("particle cloud: dt must be > 0");
}

int ParticleCloud::slice_at_time(double t) const {
    const long s = std::lround(t / dt_);
    return static_cast<int>(std::clamp<long>(s, 0, n_slices_ - 1));
}

ParticleCloud simulate_cloud(Vec2 lkp, const BehaviorProfile& profile, const WalkerWorld& world, int n_agents,
                             int n_steps, std::uint64_t seed) {
    profile.validate();
    world.speed.validate();
    world.motion.validate();
    if (n_agents < 1 || n_steps < 0) throw ConfigError("simulate_cloud: need n_agents >= 1 and n_steps >= 0");
    const int ray_count = world.guidelines->ray_count();
    ParticleCloud cloud(n_agents, n_steps + 1, world.motion.dt);
    for (int a = 0; a < n_agents; ++a) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(a));
        const int ray = static_cast<int>(static_cast<long long>(a) * ray_count / n_agents);
        AgentState agent = AgentState::at(lkp, ray);
        agent.heading = world.guidelines->rays[static_cast<std::size_t>(ray)].bearing;
        cloud.at(a, 0) = lkp;
        for (int s = 1; s <= n_steps; ++s) {
            agent = step_agent(std::move(agent), select_action(profile, rng), world, rng);
            cloud.at(a, s) = agent.position;
        }
    }
    return cloud;
}

std::vector<Vec2> simulate_walker(Vec2 lkp, const BehaviorProfile& profile, const WalkerWorld& world, int n_steps,
                                  std::uint64_t seed) {
    profile.validate();
    world.speed.validate();
    world.motion.validate();
    Rng rng{seed};
    const int ray = static_cast<int>(rng() % static_cast<std::uint64_t>(world.guidelines->ray_count()));
    AgentState agent = AgentState::at(lkp, ray);
    std::vector<Vec2> trajectory{lkp};
    for (int s = 1; s <= n_steps; ++s) {
        agent = step_agent(std::move(agent), select_action(profile, rng), world, rng);
        trajectory.push_back(agent.position);
    }
    return trajectory;
}

double max_travel_radius(const SpeedModel& speed, double t) { return speed.max_speed() * t; }

void write_cloud_table(std::ostream& os, const ParticleCloud& cloud) {
    os << "agent_id,step,x,y\n";
    for (int s = 0; s < cloud.slice_count(); ++s) {
        for (int a = 0; a < cloud.agent_count(); ++a) {
            const Vec2& p = cloud.at(a, s);
            os << a << ',' << s << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
        }
    }
}

ParticleCloud read_cloud_table(std::istream& is, double dt) {
    std::string line;
    if (!std::getline(is, line) || line != "agent_id,step,x,y") throw ConfigError("cloud table: bad header");
    struct Row { int agent; int step; Vec2 p; };
    std::vector<Row> rows;
    int max_agent = -1;
    int max_step = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<std::string, 4> f;
        std::istringstream ss(line);
        for (auto& field : f) {
            if (!std::getline(ss, field, ',')) throw ConfigError("cloud table: malformed row '" + line + "'");
        }
        Row r{static_cast<int>(parse_int(f[0])), static_cast<int>(parse_int(f[1])),
              {parse_double(f[2]), parse_double(f[3])}};
        if (r.agent < 0 || r.step < 0) throw ConfigError("cloud table: negative index");
        max_agent = std::max(max_agent, r.agent);
        max_step = std::max(max_step, r.step);
        rows.push_back(r);
    }
    if (max_agent < 0) throw ConfigError("cloud table: no rows");
    ParticleCloud cloud(max_agent + 1, max_step + 1, dt);
    if (rows.size() != static_cast<std::size_t>(max_agent + 1) * static_cast<std::size_t>(max_step + 1)) {
        throw ConfigError("cloud table: incomplete agent x step grid");
    }
    for (const Row& r : rows) cloud.at(r.agent, r.step) = r.p;
    return cloud;
}

}  // namespace wisar
