#include "wisar/io.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "wisar/errors.hpp"
#include "wisar/format.hpp"
#include "wisar/rng.hpp"

#ifndef WISAR_VERSION
#define WISAR_VERSION "dev"
#endif

namespace wisar {

namespace {

struct Field {
    std::string key;
    std::function<std::string(const MissionConfig&)> get;
    std::function<void(MissionConfig&, const std::string&)> set;
};

// Getters only read through the reference, so the const_cast is safe.
Field num(std::string key, std::function<double&(MissionConfig&)> ref) {
    return {key, [ref](const MissionConfig& c) { return format_double(ref(const_cast<MissionConfig&>(c))); },
            [ref](MissionConfig& c, const std::string& v) { ref(c) = parse_double(v); }};
}

Field integer(std::string key, std::function<int&(MissionConfig&)> ref) {
    return {key, [ref](const MissionConfig& c) { return std::to_string(ref(const_cast<MissionConfig&>(c))); },
            [ref](MissionConfig& c, const std::string& v) {
                const long long x = parse_int(v);
                if (x < -2147483647LL || x > 2147483647LL) throw std::invalid_argument("out of range: " + v);
                ref(c) = static_cast<int>(x);
            }};
}

Field seed(std::string key, std::function<std::uint64_t&(MissionConfig&)> ref) {
    return {key, [ref](const MissionConfig& c) { return std::to_string(ref(const_cast<MissionConfig&>(c))); },
            [ref](MissionConfig& c, const std::string& v) { ref(c) = parse_uint(v); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(num("area_width", [](MissionConfig& c) -> double& { return c.area_width; }));
        f.push_back(num("area_height", [](MissionConfig& c) -> double& { return c.area_height; }));
        f.push_back(num("lkp_x", [](MissionConfig& c) -> double& { return c.lkp.x; }));
        f.push_back(num("lkp_y", [](MissionConfig& c) -> double& { return c.lkp.y; }));
        f.push_back(integer("n_uavs", [](MissionConfig& c) -> int& { return c.n_uavs; }));
        f.push_back(num("uav_speed", [](MissionConfig& c) -> double& { return c.uav_speed; }));
        f.push_back(num("search_delay", [](MissionConfig& c) -> double& { return c.search_delay; }));
        f.push_back(num("sensor_radius", [](MissionConfig& c) -> double& { return c.sensor_radius; }));
        f.push_back(num("comm_range", [](MissionConfig& c) -> double& { return c.comm_range; }));
        f.push_back(num("time_limit", [](MissionConfig& c) -> double& { return c.time_limit; }));
        f.push_back(num("tick", [](MissionConfig& c) -> double& { return c.tick; }));
        f.push_back(integer("detection_substeps", [](MissionConfig& c) -> int& { return c.detection_substeps; }));

        f.push_back(integer("terrain.n_e", [](MissionConfig& c) -> int& { return c.terrain.n_e; }));
        f.push_back(num("terrain.el", [](MissionConfig& c) -> double& { return c.terrain.el; }));
        f.push_back(num("terrain.r_0", [](MissionConfig& c) -> double& { return c.terrain.r_0; }));
        f.push_back(num("terrain.r_r", [](MissionConfig& c) -> double& { return c.terrain.r_r; }));
        f.push_back(num("terrain.cell_size", [](MissionConfig& c) -> double& { return c.terrain.cell_size; }));
        f.push_back(num("terrain.vertical_scale", [](MissionConfig& c) -> double& { return c.terrain.vertical_scale; }));
        f.push_back(seed("terrain_seed", [](MissionConfig& c) -> std::uint64_t& { return c.terrain_seed; }));
        f.push_back(num("water_percentile", [](MissionConfig& c) -> double& { return c.water_percentile; }));
        f.push_back(num("lkp_freeboard", [](MissionConfig& c) -> double& { return c.lkp_freeboard; }));

        for (Strategy s : kAllStrategies) {
            f.push_back(num("profile." + to_string(s), [s](MissionConfig& c) -> double& { return c.profile[s]; }));
        }
        f.push_back(num("speed.v_m", [](MissionConfig& c) -> double& { return c.speed.v_m; }));
        f.push_back(num("speed.sigma", [](MissionConfig& c) -> double& { return c.speed.sigma; }));
        f.push_back(num("gamma_min", [](MissionConfig& c) -> double& { return c.speed_scale.gamma_min; }));
        f.push_back(num("gamma_max", [](MissionConfig& c) -> double& { return c.speed_scale.gamma_max; }));
        f.push_back(num("motion.dt", [](MissionConfig& c) -> double& { return c.motion.dt; }));
        f.push_back(num("motion.lookahead", [](MissionConfig& c) -> double& { return c.motion.lookahead; }));
        f.push_back(num("motion.trail_capture_radius",
                        [](MissionConfig& c) -> double& { return c.motion.trail_capture_radius; }));
        f.push_back(num("motion.ve_radius", [](MissionConfig& c) -> double& { return c.motion.ve_radius; }));
        f.push_back(num("motion.ve_lattice", [](MissionConfig& c) -> double& { return c.motion.ve_lattice; }));
        f.push_back(integer("motion.slope_samples", [](MissionConfig& c) -> int& { return c.motion.slope_samples; }));
        f.push_back(num("apf.k_rep", [](MissionConfig& c) -> double& { return c.apf.k_rep; }));
        f.push_back(num("apf.k_att", [](MissionConfig& c) -> double& { return c.apf.k_att; }));
        f.push_back(num("apf.d_0", [](MissionConfig& c) -> double& { return c.apf.d_0; }));
        f.push_back(num("apf.integration_step", [](MissionConfig& c) -> double& { return c.apf.integration_step; }));
        f.push_back(num("apf.max_length", [](MissionConfig& c) -> double& { return c.apf.max_length; }));
        f.push_back(num("delta_theta", [](MissionConfig& c) -> double& { return c.delta_theta; }));
        f.push_back(integer("n_agents", [](MissionConfig& c) -> int& { return c.n_agents; }));

        f.push_back(num("planner.alpha", [](MissionConfig& c) -> double& { return c.planner.alpha; }));
        f.push_back(num("planner.epsilon", [](MissionConfig& c) -> double& { return c.planner.epsilon; }));
        f.push_back(num("planner.k_1", [](MissionConfig& c) -> double& { return c.planner.k_1; }));
        f.push_back(num("planner.k_2", [](MissionConfig& c) -> double& { return c.planner.k_2; }));
        f.push_back(num("planner.xi", [](MissionConfig& c) -> double& { return c.planner.xi; }));
        f.push_back(num("planner.theta_max", [](MissionConfig& c) -> double& { return c.planner.theta_max; }));
        f.push_back(integer("planner.n_l", [](MissionConfig& c) -> int& { return c.planner.n_l; }));
        f.push_back(num("planner.d_min", [](MissionConfig& c) -> double& { return c.planner.d_min; }));
        f.push_back(num("planner.d_max", [](MissionConfig& c) -> double& { return c.planner.d_max; }));
        f.push_back(num("planner.proximity_cap", [](MissionConfig& c) -> double& { return c.planner.proximity_cap; }));
        f.push_back(integer("planner.n_headings", [](MissionConfig& c) -> int& { return c.planner.n_headings; }));
        f.push_back(integer("planner.refine_leaves", [](MissionConfig& c) -> int& { return c.planner.refine_leaves; }));
        f.push_back(
            integer("planner.golden_iterations", [](MissionConfig& c) -> int& { return c.planner.golden_iterations; }));
        f.push_back(num("planner_width", [](MissionConfig& c) -> double& { return c.planner_width; }));
        f.push_back(num("cell_margin", [](MissionConfig& c) -> double& { return c.cell_margin; }));
        f.push_back(integer("iso_sectors", [](MissionConfig& c) -> int& { return c.iso_sectors; }));

        f.push_back({"strategy", [](const MissionConfig& c) { return to_string(c.strategy); },
                     [](MissionConfig& c, const std::string& v) { c.strategy = parse_search_strategy(v); }});
        f.push_back(seed("trial_seed", [](MissionConfig& c) -> std::uint64_t& { return c.trial_seed; }));
        return f;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> numbers(const std::string& text) {
    std::istringstream is(text);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(parse_double(tok));
    return out;
}

std::string join_points(std::span<const Vec2> pts) {
    std::string s;
    for (const Vec2& p : pts) {
        if (!s.empty()) s += ' ';
        s += format_double(p.x) + ' ' + format_double(p.y);
    }
    return s;
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const Field& f : fields()) keys.push_back(f.key);
    keys.emplace_back("obstacle");
    keys.emplace_back("trail");
    return keys;
}

void apply_setting(MissionConfig& config, const std::string& key, const std::string& value) {
    try {
        if (key == "obstacle") {
            const auto v = numbers(value);
            if (v.size() != 2) throw std::invalid_argument("expected 'x y'");
            config.obstacles.push_back({{v[0], v[1]}});
            return;
        }
        if (key == "trail") {
            const auto v = numbers(value);
            if (v.size() < 4 || v.size() % 2 != 0) throw std::invalid_argument("expected at least two 'x y' pairs");
            std::vector<Vec2> pts;
            for (std::size_t i = 0; i < v.size(); i += 2) pts.push_back({v[i], v[i + 1]});
            config.trails.push_back(std::move(pts));
            return;
        }
        for (const Field& f : fields()) {
            if (f.key == key) {
                f.set(config, value);
                return;
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
    throw ConfigError("unknown config key '" + key + "'");
}

void read_config(std::istream& is, MissionConfig& config) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        try {
            apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::vector<std::pair<std::string, std::string>> config_entries(const MissionConfig& config) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Field& f : fields()) out.emplace_back(f.key, f.get(config));
    for (const Obstacle& o : config.obstacles) {
        out.emplace_back("obstacle", format_double(o.position.x) + ' ' + format_double(o.position.y));
    }
    for (const auto& t : config.trails) out.emplace_back("trail", join_points(t));
    return out;
}

void write_config(std::ostream& os, const MissionConfig& config) {
    for (const auto& [k, v] : config_entries(config)) os << k << " = " << v << '\n';
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Vec2 vec_from_json(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

HalfPlane::Side side_from_string(const std::string& s) {
    if (s == "below") return HalfPlane::Side::below;
    if (s == "above") return HalfPlane::Side::above;
    if (s == "left_of") return HalfPlane::Side::left_of;
    if (s == "right_of") return HalfPlane::Side::right_of;
    throw ConfigError("unknown half-plane side '" + s + "'");
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const Vec2& p) { return Json::array({p.x, p.y}); }

Json to_json(const TrialResult& result) {
    Json j;
    j["strategy"] = to_string(result.strategy);
    j["success"] = result.success;
    j["time_to_find"] = result.success ? Json(result.time_to_find) : Json(nullptr);
    j["sensor_radius"] = result.sensor_radius;
    j["detection_substeps"] = result.detection_substeps;
    j["time_limit"] = result.time_limit;
    j["search_start"] = result.search_start;
    Json ticks = Json::array();
    for (const TickRecord& r : result.log) {
        Json t;
        t["time"] = r.time;
        t["target"] = to_json(r.target);
        Json pos = Json::array();
        for (const Vec2& p : r.positions) pos.push_back(to_json(p));
        t["uavs"] = std::move(pos);
        Json edges = Json::array();
        for (const auto& [a, b] : r.edges) edges.push_back(Json::array({a, b}));
        t["edges"] = std::move(edges);
        t["marks"] = r.mark_counts;
        Json plans = Json::array();
        for (const PlanTelemetry& p : r.plans) {
            plans.push_back(
                {{"heading", p.heading}, {"objective", p.objective}, {"degenerate", p.degenerate}, {"feasible", p.feasible}});
        }
        t["plans"] = std::move(plans);
        Json cells = Json::array();
        for (const auto& hps : r.half_planes) {
            Json cell = Json::array();
            for (const HalfPlane& hp : hps) cell.push_back({{"a", hp.a}, {"b", hp.b}, {"side", to_string(hp.side)}});
            cells.push_back(std::move(cell));
        }
        t["half_planes"] = std::move(cells);
        ticks.push_back(std::move(t));
    }
    j["ticks"] = std::move(ticks);
    return j;
}

TrialResult trial_from_json(const Json& j) {
    try {
        TrialResult r;
        r.strategy = parse_search_strategy(j.at("strategy").get<std::string>());
        r.success = j.at("success").get<bool>();
        r.time_to_find = j.at("time_to_find").is_null() ? 0.0 : j.at("time_to_find").get<double>();
        r.sensor_radius = j.at("sensor_radius").get<double>();
        r.detection_substeps = j.at("detection_substeps").get<int>();
        r.time_limit = j.at("time_limit").get<double>();
        r.search_start = j.at("search_start").get<double>();
        for (const Json& t : j.at("ticks")) {
            TickRecord rec;
            rec.time = t.at("time").get<double>();
            rec.target = vec_from_json(t.at("target"));
            for (const Json& p : t.at("uavs")) rec.positions.push_back(vec_from_json(p));
            for (const Json& e : t.at("edges")) rec.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            rec.mark_counts = t.at("marks").get<std::vector<int>>();
            for (const Json& p : t.at("plans")) {
                rec.plans.push_back({p.at("heading").get<double>(), p.at("objective").get<double>(),
                                     p.at("degenerate").get<bool>(), p.at("feasible").get<bool>()});
            }
            for (const Json& cell : t.at("half_planes")) {
                std::vector<HalfPlane> hps;
                for (const Json& hp : cell) {
                    hps.push_back({hp.at("a").get<double>(), hp.at("b").get<double>(),
                                   side_from_string(hp.at("side").get<std::string>())});
                }
                rec.half_planes.push_back(std::move(hps));
            }
            r.log.push_back(std::move(rec));
        }
        return r;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed trial log: ") + e.what());
    }
}

Json to_json(const TrialMetrics& m) {
    return {{"trial", m.trial},
            {"seed", m.seed},
            {"strategy", to_string(m.strategy)},
            {"success", m.success},
            {"time_to_find", m.success ? Json(m.time_to_find) : Json(nullptr)}};
}

Json to_json(const BenchmarkReport& report) {
    Json j;
    Json strategies = Json::array();
    for (const StrategyStats& s : report.stats) {
        strategies.push_back({{"strategy", to_string(s.strategy)},
                              {"trials", s.trials},
                              {"successes", s.successes},
                              {"V", s.success_rate},
                              {"T", optional_number(s.mean_time)},
                              {"T_minutes", s.mean_time ? Json(*s.mean_time / 60.0) : Json(nullptr)}});
    }
    j["strategies"] = std::move(strategies);
    Json comps = Json::array();
    for (const Comparison& c : report.comparisons) {
        comps.push_back({{"strategy", to_string(c.strategy)},
                         {"baseline", to_string(c.baseline)},
                         {"T_e", optional_number(c.improvement.time)},
                         {"V_e", optional_number(c.improvement.success)}});
    }
    j["comparisons"] = std::move(comps);
    j["notes"] = Json::array({"T is the mean time to find over successful trials only, in seconds from launch.",
                              "ISO is an approximation: UAVs sweep per-bearing radial quantile curves of the "
                              "predicted particle cloud."});
    return j;
}

Json to_json(const RunManifest& m) {
    Json j;
    j["tool"] = "wisar";
    j["version"] = version_tag();
    j["command"] = m.command;
    j["options"] = m.options;
    Json cfg = Json::array();
    for (const auto& [k, v] : config_entries(m.config)) cfg.push_back(k + " = " + v);
    j["config"] = std::move(cfg);
    j["seeds"] = {{"trial_seed", m.config.trial_seed},
                  {"terrain_seed", m.config.terrain_seed},
                  {"terrain_stream", stream_seed(m.config.terrain_seed, StreamTag::terrain)},
                  {"cloud_stream", stream_seed(m.config.trial_seed, StreamTag::cloud)},
                  {"target_stream", stream_seed(m.config.trial_seed, StreamTag::target)}};
    j["outputs"] = m.outputs;
    j["created_at"] = m.created_at;
    return j;
}

RunManifest manifest_from_json(const Json& j) {
    try {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        if (j.contains("options")) m.options = j.at("options");
        std::string text;
        for (const Json& line : j.at("config")) text += line.get<std::string>() + '\n';
        std::istringstream is(text);
        m.config.obstacles.clear();
        m.config.trails.clear();
        read_config(is, m.config);
        if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (j.contains("created_at")) m.created_at = j.at("created_at").get<std::string>();
        return m;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde != nullptr && *sde != '\0') {
        try {
            now = static_cast<std::time_t>(parse_int(sde));
        } catch (const std::invalid_argument&) {
        }
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string version_tag() { return WISAR_VERSION; }

}  // namespace wisar
