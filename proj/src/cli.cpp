#include "wisar/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wisar/errors.hpp"
#include "wisar/format.hpp"
#include "wisar/harness.hpp"
#include "wisar/io.hpp"

namespace fs = std::filesystem;

namespace wisar {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void save(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write '" + path.string() + "'");
    os << content;
    if (!os) throw IoError("write failed for '" + path.string() + "'");
}

Json parse_json(const std::string& path) {
    try {
        return Json::parse(slurp(path));
    } catch (const Json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Flags shared by every subcommand.
struct Common {
    std::string manifest;
    std::string config;
    std::vector<std::string> sets;
    std::string preset = "severe";
    std::string scale = "desk";
    std::uint64_t seed = 0;
    std::string out = "out";

    CLI::Option* seed_opt = nullptr;
    CLI::Option* preset_opt = nullptr;
    CLI::Option* scale_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--manifest", c.manifest, "Re-run from a manifest.json written by an earlier run");
    sub->add_option("--config", c.config, "Key-value mission config file");
    sub->add_option("--set", c.sets, "Override one config key, KEY=VALUE (repeatable)");
    c.preset_opt = sub->add_option("--preset", c.preset, "Terrain roughness: mild, moderate, severe")
                       ->check(CLI::IsMember({"mild", "moderate", "severe"}));
    c.scale_opt =
        sub->add_option("--scale", c.scale, "Mission scale: desk (16 km) or full (65 km)")->check(CLI::IsMember({"desk", "full"}));
    c.seed_opt = sub->add_option("--seed", c.seed, "Seed (default 0)");
    sub->add_option("--out", c.out, "Output directory");
}

/// Option values recorded in (and restorable from) the manifest.
class Options {
public:
    Options(const CLI::App* sub, Json restored) : sub_(sub), restored_(std::move(restored)) {}

    template <class T>
    void bind(const std::string& name, T& value) {
        const std::string flag = "--" + name;
        if (sub_->count(flag) == 0 && restored_.contains(name)) value = restored_.at(name).get<T>();
        recorded_[name] = value;
    }

    const Json& recorded() const { return recorded_; }

private:
    const CLI::App* sub_;
    Json restored_;
    Json recorded_ = Json::object();
};

struct Resolved {
    MissionConfig config;
    Json restored = Json::object();
};

Resolved resolve(const CLI::App* sub, Common& c) {
    Resolved r;
    if (!c.manifest.empty()) {
        RunManifest m = manifest_from_json(parse_json(c.manifest));
        r.config = m.config;
        r.restored = m.options;
        if (c.preset_opt->count() == 0 && r.restored.contains("preset")) c.preset = r.restored["preset"].get<std::string>();
        if (c.scale_opt->count() == 0 && r.restored.contains("scale")) c.scale = r.restored["scale"].get<std::string>();
        if (c.seed_opt->count() == 0 && r.restored.contains("seed")) c.seed = r.restored["seed"].get<std::uint64_t>();
    } else {
        const Roughness rough = parse_roughness(c.preset);
        r.config = c.scale == "full" ? MissionConfig::full(rough) : MissionConfig::desk(rough);
        r.config.trial_seed = c.seed;
        r.config.terrain_seed = c.seed;
    }
    if (!c.config.empty()) {
        std::istringstream is(slurp(c.config));
        read_config(is, r.config);
    }
    for (const std::string& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
        apply_setting(r.config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed_opt->count() > 0) {
        r.config.trial_seed = c.seed;
        r.config.terrain_seed = c.seed;
    }
    (void)sub;
    return r;
}

void write_manifest(const fs::path& dir, const std::string& command, const Json& options, const MissionConfig& config,
                    std::vector<std::string> outputs) {
    RunManifest m;
    m.command = command;
    m.options = options;
    m.config = config;
    m.outputs = std::move(outputs);
    m.created_at = utc_timestamp();
    save(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

fs::path prepare_dir(const std::string& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create '" + out + "': " + ec.message());
    return fs::path(out);
}

std::string svg_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

/// Top-down sketch of a trial: UAV paths, target track and LKP.
std::string trial_svg(const TrialResult& r, Vec2 lkp) {
    Vec2 lo = lkp;
    Vec2 hi = lkp;
    auto grow = [&](Vec2 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    };
    for (const TickRecord& t : r.log) {
        grow(t.target);
        for (const Vec2& p : t.positions) grow(p);
    }
    const double pad = 200.0;
    lo = lo - Vec2{pad, pad};
    hi = hi + Vec2{pad, pad};
    const double w = hi.x - lo.x;
    const double h = hi.y - lo.y;
    const double scale = 800.0 / std::max(w, h);
    auto sx = [&](double x) { return svg_number((x - lo.x) * scale); };
    auto sy = [&](double y) { return svg_number((hi.y - y) * scale); };
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_number(w * scale) << "\" height=\""
       << svg_number(h * scale) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const std::size_t n = r.log.empty() ? 0 : r.log.front().positions.size();
    for (std::size_t i = 0; i < n; ++i) {
        os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colors[i % 6] << "\" points=\"";
        for (const TickRecord& t : r.log) os << sx(t.positions[i].x) << ',' << sy(t.positions[i].y) << ' ';
        os << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke-width=\"2.5\" stroke=\"black\" points=\"";
    for (const TickRecord& t : r.log) os << sx(t.target.x) << ',' << sy(t.target.y) << ' ';
    os << "\"/>\n";
    os << "<circle cx=\"" << sx(lkp.x) << "\" cy=\"" << sy(lkp.y) << "\" r=\"5\" fill=\"red\"/>\n";
    os << "</svg>\n";
    return os.str();
}

std::string trajectories_csv(const TrialResult& r) {
    std::ostringstream os;
    os << "tick,time,kind,id,x,y\n";
    for (std::size_t k = 0; k < r.log.size(); ++k) {
        const TickRecord& t = r.log[k];
        for (std::size_t i = 0; i < t.positions.size(); ++i) {
            os << k << ',' << format_double(t.time) << ",uav," << i << ',' << format_double(t.positions[i].x) << ','
               << format_double(t.positions[i].y) << '\n';
        }
        os << k << ',' << format_double(t.time) << ",target,0," << format_double(t.target.x) << ','
           << format_double(t.target.y) << '\n';
    }
    return os.str();
}

Kernel parse_kernel(const std::string& name) {
    if (name == "gaussian") return Kernel::gaussian;
    if (name == "epanechnikov") return Kernel::epanechnikov;
    throw ConfigError("unknown kernel '" + name + "'");
}

/// Writes <stem>.txt and <stem>.pgm for one slice. Returns the file names.
std::vector<std::string> export_heatmap(const fs::path& dir, const std::string& stem, const ParticleCloud& cloud, int slice,
                                        double cell, double bandwidth, Kernel kernel, Vec2 lo, Vec2 hi) {
    const auto pts = cloud.slice(slice);
    DensityParams params;
    params.kernel = kernel;
    params.h_s = bandwidth > 0.0 ? bandwidth : silverman_bandwidth(pts);
    const RasterSpec raster = raster_around(pts, cell, 4.0 * params.h_s, lo, hi);
    const std::vector<double> values = rasterize_density(cloud, slice, raster, params, MarkSet(cloud.agent_count()));
    std::ostringstream txt;
    write_matrix(txt, raster, values);
    save(dir / (stem + ".txt"), txt.str());
    std::ostringstream pgm;
    write_pgm(pgm, raster, values);
    save(dir / (stem + ".pgm"), pgm.str());
    return {stem + ".txt", stem + ".pgm"};
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_terrain(const CLI::App* sub, Common& c, std::ostream& out) {
    Resolved r = resolve(sub, c);
    Options opts(sub, r.restored);
    opts.bind("preset", c.preset);
    opts.bind("scale", c.scale);
    opts.bind("seed", c.seed);
    r.config.validate();
    const TerrainGrid grid = generate_terrain(r.config.terrain, r.config.terrain_seed);
    const fs::path dir = prepare_dir(c.out);
    std::ostringstream os;
    write_heightfield(os, grid);
    save(dir / "terrain.txt", os.str());
    write_manifest(dir, "terrain", opts.recorded(), r.config, {"terrain.txt"});
    out << "terrain " << grid.size() << "x" << grid.size() << " cell " << format_double(grid.cell_size())
        << " m, seed " << r.config.terrain_seed << " -> " << (dir / "terrain.txt").string() << '\n';
    return 0;
}

struct SimulateArgs {
    std::string terrain;
    double hours = 2.0;
    int agents = 1080;
    bool heatmaps = false;
    double cell = 100.0;
};

int cmd_simulate(const CLI::App* sub, Common& c, SimulateArgs& a, std::ostream& out) {
    Resolved r = resolve(sub, c);
    Options opts(sub, r.restored);
    opts.bind("preset", c.preset);
    opts.bind("scale", c.scale);
    opts.bind("seed", c.seed);
    opts.bind("terrain", a.terrain);
    opts.bind("hours", a.hours);
    opts.bind("agents", a.agents);
    opts.bind("heatmaps", a.heatmaps);
    opts.bind("cell", a.cell);
    if (a.terrain.empty()) throw ConfigError("simulate needs --terrain FILE");
    if (!(a.hours >= 0.0)) throw ConfigError("--hours must be >= 0");
    if (a.agents < 1) throw ConfigError("--agents must be >= 1");
    if (!(a.cell > 0.0)) throw ConfigError("--cell must be > 0");
    r.config.n_agents = a.agents;

    std::istringstream is(slurp(a.terrain));
    const TerrainGrid grid = read_heightfield(is);
    if (!grid.contains(r.config.lkp)) throw ConfigError("LKP lies outside the terrain file");
    r.config.validate();
    const double z_0 = water_level(r.config, grid);
    const PassabilityModel pass{&grid, r.config.speed_scale, z_0};
    const GuidelineMap map = build_guideline_map(r.config.lkp, pass, r.config.obstacles, r.config.delta_theta, r.config.apf);
    WalkerWorld world;
    world.passability = pass;
    world.guidelines = &map;
    world.trails = r.config.trails;
    world.speed = r.config.speed;
    world.motion = r.config.motion;
    const int steps = static_cast<int>(std::llround(a.hours * 3600.0 / r.config.motion.dt));
    const ParticleCloud cloud = simulate_cloud(r.config.lkp, r.config.profile, world, a.agents, steps,
                                               stream_seed(r.config.trial_seed, StreamTag::cloud));

    const fs::path dir = prepare_dir(c.out);
    std::vector<std::string> outputs{"cloud.csv", "rays.txt"};
    std::ostringstream cloud_os;
    write_cloud_table(cloud_os, cloud);
    save(dir / "cloud.csv", cloud_os.str());
    std::ostringstream rays_os;
    write_ray_dump(rays_os, map);
    save(dir / "rays.txt", rays_os.str());
    if (a.heatmaps) {
        for (int h = 0; h * 3600.0 <= a.hours * 3600.0 + 1e-9; ++h) {
            const int slice = cloud.slice_at_time(h * 3600.0);
            for (std::string& f : export_heatmap(dir, "heatmap_h" + std::to_string(h), cloud, slice, a.cell, 0.0,
                                                 Kernel::gaussian, grid.extent_min(), grid.extent_max())) {
                outputs.push_back(std::move(f));
            }
        }
    }
    write_manifest(dir, "simulate", opts.recorded(), r.config, outputs);
    out << "simulated " << a.agents << " agents x " << cloud.slice_count() << " slices (z_0 "
        << format_double(z_0) << " m) -> " << (dir / "cloud.csv").string() << '\n';
    return 0;
}

struct HeatmapArgs {
    std::string cloud;
    double time = 0.0;
    double cell = 100.0;
    double bandwidth = 0.0;
    std::string kernel = "gaussian";
};

int cmd_heatmap(const CLI::App* sub, Common& c, HeatmapArgs& a, std::ostream& out) {
    Resolved r = resolve(sub, c);
    Options opts(sub, r.restored);
    opts.bind("preset", c.preset);
    opts.bind("scale", c.scale);
    opts.bind("seed", c.seed);
    opts.bind("cloud", a.cloud);
    opts.bind("time", a.time);
    opts.bind("cell", a.cell);
    opts.bind("bandwidth", a.bandwidth);
    opts.bind("kernel", a.kernel);
    if (a.cloud.empty()) throw ConfigError("heatmap needs --cloud FILE");
    if (!(a.cell > 0.0)) throw ConfigError("--cell must be > 0");
    if (!(a.bandwidth >= 0.0)) throw ConfigError("--bandwidth must be >= 0");
    const Kernel kernel = parse_kernel(a.kernel);
    std::istringstream is(slurp(a.cloud));
    const ParticleCloud cloud = read_cloud_table(is, r.config.motion.dt);
    const int slice = cloud.slice_at_time(a.time);
    const fs::path dir = prepare_dir(c.out);
    auto outputs = export_heatmap(dir, "heatmap", cloud, slice, a.cell, a.bandwidth, kernel, {0.0, 0.0},
                                  {r.config.area_width, r.config.area_height});
    write_manifest(dir, "heatmap", opts.recorded(), r.config, outputs);
    out << "heatmap of slice " << slice << " (t = " << format_double(slice * cloud.dt()) << " s) -> "
        << (dir / "heatmap.txt").string() << '\n';
    return 0;
}

struct SearchArgs {
    std::string strategy = "rhs";
};

int cmd_search(const CLI::App* sub, Common& c, SearchArgs& a, std::ostream& out) {
    Resolved r = resolve(sub, c);
    Options opts(sub, r.restored);
    opts.bind("preset", c.preset);
    opts.bind("scale", c.scale);
    opts.bind("seed", c.seed);
    if (sub->count("--strategy") > 0 || r.restored.contains("strategy")) {
        opts.bind("strategy", a.strategy);
        r.config.strategy = parse_search_strategy(a.strategy);
    }
    const TrialResult result = run_trial(r.config);
    const fs::path dir = prepare_dir(c.out);
    save(dir / "trial.json", to_json(result).dump(1) + "\n");
    save(dir / "trajectories.csv", trajectories_csv(result));
    save(dir / "trial.svg", trial_svg(result, r.config.lkp));
    write_manifest(dir, "search", opts.recorded(), r.config, {"trial.json", "trajectories.csv", "trial.svg"});
    out << to_string(result.strategy) << ": " << (result.success ? "found" : "not found");
    if (result.success) out << " after " << format_double(result.time_to_find) << " s";
    out << " (" << result.log.size() << " ticks logged) -> " << (dir / "trial.json").string() << '\n';
    return 0;
}

struct BenchmarkArgs {
    std::vector<std::string> strategies{"rhs", "tps", "iso"};
    int trials = 20;
};

int cmd_benchmark(const CLI::App* sub, Common& c, BenchmarkArgs& a, std::ostream& out) {
    Resolved r = resolve(sub, c);
    Options opts(sub, r.restored);
    opts.bind("preset", c.preset);
    opts.bind("scale", c.scale);
    opts.bind("seed", c.seed);
    opts.bind("strategies", a.strategies);
    opts.bind("trials", a.trials);
    if (a.trials < 1) throw ConfigError("--trials must be >= 1");
    std::vector<SearchStrategy> strategies;
    for (const std::string& s : a.strategies) {
        const SearchStrategy parsed = parse_search_strategy(s);
        if (std::find(strategies.begin(), strategies.end(), parsed) != strategies.end()) {
            throw ConfigError("strategy listed twice: " + s);
        }
        strategies.push_back(parsed);
    }
    const BenchmarkReport report = run_benchmark(r.config, strategies, a.trials, c.seed);
    const fs::path dir = prepare_dir(c.out);
    Json j = to_json(report);
    j["trials"] = a.trials;
    j["seed_base"] = c.seed;
    save(dir / "report.json", j.dump(2) + "\n");
    std::string lines;
    for (const TrialMetrics& m : report.trials) lines += to_json(m).dump() + "\n";
    save(dir / "trials.jsonl", lines);
    write_manifest(dir, "benchmark", opts.recorded(), r.config, {"report.json", "trials.jsonl"});

    for (const StrategyStats& s : report.stats) {
        out << to_string(s.strategy) << ": V = " << format_double(s.success_rate) << " (" << s.successes << "/"
            << s.trials << "), T = " << (s.mean_time ? format_double(*s.mean_time / 60.0) + " min" : "n/a") << '\n';
    }
    for (const Comparison& cmp : report.comparisons) {
        auto pct = [](const std::optional<double>& v) { return v ? format_double(*v * 100.0) + "%" : "n/a"; };
        out << to_string(cmp.strategy) << " vs " << to_string(cmp.baseline) << ": T_e = " << pct(cmp.improvement.time)
            << ", V_e = " << pct(cmp.improvement.success) << '\n';
    }
    return 0;
}

struct ReplayArgs {
    std::string log;
};

int cmd_replay(const CLI::App* sub, Common& c, ReplayArgs& a, std::ostream& out, std::ostream& err) {
    Options opts(sub, Json::object());
    opts.bind("log", a.log);
    if (a.log.empty()) throw ConfigError("replay needs --log FILE");
    const TrialResult trial = trial_from_json(parse_json(a.log));
    const ReplayMetrics m = replay_metrics(trial);
    const bool consistent =
        m.success == trial.success && (!m.success || std::abs(m.time_to_find - trial.time_to_find) <= 1e-6);
    const fs::path dir = prepare_dir(c.out);
    Json j;
    j["success"] = m.success;
    j["time_to_find"] = m.success ? Json(m.time_to_find) : Json(nullptr);
    j["logged_success"] = trial.success;
    j["logged_time_to_find"] = trial.success ? Json(trial.time_to_find) : Json(nullptr);
    j["consistent"] = consistent;
    save(dir / "replay.json", j.dump(2) + "\n");
    out << "replay: " << (m.success ? "found after " + format_double(m.time_to_find) + " s" : "not found") << ", "
        << (consistent ? "consistent with the log" : "INCONSISTENT with the log") << '\n';
    if (!consistent) {
        err << "replayed metrics differ from the logged result\n";
        return 1;
    }
    return 0;
}

}  // namespace

RasterSpec raster_around(std::span<const Vec2> particles, double cell, double pad, Vec2 lo, Vec2 hi) {
    if (!(cell > 0.0)) throw ConfigError("raster: cell must be > 0");
    Vec2 a = hi;
    Vec2 b = lo;
    for (const Vec2& p : particles) {
        a = {std::min(a.x, p.x), std::min(a.y, p.y)};
        b = {std::max(b.x, p.x), std::max(b.y, p.y)};
    }
    if (particles.empty()) {
        a = lo;
        b = hi;
    }
    a = {std::max(lo.x, a.x - pad), std::max(lo.y, a.y - pad)};
    b = {std::min(hi.x, b.x + pad), std::min(hi.y, b.y + pad)};
    RasterSpec r;
    r.cell = cell;
    const double ix0 = std::floor((a.x - lo.x) / cell);
    const double iy0 = std::floor((a.y - lo.y) / cell);
    r.origin = {lo.x + ix0 * cell, lo.y + iy0 * cell};
    r.nx = std::max(1, static_cast<int>(std::floor((b.x - r.origin.x) / cell)) + 1);
    r.ny = std::max(1, static_cast<int>(std::floor((b.y - r.origin.y) / cell)) + 1);
    return r;
}

void write_pgm(std::ostream& os, const RasterSpec& raster, std::span<const double> values) {
    const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    os << "P5\n" << raster.nx << ' ' << raster.ny << "\n255\n";
    for (int j = raster.ny - 1; j >= 0; --j) {
        for (int i = 0; i < raster.nx; ++i) {
            const double v = values[static_cast<std::size_t>(j) * raster.nx + i];
            const int g = peak > 0.0 ? static_cast<int>(std::lround(255.0 * v / peak)) : 0;
            os.put(static_cast<char>(255 - std::clamp(g, 0, 255)));
        }
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wilderness search: lost-person prediction and multi-UAV search planning", "wisar"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_tag());

    Common common;
    SimulateArgs sim;
    HeatmapArgs heat;
    SearchArgs search;
    BenchmarkArgs bench;
    ReplayArgs replay;

    CLI::App* terrain_cmd = app.add_subcommand("terrain", "Generate a heightfield");
    add_common(terrain_cmd, common);

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Simulate the lost-person particle cloud");
    add_common(simulate_cmd, common);
    simulate_cmd->add_option("--terrain", sim.terrain, "Heightfield written by 'terrain'");
    simulate_cmd->add_option("--hours", sim.hours, "Simulated time span in hours");
    simulate_cmd->add_option("--agents", sim.agents, "Number of agents");
    simulate_cmd->add_flag("--heatmaps", sim.heatmaps, "Also write a density heatmap for every whole hour");
    simulate_cmd->add_option("--cell", sim.cell, "Heatmap cell size, m");

    CLI::App* heatmap_cmd = app.add_subcommand("heatmap", "Rasterize the density of one cloud slice");
    add_common(heatmap_cmd, common);
    heatmap_cmd->add_option("--cloud", heat.cloud, "Cloud table written by 'simulate'");
    heatmap_cmd->add_option("--time", heat.time, "Seconds since the person went missing");
    heatmap_cmd->add_option("--cell", heat.cell, "Cell size, m");
    heatmap_cmd->add_option("--bandwidth", heat.bandwidth, "Kernel bandwidth, m (0 = rule of thumb)");
    heatmap_cmd->add_option("--kernel", heat.kernel, "gaussian or epanechnikov");

    CLI::App* search_cmd = app.add_subcommand("search", "Run one search trial");
    add_common(search_cmd, common);
    search_cmd->add_option("--strategy", search.strategy, "rhs, tps or iso");

    CLI::App* bench_cmd = app.add_subcommand("benchmark", "Compare strategies over paired trials");
    add_common(bench_cmd, common);
    bench_cmd->add_option("--strategies", bench.strategies, "Comma-separated list of rhs, tps, iso")->delimiter(',');
    bench_cmd->add_option("--trials", bench.trials, "Trials per strategy");

    CLI::App* replay_cmd = app.add_subcommand("replay", "Recompute metrics from a trial log");
    add_common(replay_cmd, common);
    replay_cmd->add_option("--log", replay.log, "trial.json written by 'search'");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (terrain_cmd->parsed()) return cmd_terrain(terrain_cmd, common, out);
        if (simulate_cmd->parsed()) return cmd_simulate(simulate_cmd, common, sim, out);
        if (heatmap_cmd->parsed()) return cmd_heatmap(heatmap_cmd, common, heat, out);
        if (search_cmd->parsed()) return cmd_search(search_cmd, common, search, out);
        if (bench_cmd->parsed()) return cmd_benchmark(bench_cmd, common, bench, out);
        if (replay_cmd->parsed()) return cmd_replay(replay_cmd, common, replay, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace wisar
