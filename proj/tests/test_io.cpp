#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "wisar/cli.hpp"
#include "wisar/errors.hpp"
#include "wisar/io.hpp"

using namespace wisar;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / (std::string("wisar_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Config, RoundTripsEveryKey) {
    MissionConfig c = MissionConfig::full(Roughness::moderate);
    c.lkp = {1234.5, 0.1};
    c.trial_seed = 18446744073709551615ull;
    c.terrain_seed = 7;
    c.strategy = SearchStrategy::tps;
    c.obstacles = {{{1.0, 2.0}}, {{3.25, -4.0}}};
    c.trails = {{{0, 0}, {10, 10}, {20, 0}}};
    c.planner.theta_max = 45.0;
    c.profile = BehaviorProfile::uniform();
    std::stringstream ss;
    write_config(ss, c);
    MissionConfig back = MissionConfig::desk(Roughness::mild);
    back.obstacles.clear();
    read_config(ss, back);
    EXPECT_EQ(config_entries(back), config_entries(c));
    EXPECT_EQ(back.profile.mass, c.profile.mass);
    EXPECT_EQ(back.lkp, c.lkp);
    std::vector<std::string> keys;
    for (const auto& [k, v] : config_entries(c)) keys.push_back(k);
    for (const std::string& k : config_keys()) EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
}

TEST(Config, CommentsBlankLinesAndErrors) {
    MissionConfig c;
    std::istringstream ok("# mission\n\nn_uavs = 3   # fewer\n  time_limit=60\n");
    read_config(ok, c);
    EXPECT_EQ(c.n_uavs, 3);
    EXPECT_EQ(c.time_limit, 60.0);

    std::istringstream unknown("n_uavs = 3\nwarp_speed = 9\n");
    try {
        read_config(unknown, c);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    std::istringstream bad_number("tick = fast\n");
    EXPECT_THROW(read_config(bad_number, c), ConfigError);
    std::istringstream no_eq("tick 30\n");
    EXPECT_THROW(read_config(no_eq, c), ConfigError);
    EXPECT_THROW(apply_setting(c, "strategy", "zigzag"), ConfigError);
    EXPECT_THROW(apply_setting(c, "n_uavs", "2.5"), ConfigError);
}

TEST(Config, NumbersAreLocaleIndependent) {
    MissionConfig c;
    c.sensor_radius = 0.1;
    c.uav_speed = 1.0 / 3.0;
    std::ostringstream os;
    os.imbue(std::locale::classic());
    write_config(os, c);
    EXPECT_NE(os.str().find("sensor_radius = 0.1\n"), std::string::npos);
    EXPECT_NE(os.str().find("uav_speed = 0.3333333333333333\n"), std::string::npos);
}

TEST(Json, TrialRoundTrip) {
    MissionConfig c = wisar::testing::small_mission(31);
    c.time_limit = 300.0;
    const TrialResult r = run_trial(c);
    const Json j = to_json(r);
    const TrialResult back = trial_from_json(Json::parse(j.dump()));
    EXPECT_EQ(to_json(back).dump(), j.dump());
    EXPECT_EQ(replay_metrics(back).success, r.success);
    EXPECT_TRUE(j.at("ticks").at(0).contains("half_planes"));
    EXPECT_THROW(trial_from_json(Json::parse("{\"strategy\": \"RHS\"}")), ConfigError);
}

TEST(Json, ManifestRoundTrip) {
    RunManifest m;
    m.command = "search";
    m.options = Json{{"seed", 4}};
    m.config = MissionConfig::desk(Roughness::mild);
    m.config.trial_seed = 4;
    m.outputs = {"trial.json"};
    m.created_at = "2024-01-01T00:00:00Z";
    const Json j = to_json(m);
    EXPECT_EQ(j.at("seeds").at("trial_seed").get<std::uint64_t>(), 4u);
    EXPECT_FALSE(j.at("version").get<std::string>().empty());
    const RunManifest back = manifest_from_json(j);
    EXPECT_EQ(back.command, "search");
    EXPECT_EQ(back.options, m.options);
    EXPECT_EQ(config_entries(back.config), config_entries(m.config));
}

TEST(Cli, TerrainIsReproducibleAndDefaultsToSeedZero) {
    TempDir dir;
    ASSERT_EQ(cli({"terrain", "--preset", "severe", "--seed", "7", "--out", dir / "a"}).code, 0);
    ASSERT_EQ(cli({"terrain", "--preset", "severe", "--seed", "7", "--out", dir / "b"}).code, 0);
    EXPECT_EQ(read_file(dir / "a/terrain.txt"), read_file(dir / "b/terrain.txt"));
    ASSERT_EQ(cli({"terrain", "--manifest", dir / "a/manifest.json", "--out", dir / "c"}).code, 0);
    EXPECT_EQ(read_file(dir / "a/terrain.txt"), read_file(dir / "c/terrain.txt"));

    ASSERT_EQ(cli({"terrain", "--preset", "mild", "--out", dir / "d"}).code, 0);
    const Json m = Json::parse(read_file(dir / "d/manifest.json"));
    EXPECT_EQ(m.at("options").at("seed").get<int>(), 0);
    EXPECT_EQ(m.at("seeds").at("terrain_seed").get<int>(), 0);
    const RunManifest back = manifest_from_json(m);
    EXPECT_EQ(back.config.terrain.el, 8.0);
    EXPECT_EQ(back.config.terrain.r_0, 6.0);
    EXPECT_EQ(back.config.terrain.r_r, 10.0);
}

TEST(Cli, SimulateWritesCloudAndHeatmaps) {
    TempDir dir;
    ASSERT_EQ(cli({"terrain", "--seed", "2", "--out", dir / "t"}).code, 0);
    const CliRun zero = cli({"simulate", "--terrain", dir / "t/terrain.txt", "--seed", "2", "--hours", "0", "--out", dir / "z"});
    ASSERT_EQ(zero.code, 0) << zero.err;
    const std::string table = read_file(dir / "z/cloud.csv");
    EXPECT_EQ(count_lines(table), 1 + 1080);
    std::istringstream is(table);
    const ParticleCloud c0 = read_cloud_table(is, 60.0);
    EXPECT_EQ(c0.slice_count(), 1);
    for (const Vec2& p : c0.slice(0)) EXPECT_EQ(p, MissionConfig{}.lkp);

    const CliRun sim = cli({"simulate", "--terrain", dir / "t/terrain.txt", "--seed", "2", "--hours", "0.5", "--agents",
                         "100", "--heatmaps", "--out", dir / "s"});
    ASSERT_EQ(sim.code, 0) << sim.err;
    EXPECT_EQ(count_lines(read_file(dir / "s/cloud.csv")), 1 + 100 * 31);
    EXPECT_TRUE(fs::exists(dir / "s/heatmap_h0.txt"));
    EXPECT_TRUE(fs::exists(dir / "s/heatmap_h0.pgm"));
    EXPECT_FALSE(fs::exists(dir / "s/heatmap_h1.txt"));

    const CliRun again = cli({"simulate", "--manifest", dir / "s/manifest.json", "--out", dir / "s2"});
    ASSERT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(read_file(dir / "s/cloud.csv"), read_file(dir / "s2/cloud.csv"));
    EXPECT_EQ(read_file(dir / "s/rays.txt"), read_file(dir / "s2/rays.txt"));

    const CliRun heat = cli({"heatmap", "--cloud", dir / "s/cloud.csv", "--time", "1800", "--cell", "50", "--out", dir / "h"});
    ASSERT_EQ(heat.code, 0) << heat.err;
    const std::string matrix = read_file(dir / "h/heatmap.txt");
    EXPECT_EQ(matrix.rfind("# ", 0), 0u);
    const std::string pgm = read_file(dir / "h/heatmap.pgm");
    EXPECT_EQ(pgm.rfind("P5\n", 0), 0u);
}

TEST(Cli, SearchAndReplay) {
    TempDir dir;
    const CliRun s = cli({"search", "--seed", "3", "--strategy", "tps", "--set", "n_agents=120", "--set", "time_limit=600",
                       "--out", dir / "s"});
    ASSERT_EQ(s.code, 0) << s.err;
    for (const char* f : {"trial.json", "trajectories.csv", "trial.svg", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir / (std::string("s/") + f))) << f;
    }
    const Json trial = Json::parse(read_file(dir / "s/trial.json"));
    EXPECT_EQ(trial.at("strategy").get<std::string>(), "TPS");
    EXPECT_EQ(read_file(dir / "s/trajectories.csv").rfind("tick,time,kind,id,x,y\n", 0), 0u);

    const CliRun r = cli({"replay", "--log", dir / "s/trial.json", "--out", dir / "r"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(Json::parse(read_file(dir / "r/replay.json")).at("consistent").get<bool>());

    // claim the opposite outcome: replay must notice
    Json forged = trial;
    forged["success"] = !trial.at("success").get<bool>();
    forged["time_to_find"] = forged["success"].get<bool>() ? Json(12.0) : Json(nullptr);
    std::ofstream(dir / "forged.json") << forged.dump();
    const CliRun bad = cli({"replay", "--log", dir / "forged.json", "--out", dir / "r2"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_FALSE(bad.err.empty());

    const CliRun again = cli({"search", "--manifest", dir / "s/manifest.json", "--out", dir / "s2"});
    ASSERT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(read_file(dir / "s/trial.json"), read_file(dir / "s2/trial.json"));
}

TEST(Cli, BenchmarkReportStructure) {
    TempDir dir;
    const CliRun b = cli({"benchmark", "--strategies", "rhs,iso,tps", "--trials", "1", "--preset", "severe", "--set",
                       "n_agents=100", "--set", "time_limit=300", "--out", dir / "b"});
    ASSERT_EQ(b.code, 0) << b.err;
    const Json report = Json::parse(read_file(dir / "b/report.json"));
    ASSERT_EQ(report.at("strategies").size(), 3u);
    for (const Json& s : report.at("strategies")) {
        const double v = s.at("V").get<double>();
        EXPECT_TRUE(v == 0.0 || v == 1.0);
    }
    const Json& rhs = report.at("strategies").at(0);
    for (const Json& cmp : report.at("comparisons")) {
        const Json* base = nullptr;
        for (const Json& s : report.at("strategies")) {
            if (s.at("strategy") == cmp.at("baseline")) base = &s;
        }
        ASSERT_NE(base, nullptr);
        const double vb = base->at("V").get<double>();
        if (vb == 0.0) {
            EXPECT_TRUE(cmp.at("V_e").is_null());
        } else {
            EXPECT_NEAR(cmp.at("V_e").get<double>(), (rhs.at("V").get<double>() - vb) / vb, 1e-12);
        }
    }
    EXPECT_EQ(count_lines(read_file(dir / "b/trials.jsonl")), 3);
}

TEST(Cli, UsageAndIoErrors) {
    TempDir dir;
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"warp"}).code, 2);
    EXPECT_EQ(cli({"benchmark", "--strategies", "rhs,spiral", "--out", dir / "x"}).code, 2);
    EXPECT_EQ(cli({"search", "--set", "nonsense=1", "--out", dir / "x"}).code, 2);
    EXPECT_EQ(cli({"search", "--preset", "extreme", "--out", dir / "x"}).code, 2);
    EXPECT_EQ(cli({"simulate", "--out", dir / "x"}).code, 2);
    EXPECT_EQ(cli({"simulate", "--terrain", dir / "missing.txt", "--out", dir / "x"}).code, 3);
    EXPECT_EQ(cli({"replay", "--log", dir / "missing.json", "--out", dir / "x"}).code, 3);
    const CliRun help = cli({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("benchmark"), std::string::npos);
}

TEST(RasterAround, ParticlesIsGridAlignedAndClipped) {
    const std::vector<Vec2> pts{{500, 500}, {700, 650}};
    const RasterSpec r = raster_around(pts, 100.0, 150.0, {0, 0}, {16000, 16000});
    EXPECT_EQ(r.origin, (Vec2{300, 300}));
    EXPECT_EQ(r.nx, 6);
    EXPECT_EQ(r.ny, 6);
    const RasterSpec clipped = raster_around(pts, 100.0, 5000.0, {0, 0}, {1000, 1000});
    EXPECT_EQ(clipped.origin, (Vec2{0, 0}));
    EXPECT_EQ(clipped.nx, 11);
}
