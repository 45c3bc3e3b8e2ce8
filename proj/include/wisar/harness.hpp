/**
 * @file harness.hpp
 * @brief Mission trials and strategy benchmarking.
 *
 * A trial draws terrain, a predicted particle cloud and a ground-truth target
 * from the trial seed, then flies a UAV team with one of three strategies:
 *   - RHS: receding-horizon planner with Voronoi partitioning,
 *   - TPS: the same planner without partitioning,
 *   - ISO: sweeps along per-bearing radial quantile curves of the cloud
 *     (an approximation of iso-probability-curve search).
 * Trials with the same index share every random draw across strategies.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wisar/density.hpp"
#include "wisar/fleet.hpp"
#include "wisar/guideline.hpp"
#include "wisar/lost_person.hpp"
#include "wisar/planner.hpp"
#include "wisar/terrain.hpp"

namespace wisar {

enum class SearchStrategy { rhs, tps, iso };

std::string to_string(SearchStrategy s);
SearchStrategy parse_search_strategy(const std::string& name);

struct MissionConfig {
    double area_width = 16000.0;    ///< m
    double area_height = 16000.0;   ///< m
    Vec2 lkp{8000.0, 8000.0};
    int n_uavs = 4;
    double uav_speed = 5.0;         ///< m/s
    double search_delay = 1800.0;   ///< s between going missing and launch
    double sensor_radius = 50.0;    ///< m, closed detection disk
    double comm_range = 15000.0;    ///< m
    double time_limit = 2700.0;     ///< s of search
    double tick = 30.0;             ///< s per planning step
    int detection_substeps = 5;     ///< detection samples along each executed step

    TerrainParams terrain;
    std::uint64_t terrain_seed = 0;
    double water_percentile = 0.08;
    double lkp_freeboard = 1.0;     ///< m the water level is kept below the LKP

    BehaviorProfile profile = BehaviorProfile::experienced_hiker();
    SpeedModel speed;
    SpeedScaleParams speed_scale;
    MotionParams motion;
    ApfParams apf;
    double delta_theta = 1.0;
    std::vector<Obstacle> obstacles;
    std::vector<std::vector<Vec2>> trails;
    int n_agents = 540;

    PlannerWeights planner;       ///< step_len is derived from uav_speed * tick
    double planner_width = 0.0;   ///< logistic width for the planner; 0 = per-slice rule-of-thumb bandwidth
    double cell_margin = 75.0;    ///< m kept inside the Voronoi cell when possible
    int iso_sectors = 36;

    SearchStrategy strategy = SearchStrategy::rhs;
    std::uint64_t trial_seed = 0;

    void validate() const;
    PlannerWeights effective_planner() const;
    Box area() const { return {{0.0, 0.0}, {area_width, area_height}}; }

    /// 16 km desk-scale mission (45 min search, 540 agents).
    static MissionConfig desk(Roughness roughness);
    /// 65 km mission with a 2 h search and 1080 agents.
    static MissionConfig full(Roughness roughness);
};

/// Everything random about a trial except the UAVs' behavior.
struct Scenario {
    TerrainGrid terrain;
    double z_0 = 0.0;
    GuidelineMap guidelines;
    ParticleCloud cloud;
    std::vector<Vec2> target;           ///< ground truth at every cloud step
    std::vector<double> slice_widths;   ///< rule-of-thumb bandwidth per slice
};

/// Number of walker steps needed to cover the search window plus the planning horizon.
int scenario_steps(const MissionConfig& config);

Scenario build_scenario(const MissionConfig& config);

/// Water level for a map: the configured height percentile, kept below the LKP.
double water_level(const MissionConfig& config, const TerrainGrid& terrain);

/// Ground-truth walker, on a stream independent of the particle cloud.
std::vector<Vec2> simulate_target(const MissionConfig& config, const TerrainGrid& terrain, double z_0,
                                  const GuidelineMap& guidelines);

/// Linear interpolation of a per-step trajectory at time t (clamped).
Vec2 position_at_time(std::span<const Vec2> track, double dt, double t);

struct PlanTelemetry {
    double heading = 0.0;
    double objective = 0.0;
    bool degenerate = false;
    bool feasible = true;
};

struct TickRecord {
    double time = 0.0;               ///< s since the person went missing
    Vec2 target;
    std::vector<Vec2> positions;     ///< UAV positions at `time`
    std::vector<std::pair<int, int>> edges;
    std::vector<int> mark_counts;
    std::vector<PlanTelemetry> plans;  ///< decisions taken at this tick (empty on the last record)
    std::vector<std::vector<HalfPlane>> half_planes;  ///< active constraints per UAV at this tick
};

struct TrialResult {
    SearchStrategy strategy = SearchStrategy::rhs;
    bool success = false;
    double time_to_find = 0.0;       ///< s after launch; meaningful when success
    double sensor_radius = 0.0;
    int detection_substeps = 1;
    double time_limit = 0.0;         ///< s; no search happens when <= 0
    double search_start = 0.0;       ///< s since the person went missing
    std::vector<TickRecord> log;

    std::vector<Vec2> trajectory(int uav) const;
};

/// Earliest contact between a UAV moving a0 -> a1 and the target moving b0 -> b1
/// over one tick, sampled at `substeps` evenly spaced instants after the start.
/// Returns the substep index (1-based) or 0 when there is no contact.
int sweep_contact(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double radius, int substeps);

/// Flies the configured strategy over a prebuilt scenario.
TrialResult run_search(const MissionConfig& config, const Scenario& scenario);

/// build_scenario + run_search.
TrialResult run_trial(const MissionConfig& config);

struct ReplayMetrics {
    bool success = false;
    double time_to_find = 0.0;
};

/// Recomputes success and time-to-find from a trial log alone.
ReplayMetrics replay_metrics(const TrialResult& result);

// ---------------------------------------------------------------------------
// ISO baseline

/// Per-bearing radius enclosing `fraction` of the particles around `center`.
struct IsoCurve {
    Vec2 center;
    std::vector<double> radii;  ///< one per sector, sector k centered on bearing (k + 0.5) * 360 / n

    double radius_at(double bearing) const;
    Vec2 point_at(double bearing) const { return center + unit_from_bearing(bearing) * radius_at(bearing); }
};

IsoCurve iso_curve(std::span<const Vec2> particles, Vec2 center, double fraction, int sectors);

/// Quantile band assigned to UAV `id` of `n`: (id + 1) / (n + 1).
double iso_band(int id, int n);

/// Next waypoint for a UAV sweeping counter-clockwise along `curve`; flies
/// radially (along `launch_bearing` when at the center) until within one step of it.
Vec2 iso_plan_step(Vec2 position, const IsoCurve& curve, double step_len, double launch_bearing);

// ---------------------------------------------------------------------------
// Benchmark

/// Relative improvements of a strategy (s) over a benchmark (ben).
struct Improvement {
    std::optional<double> time;     ///< T_e = (T_ben - T_s) / T_ben
    std::optional<double> success;  ///< V_e = (V_s - V_ben) / V_ben
};

Improvement evaluation_indices(std::optional<double> t_s, std::optional<double> t_ben, double v_s, double v_ben);

struct TrialMetrics {
    int trial = 0;
    std::uint64_t seed = 0;
    SearchStrategy strategy = SearchStrategy::rhs;
    bool success = false;
    double time_to_find = 0.0;
};

struct StrategyStats {
    SearchStrategy strategy = SearchStrategy::rhs;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    std::optional<double> mean_time;  ///< s, successful trials only
};

struct Comparison {
    SearchStrategy strategy = SearchStrategy::rhs;
    SearchStrategy baseline = SearchStrategy::iso;
    Improvement improvement;
};

struct BenchmarkReport {
    std::vector<StrategyStats> stats;
    std::vector<Comparison> comparisons;  ///< RHS against every other strategy present
    std::vector<TrialMetrics> trials;
};

/// Seed of trial k: shared by every strategy.
std::uint64_t benchmark_trial_seed(std::uint64_t seed_base, int k);

BenchmarkReport run_benchmark(const MissionConfig& config_template, std::span<const SearchStrategy> strategies,
                              int n_trials, std::uint64_t seed_base);

/// Aggregates per-trial metrics into rates, mean times and comparisons.
BenchmarkReport summarize(std::span<const SearchStrategy> strategies, std::vector<TrialMetrics> trials);

}  // namespace wisar
