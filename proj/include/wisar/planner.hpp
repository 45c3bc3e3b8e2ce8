/**
 * @file planner.hpp
 * @brief Receding-horizon waypoint planner for one UAV.
 *
 * A candidate path wp_1 .. wp_{n_l} starts at the UAV's position and takes
 * n_l - 1 steps of fixed length, each step turning by at most theta_max.
 * Its score is the discounted detection probability collected along the path
 * minus a proximity penalty to the nearest other UAV; waypoints must stay in
 * the UAV's Voronoi cell. Only wp_2 is executed.
 *
 * The search enumerates a heading-change tree (n_headings bins per level),
 * prunes infeasible branches, then refines the best leaves one heading at a
 * time with golden-section search.
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wisar/density.hpp"
#include "wisar/geometry.hpp"
#include "wisar/lost_person.hpp"

namespace wisar {

struct PlannerWeights {
    double alpha = 10.0;       ///< objective scale, > 1
    double epsilon = 0.1;      ///< proximity scale in (0, 1)
    double k_1 = 1.0;
    double k_2 = 1.0;
    double xi = 2.0;
    double theta_max = 60.0;   ///< max turn per step, degrees
    int n_l = 3;               ///< horizon length in waypoints (wp_1 is the current position)
    double step_len = 150.0;   ///< m, = v_u * dt
    double d_min = 100.0;      ///< m
    double d_max = 15000.0;    ///< m
    double proximity_cap = 1.0e6;

    int n_headings = 9;        ///< heading-change bins per tree level
    int refine_leaves = 3;     ///< best leaves handed to the refinement pass
    int golden_iterations = 24;

    void validate() const;
};

/// One linear Voronoi constraint: y <= a x + b (below), y >= a x + b (above),
/// x <= b (left_of) or x >= b (right_of).
struct HalfPlane {
    enum class Side { below, above, left_of, right_of };

    double a = 0.0;
    double b = 0.0;
    Side side = Side::below;

    /// Signed Euclidean distance to the boundary, positive inside.
    double margin(Vec2 q) const;
    bool contains(Vec2 q, double tol = 1e-9) const { return margin(q) >= -tol; }
};

std::string to_string(HalfPlane::Side s);

/// Perpendicular bisector constraints keeping `self` on its own side of each
/// neighbor. Throws ConfigError if a neighbor coincides with `self`.
std::vector<HalfPlane> voronoi_half_planes(Vec2 self, std::span<const Vec2> neighbors);

/// Axis-aligned box waypoints must stay inside.
struct Box {
    Vec2 lo;
    Vec2 hi;
    bool contains(Vec2 p) const { return p.x >= lo.x && p.y >= lo.y && p.x <= hi.x && p.y <= hi.y; }
    double margin(Vec2 p) const;
};

struct PlanContext {
    Vec2 current;                        ///< wp_1
    Vec2 previous;                       ///< position one step ago, fixes the incoming heading
    std::vector<Vec2> neighbors;         ///< every other UAV (proximity term)
    std::vector<HalfPlane> half_planes;  ///< from connected UAVs only
    const ParticleCloud* cloud = nullptr;
    const MarkSet* marks = nullptr;
    std::vector<int> stage_slices;       ///< cloud slice scored at each of the n_l stages
    std::vector<double> stage_widths;    ///< logistic width h per stage, m
    double sensor_radius = 50.0;
    std::optional<Box> bounds;
    /// Search first keeps waypoints this far inside the cell and bounds, then
    /// drops to zero if nothing qualifies. Absorbs cell drift between ticks.
    double cell_margin = 0.0;
};

/// Absolute heading change between (prev -> cur) and (cur -> next), in [0, 180].
/// Zero-length segments give 0.
double turning_angle(Vec2 prev, Vec2 cur, Vec2 next);

/// Two-pole barrier k_1/(d - d_min)^xi + k_2/(d_max - d)^xi, capped at proximity_cap.
double proximity_cost(double d, const PlannerWeights& w);

/// Reference evaluation of a full horizon path against every particle.
/// Throws std::invalid_argument if the path length or spacing is wrong.
double horizon_objective(std::span<const Vec2> path, const PlanContext& ctx, const PlannerWeights& w);

/// Builds wp_1 .. wp_{n_l} from heading changes relative to the incoming heading.
std::vector<Vec2> path_from_turns(const PlanContext& ctx, const PlannerWeights& w, std::span<const double> turns);

/// True iff every waypoint after wp_1 satisfies the half-planes and bounds and
/// every turn (including previous -> wp_1 -> wp_2) is within theta_max.
bool path_feasible(std::span<const Vec2> path, const PlanContext& ctx, const PlannerWeights& w, double tol = 1e-6);

struct PlanResult {
    Vec2 next;                 ///< wp_2, the executed waypoint
    std::vector<Vec2> path;    ///< the chosen horizon path
    std::vector<double> turns;
    double heading = 0.0;      ///< bearing of wp_1 -> wp_2, degrees
    double objective = 0.0;
    bool degenerate = false;   ///< no feasible path; fell back to max clearance
    int evaluations = 0;
};

PlanResult plan_step(const PlanContext& ctx, const PlannerWeights& w);

/// Baseline without partitioning: plan_step with the half-planes dropped.
PlanResult tps_plan_step(PlanContext ctx, const PlannerWeights& w);

}  // namespace wisar
