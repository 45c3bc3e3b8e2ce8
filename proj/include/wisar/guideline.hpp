/**
 * @file guideline.hpp
 * @brief Fan of potential-field rays from the last known position.
 *
 * Each ray descends an attractive potential toward a goal at infinity along its
 * bearing, bent by repulsive point obstacles, and stops at water or at a slope
 * the walker cannot handle. Agents using Direction Traveling follow these rays
 * and hop to an adjacent ray when theirs is blocked.
 */

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wisar/geometry.hpp"
#include "wisar/rng.hpp"
#include "wisar/terrain.hpp"

namespace wisar {

struct ApfParams {
    double k_rep = 1.0e7;            ///< repulsive scale
    double k_att = 1.0;              ///< attractive scale
    double d_0 = 200.0;              ///< repulsion activation distance, m
    double integration_step = 10.0;  ///< m
    double max_length = 40000.0;     ///< m

    void validate() const;
};

struct Obstacle {
    Vec2 position;
};

enum class RayEnd { none, water, steep };

std::string to_string(RayEnd r);

struct Ray {
    double bearing = 0.0;        ///< degrees in [0, 360)
    std::vector<Vec2> polyline;  ///< starts at the LKP
    bool terminated = false;     ///< blocked by water or slope (leaving the domain is not a block)
    RayEnd termination_reason = RayEnd::none;

    double length() const;
    Vec2 end() const { return polyline.back(); }
};

struct GuidelineMap {
    Vec2 lkp;
    double delta_theta = 1.0;
    std::vector<Ray> rays;  ///< rays[j].bearing == j * delta_theta

    int ray_count() const { return static_cast<int>(rays.size()); }
};

/// Normalized -grad(U_att + U_rep) at `pos`. The attraction to a goal at
/// infinity is the constant vector k_att * unit(bearing).
Vec2 apf_direction(Vec2 pos, std::span<const Obstacle> obstacles, double bearing, const ApfParams& params);

/// Everything a ray or walker needs to know about passability.
struct PassabilityModel {
    const TerrainGrid* terrain = nullptr;
    SpeedScaleParams speed_params;
    double z_0 = 0.0;  ///< water level, m
};

Ray trace_ray(Vec2 lkp, double bearing, const PassabilityModel& passability,
              std::span<const Obstacle> obstacles, const ApfParams& params);

/// One ray per multiple of `delta_theta`; `delta_theta` must divide 360.
GuidelineMap build_guideline_map(Vec2 lkp, const PassabilityModel& passability,
                                 std::span<const Obstacle> obstacles, double delta_theta,
                                 const ApfParams& params);

enum class Side { left, right };

/// Cyclic neighbor: right is index + 1, left is index - 1.
int adjacent_ray(int index, int ray_count, Side side);

/// Picks the left or right neighbor with equal probability.
int transition_ray(const GuidelineMap& map, int current_index, Rng& rng);

/// Arc-length position of the point of `polyline` closest to `p`.
double project_arc_length(std::span<const Vec2> polyline, Vec2 p);

/// Point at arc length `s`, clamped to the polyline's ends.
Vec2 point_at_arc_length(std::span<const Vec2> polyline, double s);

/// Virtual target `lookahead` meters past the agent's projection onto the ray.
Vec2 target_point_on_ray(const Ray& ray, Vec2 agent_pos, double lookahead);

/// Debug dump: one line per ray, "bearing: x0 y0 x1 y1 ...".
void write_ray_dump(std::ostream& os, const GuidelineMap& map);

}  // namespace wisar
