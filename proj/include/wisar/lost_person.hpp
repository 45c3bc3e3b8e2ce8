/**
 * @file lost_person.hpp
 * @brief Agent-based Monte Carlo model of a lost person's movement.
 *
 * Each agent samples one behavior strategy per step from a mass function over
 * {RM, DT, RT, SP, VE, BT}, proposes a move, slows down on slopes and refuses
 * to walk into water or onto slopes beyond its limits. Running many agents
 * from the last known position gives a spatio-temporal particle cloud.
 */

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wisar/geometry.hpp"
#include "wisar/guideline.hpp"
#include "wisar/rng.hpp"
#include "wisar/terrain.hpp"

namespace wisar {

enum class Strategy : int { RM = 0, DT, RT, SP, VE, BT };

inline constexpr std::array<Strategy, 6> kAllStrategies = {Strategy::RM, Strategy::DT, Strategy::RT,
                                                           Strategy::SP, Strategy::VE, Strategy::BT};

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

/// Mass function over the six strategies.
struct BehaviorProfile {
    std::array<double, 6> mass{};

    double operator[](Strategy s) const { return mass[static_cast<std::size_t>(s)]; }
    double& operator[](Strategy s) { return mass[static_cast<std::size_t>(s)]; }

    /// Throws ConfigError unless every mass is >= 0 and they sum to 1 within 1e-9.
    void validate() const;

    /// Placeholder experienced-hiker profile used by the default scenarios.
    static BehaviorProfile experienced_hiker();
    static BehaviorProfile only(Strategy s);
    static BehaviorProfile uniform();
};

struct SpeedModel {
    double v_m = 0.75;   ///< mean walking speed, m/s
    double sigma = 0.25; ///< m/s

    void validate() const;
    double max_speed() const { return v_m + 4.0 * sigma; }
};

/// Locality scales the strategies need.
struct MotionParams {
    double dt = 60.0;                     ///< seconds per step
    double lookahead = 150.0;             ///< virtual target distance along a ray, m
    double trail_capture_radius = 200.0;  ///< m
    double ve_radius = 300.0;             ///< vantage search radius, m
    double ve_lattice = 30.0;             ///< vantage search lattice spacing, m
    int slope_samples = 8;

    void validate() const;
};

/// Read-only world shared by all agents of one simulation.
struct WalkerWorld {
    PassabilityModel passability;
    const GuidelineMap* guidelines = nullptr;
    std::vector<std::vector<Vec2>> trails;
    SpeedModel speed;
    MotionParams motion;
};

struct AgentState {
    Vec2 position;
    int ray_index = 0;
    double heading = 0.0;
    std::vector<Vec2> history;  ///< every recorded position, starting at the LKP
    int backtrack_cursor = -1;  ///< next history entry Back Tracking heads for
    bool active = true;

    static AgentState at(Vec2 start, int ray_index);
};

Strategy select_action(const BehaviorProfile& profile, Rng& rng);

/// Advances one agent by one step of `world.motion.dt` seconds. Inactive agents are returned unchanged.
AgentState step_agent(AgentState agent, Strategy strategy, const WalkerWorld& world, Rng& rng);

/**
 * @brief Positions of n_a agents at steps 0..n_steps (slice 0 is the LKP).
 */
class ParticleCloud {
public:
    ParticleCloud() = default;
    ParticleCloud(int n_agents, int n_slices, double dt);

    int agent_count() const { return n_agents_; }
    int slice_count() const { return n_slices_; }
    double dt() const { return dt_; }

    Vec2& at(int agent, int slice) { return positions_[index(agent, slice)]; }
    const Vec2& at(int agent, int slice) const { return positions_[index(agent, slice)]; }
    std::span<const Vec2> slice(int s) const {
        return {positions_.data() + static_cast<std::size_t>(s) * n_agents_, static_cast<std::size_t>(n_agents_)};
    }

    /// Slice nearest to time `t` seconds, clamped to the recorded range.
    int slice_at_time(double t) const;

private:
    std::size_t index(int agent, int slice) const {
        return static_cast<std::size_t>(slice) * n_agents_ + static_cast<std::size_t>(agent);
    }

    int n_agents_ = 0;
    int n_slices_ = 0;
    double dt_ = 1.0;
    std::vector<Vec2> positions_;
};

/// Runs `n_agents` independent agents for `n_steps` steps. Agent a uses
/// stream a of `seed` and starts on ray floor(a * ray_count / n_agents).
ParticleCloud simulate_cloud(Vec2 lkp, const BehaviorProfile& profile, const WalkerWorld& world, int n_agents,
                             int n_steps, std::uint64_t seed);

/// Trajectory (n_steps + 1 points) of a single walker with its own stream and a random initial ray.
std::vector<Vec2> simulate_walker(Vec2 lkp, const BehaviorProfile& profile, const WalkerWorld& world, int n_steps,
                                  std::uint64_t seed);

/// (v_m + 4 sigma) * t: the farthest a walker can plausibly get in t seconds.
double max_travel_radius(const SpeedModel& speed, double t);

/// Cloud table with header "agent_id,step,x,y", rows ordered by step then agent.
void write_cloud_table(std::ostream& os, const ParticleCloud& cloud);
ParticleCloud read_cloud_table(std::istream& is, double dt);

}  // namespace wisar
