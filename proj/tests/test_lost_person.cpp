#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wisar/errors.hpp"
#include "wisar/lost_person.hpp"

using namespace wisar;

namespace {

struct World {
    TerrainGrid terrain;
    GuidelineMap map;
    WalkerWorld world;

    World(TerrainGrid t, Vec2 lkp, double z_0 = -1000.0) : terrain(std::move(t)) {
        const PassabilityModel pass{&terrain, {}, z_0};
        ApfParams apf;
        apf.max_length = 5000.0;
        map = build_guideline_map(lkp, pass, {}, 1.0, apf);
        world.passability = pass;
        world.guidelines = &map;
    }
    World(const World&) = delete;
};

TerrainGrid flat_terrain() {
    return TerrainGrid::from_function(121, 50.0, {}, [](double, double) { return 20.0; });
}

std::array<int, 6> tally(const BehaviorProfile& p, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::array<int, 6> counts{};
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(select_action(p, rng))];
    return counts;
}

}  // namespace

TEST(Profile, PresetsAreMassFunctions) {
    for (const BehaviorProfile& p : {BehaviorProfile::experienced_hiker(), BehaviorProfile::uniform(),
                                     BehaviorProfile::only(Strategy::VE)}) {
        EXPECT_NO_THROW(p.validate());
        EXPECT_NEAR(std::accumulate(p.mass.begin(), p.mass.end(), 0.0), 1.0, 1e-9);
    }
    BehaviorProfile bad = BehaviorProfile::uniform();
    bad[Strategy::RM] += 0.01;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = BehaviorProfile::only(Strategy::DT);
    bad[Strategy::DT] = 1.2;
    bad[Strategy::SP] = -0.2;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Profile, StrategyNamesRoundTrip) {
    for (Strategy s : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
    EXPECT_THROW(parse_strategy("XX"), ConfigError);
}

TEST(Actions, DegenerateMassAlwaysChosen) {
    const auto c = tally(BehaviorProfile::only(Strategy::DT), 1000, 1);
    EXPECT_EQ(c[static_cast<std::size_t>(Strategy::DT)], 1000);
}

TEST(Actions, FrequenciesFollowMasses) {
    BehaviorProfile p;
    p[Strategy::DT] = 0.8;
    p[Strategy::RM] = 0.2;
    const int n = 100000;
    const auto c = tally(p, n, 2);
    EXPECT_NEAR(c[static_cast<std::size_t>(Strategy::DT)] / static_cast<double>(n), 0.8, 0.01);

    const auto u = tally(BehaviorProfile::uniform(), n, 3);
    for (int k : u) EXPECT_NEAR(k / static_cast<double>(n), 1.0 / 6.0, 0.01);
}

TEST(Step, StayingPutKeepsPosition) {
    World w(flat_terrain(), {3000.0, 3000.0});
    Rng rng(1);
    const AgentState a = AgentState::at({3000.0, 3000.0}, 0);
    const AgentState b = step_agent(a, Strategy::SP, w.world, rng);
    EXPECT_EQ(b.position, a.position);
    ASSERT_EQ(b.history.size(), 2u);
    EXPECT_EQ(b.history.back(), a.position);
}

TEST(Step, DirectionTravelOnFlatGround) {
    World w(flat_terrain(), {3000.0, 3000.0});
    w.world.speed.sigma = 0.0;
    Rng rng(1);
    const AgentState b = step_agent(AgentState::at({3000.0, 3000.0}, 0), Strategy::DT, w.world, rng);
    EXPECT_NEAR(b.position.x - 3000.0, w.world.speed.v_m * 60.0, 1e-9);
    EXPECT_NEAR(b.position.y - 3000.0, 0.0, 1e-9);
}

TEST(Step, UphillHalvesSpeed) {
    const double grade = std::tan(deg_to_rad(SpeedScaleParams{}.gamma_max / 2.0));
    World w(TerrainGrid::from_function(121, 50.0, {}, [&](double x, double) { return grade * x; }), {3000.0, 3000.0});
    w.world.speed.sigma = 0.0;
    Rng rng(1);
    const AgentState b = step_agent(AgentState::at({3000.0, 3000.0}, 0), Strategy::DT, w.world, rng);
    EXPECT_NEAR(distance(b.position, {3000.0, 3000.0}), w.world.speed.v_m * 60.0 / 2.0, 1e-6);
}

TEST(Step, BackTrackingRetracesHistory) {
    World w(flat_terrain(), {3000.0, 3000.0});
    w.world.speed.sigma = 0.0;
    Rng rng(4);
    AgentState a = AgentState::at({3000.0, 3000.0}, 0);
    for (int i = 0; i < 3; ++i) a = step_agent(a, Strategy::DT, w.world, rng);
    const Vec2 far = a.position;
    for (int i = 0; i < 3; ++i) a = step_agent(a, Strategy::BT, w.world, rng);
    EXPECT_LT(distance(a.position, {3000.0, 3000.0}), 1e-6);
    EXPECT_GT(distance(far, {3000.0, 3000.0}), 100.0);
}

TEST(Step, ViewEnhancingClimbs) {
    World w(TerrainGrid::from_function(121, 50.0, {}, [](double x, double y) { return 0.01 * x + 0.002 * y; }),
            {3000.0, 3000.0});
    Rng rng(5);
    const AgentState a = AgentState::at({3000.0, 3000.0}, 0);
    const AgentState b = step_agent(a, Strategy::VE, w.world, rng);
    EXPECT_GT(w.terrain.elevation_at(b.position), w.terrain.elevation_at(a.position));
}

TEST(Step, RouteTravelFollowsTrail) {
    World w(flat_terrain(), {3000.0, 3000.0});
    w.world.speed.sigma = 0.0;
    w.world.trails = {{{3000.0, 3050.0}, {5000.0, 3050.0}}};
    Rng rng(6);
    AgentState a = AgentState::at({3000.0, 3000.0}, 90);
    a = step_agent(a, Strategy::RT, w.world, rng);
    EXPECT_NEAR(a.position.y, 3045.0, 1e-9);  // heads straight for the trail
    a = step_agent(a, Strategy::RT, w.world, rng);
    EXPECT_NEAR(a.position.y, 3050.0, 1e-9);  // stops on it
    const double x = a.position.x;
    a = step_agent(a, Strategy::RT, w.world, rng);
    EXPECT_NEAR(a.position.y, 3050.0, 1e-9);
    EXPECT_NEAR(a.position.x - x, 45.0, 1e-9);
}

TEST(Step, NeverEntersWater) {
    World w(TerrainGrid::from_function(121, 50.0, {}, [](double x, double) { return x > 3300.0 ? -10.0 : 10.0; }),
            {3000.0, 3000.0}, 0.0);
    Rng rng(7);
    AgentState a = AgentState::at({3000.0, 3000.0}, 0);
    for (int i = 0; i < 200; ++i) {
        a = step_agent(a, i % 2 == 0 ? Strategy::DT : Strategy::RM, w.world, rng);
        ASSERT_FALSE(w.terrain.is_water(a.position, 0.0)) << "step " << i;
    }
}

TEST(Cloud, StartsAtLkpAndStaysInsideTravelEnvelope) {
    World w(flat_terrain(), {3000.0, 3000.0});
    const int steps = 30;
    const ParticleCloud c = simulate_cloud({3000.0, 3000.0}, BehaviorProfile::experienced_hiker(), w.world, 200, steps, 9);
    EXPECT_EQ(c.agent_count(), 200);
    EXPECT_EQ(c.slice_count(), steps + 1);
    for (const Vec2& p : c.slice(0)) EXPECT_EQ(p, (Vec2{3000.0, 3000.0}));
    for (int k = 0; k <= steps; ++k) {
        const double r = max_travel_radius(w.world.speed, k * c.dt());
        for (const Vec2& p : c.slice(k)) ASSERT_LE(distance(p, {3000.0, 3000.0}), r + 1e-9);
    }
}

TEST(Cloud, StayingPutProfileNeverMoves) {
    World w(flat_terrain(), {3000.0, 3000.0});
    const ParticleCloud c = simulate_cloud({3000.0, 3000.0}, BehaviorProfile::only(Strategy::SP), w.world, 50, 10, 1);
    for (int k = 0; k < c.slice_count(); ++k) {
        for (const Vec2& p : c.slice(k)) ASSERT_EQ(p, (Vec2{3000.0, 3000.0}));
    }
}

TEST(Cloud, DeterministicPerSeed) {
    World w(flat_terrain(), {3000.0, 3000.0});
    const auto run = [&](std::uint64_t seed) {
        const ParticleCloud c = simulate_cloud({3000.0, 3000.0}, BehaviorProfile::uniform(), w.world, 40, 12, seed);
        std::ostringstream os;
        write_cloud_table(os, c);
        return os.str();
    };
    EXPECT_EQ(run(5), run(5));
    EXPECT_NE(run(5), run(6));
}

TEST(Cloud, TableRoundTrip) {
    World w(flat_terrain(), {3000.0, 3000.0});
    const ParticleCloud c = simulate_cloud({3000.0, 3000.0}, BehaviorProfile::uniform(), w.world, 7, 5, 3);
    std::stringstream ss;
    write_cloud_table(ss, c);
    const std::string text = ss.str();
    EXPECT_EQ(text.rfind("agent_id,step,x,y\n", 0), 0u);
    const ParticleCloud back = read_cloud_table(ss, c.dt());
    ASSERT_EQ(back.agent_count(), 7);
    ASSERT_EQ(back.slice_count(), 6);
    for (int k = 0; k < 6; ++k) {
        for (int a = 0; a < 7; ++a) EXPECT_EQ(back.at(a, k), c.at(a, k));
    }
}

TEST(Cloud, SliceAtTimeRoundsAndClamps) {
    const ParticleCloud c(1, 5, 60.0);
    EXPECT_EQ(c.slice_at_time(0.0), 0);
    EXPECT_EQ(c.slice_at_time(89.0), 1);
    EXPECT_EQ(c.slice_at_time(91.0), 2);
    EXPECT_EQ(c.slice_at_time(-10.0), 0);
    EXPECT_EQ(c.slice_at_time(1e6), 4);
}

TEST(Speed, TravelRadius) {
    const SpeedModel s;
    EXPECT_EQ(max_travel_radius(s, 0.0), 0.0);
    EXPECT_NEAR(max_travel_radius(s, 3600.0), 6300.0, 1e-9);
}
