#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "wisar/errors.hpp"
#include "wisar/guideline.hpp"

using namespace wisar;

namespace {

TerrainGrid flat(double size = 2000.0, double cell = 10.0) {
    const int n = static_cast<int>(size / cell) + 1;
    return TerrainGrid::from_function(n, cell, {}, [](double, double) { return 10.0; });
}

ApfParams short_rays(double length) {
    ApfParams p;
    p.max_length = length;
    return p;
}

}  // namespace

TEST(Apf, AttractionOnly) {
    const Vec2 d = apf_direction({10.0, 10.0}, {}, 90.0, ApfParams{});
    EXPECT_NEAR(d.x, 0.0, 1e-12);
    EXPECT_NEAR(d.y, 1.0, 1e-12);
}

TEST(Apf, ObstacleBeyondActivationDistanceIgnored) {
    const ApfParams p;
    const std::vector<Obstacle> obs{{{0.0, p.d_0 + 1.0}}};
    const Vec2 d = apf_direction({0.0, 0.0}, obs, 90.0, p);
    EXPECT_NEAR(d.x, 0.0, 1e-12);
    EXPECT_NEAR(d.y, 1.0, 1e-12);
}

TEST(Apf, ObstacleAheadPushesBack) {
    const ApfParams p;
    const std::vector<Obstacle> obs{{{0.0, p.d_0 / 2.0}}};
    const Vec2 d = apf_direction({0.0, 0.0}, obs, 90.0, p);
    EXPECT_LT(d.y, 0.0);
    const Vec2 fd = normalized(oracle::apf_descent_fd({0.0, 0.0}, obs, 90.0, p));
    EXPECT_NEAR(d.x, fd.x, 1e-6);
    EXPECT_NEAR(d.y, fd.y, 1e-6);
}

TEST(Apf, MatchesFiniteDifferencesOfPotential) {
    Rng rng(3);
    ApfParams p;
    int checked = 0;
    while (checked < 50) {
        std::vector<Obstacle> obs;
        const int n = 1 + static_cast<int>(uniform01(rng) * 3);
        for (int i = 0; i < n; ++i) obs.push_back({{uniform01(rng) * 400 - 200, uniform01(rng) * 400 - 200}});
        const Vec2 pos{uniform01(rng) * 200 - 100, uniform01(rng) * 200 - 100};
        bool near_kink = false;
        for (const Obstacle& o : obs) {
            const double d = distance(pos, o.position);
            near_kink = near_kink || std::abs(d - p.d_0) < 2.0 || d < 20.0;
        }
        if (near_kink) continue;
        const double bearing = uniform01(rng) * 360.0;
        const Vec2 g = oracle::apf_descent_fd(pos, obs, bearing, p);
        if (norm(g) < 1e-3) continue;
        const Vec2 expect = normalized(g);
        const Vec2 got = apf_direction(pos, obs, bearing, p);
        EXPECT_LT(distance(got, expect), 1e-4) << "config " << checked;
        ++checked;
    }
}

TEST(Ray, StraightOnFlatGround) {
    const TerrainGrid g = flat();
    const PassabilityModel pass{&g, {}, 0.0};
    const Ray r = trace_ray({100.0, 1000.0}, 0.0, pass, {}, short_rays(500.0));
    EXPECT_FALSE(r.terminated);
    EXPECT_EQ(r.termination_reason, RayEnd::none);
    EXPECT_NEAR(r.length(), 500.0, 1e-6);
    for (const Vec2& q : r.polyline) EXPECT_NEAR(q.y, 1000.0, 1e-9);
    EXPECT_NEAR(r.end().x, 600.0, 1e-6);
}

TEST(Ray, StopsAtWater) {
    const TerrainGrid g =
        TerrainGrid::from_function(201, 10.0, {}, [](double x, double) { return (x > 700.0 && x < 800.0) ? -5.0 : 10.0; });
    const PassabilityModel pass{&g, {}, 0.0};
    const Ray r = trace_ray({100.0, 1000.0}, 0.0, pass, {}, short_rays(1500.0));
    EXPECT_TRUE(r.terminated);
    EXPECT_EQ(r.termination_reason, RayEnd::water);
    for (const Vec2& q : r.polyline) EXPECT_FALSE(g.is_water(q, 0.0));
    // the bilinear shoreline lies within one cell of x = 700
    EXPECT_GT(r.end().x, 680.0);
    EXPECT_LE(r.end().x, 700.0);
}

TEST(Ray, StopsAtSteepSlope) {
    const double kink = 500.0;
    const double steep = std::tan(deg_to_rad(40.0));
    const TerrainGrid g = TerrainGrid::from_function(
        201, 5.0, {}, [&](double x, double) { return x < kink ? 0.0 : steep * (x - kink); });
    const PassabilityModel pass{&g, {}, -100.0};
    const ApfParams p = short_rays(900.0);
    const Ray r = trace_ray({100.0, 500.0}, 0.0, pass, {}, p);
    EXPECT_TRUE(r.terminated);
    EXPECT_EQ(r.termination_reason, RayEnd::steep);
    EXPECT_NEAR(r.end().x, kink, p.integration_step);
}

TEST(Ray, LeavingTheDomainIsNotABlock) {
    const TerrainGrid g = flat(500.0);
    const PassabilityModel pass{&g, {}, 0.0};
    const Ray r = trace_ray({250.0, 250.0}, 45.0, pass, {}, short_rays(5000.0));
    EXPECT_FALSE(r.terminated);
    EXPECT_TRUE(g.contains(r.end()));
    EXPECT_LT(r.length(), 400.0);
}

TEST(Guidelines, RayCountsAndBearings) {
    const TerrainGrid g = flat();
    const PassabilityModel pass{&g, {}, 0.0};
    const GuidelineMap one = build_guideline_map({1000.0, 1000.0}, pass, {}, 1.0, short_rays(50.0));
    EXPECT_EQ(one.ray_count(), 360);
    int terminated = 0;
    for (const Ray& r : one.rays) terminated += r.terminated ? 1 : 0;
    EXPECT_EQ(terminated, 0);
    const GuidelineMap four = build_guideline_map({1000.0, 1000.0}, pass, {}, 90.0, short_rays(50.0));
    ASSERT_EQ(four.ray_count(), 4);
    for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(four.rays[static_cast<std::size_t>(j)].bearing, 90.0 * j);
    EXPECT_THROW(build_guideline_map({1000.0, 1000.0}, pass, {}, 7.0, short_rays(50.0)), ConfigError);
}

TEST(Guidelines, AdjacentRayWrapsAround) {
    EXPECT_EQ(adjacent_ray(0, 360, Side::left), 359);
    EXPECT_EQ(adjacent_ray(0, 360, Side::right), 1);
    EXPECT_EQ(adjacent_ray(359, 360, Side::right), 0);
}

TEST(Guidelines, TransitionPicksEachSideHalfTheTime) {
    GuidelineMap map;
    map.rays.resize(360);
    Rng rng(11);
    int left = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const int j = transition_ray(map, 0, rng);
        ASSERT_TRUE(j == 359 || j == 1);
        left += j == 359 ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(left) / n, 0.5, 0.02);
}

TEST(Guidelines, VirtualTargetOnRay) {
    Ray ray;
    ray.polyline = {{0.0, 0.0}, {100.0, 0.0}, {200.0, 0.0}};
    const Vec2 a = target_point_on_ray(ray, {0.0, 0.0}, 50.0);
    EXPECT_NEAR(a.x, 50.0, 1e-12);
    EXPECT_NEAR(a.y, 0.0, 1e-12);
    const Vec2 beyond = target_point_on_ray(ray, {500.0, 0.0}, 50.0);
    EXPECT_EQ(beyond, (Vec2{200.0, 0.0}));
    const Vec2 off = target_point_on_ray(ray, {70.0, 30.0}, 50.0);
    EXPECT_NEAR(off.x, 120.0, 1e-12);
    EXPECT_NEAR(off.y, 0.0, 1e-12);
}

TEST(Guidelines, RayDumpFormat) {
    GuidelineMap map;
    map.rays.resize(2);
    map.rays[0].bearing = 0.0;
    map.rays[0].polyline = {{1.0, 2.0}, {3.5, 2.0}};
    map.rays[1].bearing = 180.0;
    map.rays[1].polyline = {{1.0, 2.0}};
    std::ostringstream os;
    write_ray_dump(os, map);
    EXPECT_EQ(os.str(), "0: 1 2 3.5 2\n180: 1 2\n");
}
