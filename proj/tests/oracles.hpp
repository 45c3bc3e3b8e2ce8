#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wisar/density.hpp"
#include "wisar/guideline.hpp"
#include "wisar/planner.hpp"

namespace wisar::oracle {

/// U_att + U_rep with the goal at infinity along `bearing`.
inline double apf_potential(Vec2 p, std::span<const Obstacle> obstacles, double bearing, const ApfParams& params) {
    const double rad = bearing * std::acos(-1.0) / 180.0;
    double u = -params.k_att * (std::cos(rad) * p.x + std::sin(rad) * p.y);
    for (const Obstacle& o : obstacles) {
        const double d = std::hypot(p.x - o.position.x, p.y - o.position.y);
        if (d <= params.d_0) {
            const double t = 1.0 / d - 1.0 / params.d_0;
            u += 0.5 * params.k_rep * t * t;
        }
    }
    return u;
}

/// -grad U by central differences (not normalized).
inline Vec2 apf_descent_fd(Vec2 p, std::span<const Obstacle> obstacles, double bearing, const ApfParams& params,
                           double h = 1e-4) {
    const double gx = (apf_potential({p.x + h, p.y}, obstacles, bearing, params) -
                       apf_potential({p.x - h, p.y}, obstacles, bearing, params)) /
                      (2.0 * h);
    const double gy = (apf_potential({p.x, p.y + h}, obstacles, bearing, params) -
                       apf_potential({p.x, p.y - h}, obstacles, bearing, params)) /
                      (2.0 * h);
    return {-gx, -gy};
}

/// Midpoint-rule integral of kde_at over a box padded well past every particle.
inline double kde_mass(const ParticleCloud& cloud, int slice, const DensityParams& params, const MarkSet& marks) {
    const auto pts = cloud.slice(slice);
    double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
    for (const Vec2& p : pts) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double pad = 6.0 * params.h_s;
    const double cell = params.h_s / 4.0;
    x0 -= pad;
    y0 -= pad;
    const int nx = static_cast<int>(std::ceil((x1 + pad - x0) / cell));
    const int ny = static_cast<int>(std::ceil((y1 + pad - y0) / cell));
    double sum = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) sum += kde_at(cloud, slice, x0 + (i + 0.5) * cell, y0 + (j + 0.5) * cell, params, marks);
    }
    return sum * cell * cell;
}

struct TreeOptimum {
    double objective = -std::numeric_limits<double>::infinity();
    std::vector<Vec2> path;
};

inline bool inside_constraints(Vec2 q, const PlanContext& ctx, double tol = 1e-6) {
    if (ctx.bounds && (q.x < ctx.bounds->lo.x - tol || q.y < ctx.bounds->lo.y - tol || q.x > ctx.bounds->hi.x + tol ||
                       q.y > ctx.bounds->hi.y + tol)) {
        return false;
    }
    for (const HalfPlane& hp : ctx.half_planes) {
        const double lhs = hp.a * q.x + hp.b;
        const double scale = std::sqrt(1.0 + hp.a * hp.a);
        double m = 0.0;
        switch (hp.side) {
            case HalfPlane::Side::below: m = (lhs - q.y) / scale; break;
            case HalfPlane::Side::above: m = (q.y - lhs) / scale; break;
            case HalfPlane::Side::left_of: m = hp.b - q.x; break;
            case HalfPlane::Side::right_of: m = q.x - hp.b; break;
        }
        if (m < -tol) return false;
    }
    return true;
}

/// Brute force over `bins` evenly spaced heading changes in [-theta_max, theta_max]
/// at every level; paths leaving the cell or bounds are skipped.
inline std::optional<TreeOptimum> exhaustive_plan(const PlanContext& ctx, const PlannerWeights& w, int bins = 24) {
    const int levels = w.n_l - 1;
    const double pi = std::acos(-1.0);
    const double incoming = std::atan2(ctx.current.y - ctx.previous.y, ctx.current.x - ctx.previous.x) * 180.0 / pi;
    std::vector<int> idx(static_cast<std::size_t>(levels), 0);
    std::optional<TreeOptimum> best;
    while (true) {
        std::vector<Vec2> path{ctx.current};
        double heading = incoming;
        bool ok = true;
        for (int l = 0; l < levels && ok; ++l) {
            heading += -w.theta_max + 2.0 * w.theta_max * idx[static_cast<std::size_t>(l)] / (bins - 1);
            const Vec2 next{path.back().x + w.step_len * std::cos(heading * pi / 180.0),
                            path.back().y + w.step_len * std::sin(heading * pi / 180.0)};
            ok = inside_constraints(next, ctx);
            path.push_back(next);
        }
        if (ok) {
            const double v = horizon_objective(path, ctx, w);
            if (!best || v > best->objective) best = TreeOptimum{v, path};
        }
        int l = levels - 1;
        while (l >= 0 && ++idx[static_cast<std::size_t>(l)] == bins) idx[static_cast<std::size_t>(l--)] = 0;
        if (l < 0) break;
    }
    return best;
}

}  // namespace wisar::oracle
