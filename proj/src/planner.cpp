#include "wisar/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wisar/errors.hpp"

namespace wisar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// logistic(-30) ~ 1e-13: particles farther than this many widths outside the disk are dropped.
constexpr double kCutoffWidths = 30.0;

}  // namespace

void PlannerWeights::validate() const {
    if (!(alpha > 1.0)) throw ConfigError("planner: alpha must be > 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("planner: epsilon must be in (0, 1)");
    if (!(k_1 > 0.0 && k_2 > 0.0 && xi > 0.0)) throw ConfigError("planner: k_1, k_2, xi must be > 0");
    if (!(theta_max > 0.0 && theta_max <= 180.0)) throw ConfigError("planner: theta_max must be in (0, 180]");
    if (n_l < 2) throw ConfigError("planner: n_l must be >= 2");
    if (!(step_len > 0.0)) throw ConfigError("planner: step_len must be > 0");
    if (!(d_min >= 0.0 && d_min < d_max)) throw ConfigError("planner: need 0 <= d_min < d_max");
    if (!(proximity_cap > 0.0)) throw ConfigError("planner: proximity_cap must be > 0");
    if (n_headings < 2) throw ConfigError("planner: n_headings must be >= 2");
    if (refine_leaves < 0 || golden_iterations < 0) throw ConfigError("planner: refinement counts must be >= 0");
}

double HalfPlane::margin(Vec2 q) const {
    switch (side) {
        case Side::below: return (a * q.x + b - q.y) / std::sqrt(1.0 + a * a);
        case Side::above: return (q.y - a * q.x - b) / std::sqrt(1.0 + a * a);
        case Side::left_of: return b - q.x;
        case Side::right_of: return q.x - b;
    }
    return 0.0;
}

std::string to_string(HalfPlane::Side s) {
    switch (s) {
        case HalfPlane::Side::below: return "below";
        case HalfPlane::Side::above: return "above";
        case HalfPlane::Side::left_of: return "left_of";
        case HalfPlane::Side::right_of: return "right_of";
    }
    return "?";
}

std::vector<HalfPlane> voronoi_half_planes(Vec2 self, std::span<const Vec2> neighbors) {
    std::vector<HalfPlane> out;
    out.reserve(neighbors.size());
    for (const Vec2& nb : neighbors) {
        const Vec2 n = nb - self;
        if (n.x == 0.0 && n.y == 0.0) throw ConfigError("voronoi_half_planes: neighbor coincides with self");
        const Vec2 mid = (self + nb) * 0.5;
        HalfPlane hp;
        if (std::abs(n.y) <= 1e-12 * std::abs(n.x)) {
            hp.side = n.x > 0.0 ? HalfPlane::Side::left_of : HalfPlane::Side::right_of;
            hp.b = mid.x;
        } else {
            hp.a = -n.x / n.y;
            hp.b = mid.y - hp.a * mid.x;
            hp.side = n.y > 0.0 ? HalfPlane::Side::below : HalfPlane::Side::above;
        }
        out.push_back(hp);
    }
    return out;
}

double Box::margin(Vec2 p) const { return std::min({p.x - lo.x, p.y - lo.y, hi.x - p.x, hi.y - p.y}); }

double turning_angle(Vec2 prev, Vec2 cur, Vec2 next) {
    const Vec2 in = cur - prev;
    const Vec2 out = next - cur;
    if (squared_norm(in) == 0.0 || squared_norm(out) == 0.0) return 0.0;
    return std::abs(wrap_180(bearing_of(out) - bearing_of(in)));
}

double proximity_cost(double d, const PlannerWeights& w) {
    if (!(d > w.d_min && d < w.d_max)) return w.proximity_cap;
    const double f = w.k_1 / std::pow(d - w.d_min, w.xi) + w.k_2 / std::pow(w.d_max - d, w.xi);
    return std::min(f, w.proximity_cap);
}

namespace {

double nearest_neighbor_penalty(Vec2 wp2, const PlanContext& ctx, const PlannerWeights& w) {
    if (ctx.neighbors.empty()) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2& nb : ctx.neighbors) d = std::min(d, distance(wp2, nb));
    return w.epsilon * proximity_cost(d, w);
}

void check_context(const PlanContext& ctx, const PlannerWeights& w) {
    if (static_cast<int>(ctx.stage_slices.size()) != w.n_l || static_cast<int>(ctx.stage_widths.size()) != w.n_l) {
        throw std::invalid_argument("plan context: need one slice and one width per horizon stage");
    }
    for (double h : ctx.stage_widths) {
        if (!(h > 0.0)) throw std::invalid_argument("plan context: stage widths must be > 0");
    }
}

double incoming_heading(const PlanContext& ctx) {
    const Vec2 in = ctx.current - ctx.previous;
    return squared_norm(in) > 0.0 ? bearing_of(in) : 0.0;
}

bool has_incoming_heading(const PlanContext& ctx) { return !(ctx.current == ctx.previous); }

bool waypoint_feasible(Vec2 wp, const PlanContext& ctx, double tol, double inset = 0.0) {
    if (ctx.bounds && ctx.bounds->margin(wp) < inset - tol) return false;
    for (const HalfPlane& hp : ctx.half_planes) {
        if (hp.margin(wp) < inset - tol) return false;
    }
    return true;
}

bool path_within(std::span<const Vec2> path, const PlanContext& ctx, const PlannerWeights& w, double tol,
                 double inset) {
    if (static_cast<int>(path.size()) != w.n_l) return false;
    for (std::size_t k = 1; k < path.size(); ++k) {
        if (!waypoint_feasible(path[k], ctx, tol, inset)) return false;
        const Vec2 before = k == 1 ? ctx.previous : path[k - 2];
        if (turning_angle(before, path[k - 1], path[k]) > w.theta_max + tol) return false;
    }
    return true;
}

double clearance(Vec2 wp, const PlanContext& ctx) {
    double c = std::numeric_limits<double>::infinity();
    if (ctx.bounds) c = ctx.bounds->margin(wp);
    for (const HalfPlane& hp : ctx.half_planes) c = std::min(c, hp.margin(wp));
    return c;
}

/// Horizon scoring restricted to particles that can matter, with shared
/// "remaining mass" slots so a particle is not counted twice along a path.
class Evaluator {
public:
    Evaluator(const PlanContext& ctx, const PlannerWeights& w) : ctx_(ctx), w_(w) {
        const int n_a = ctx.cloud != nullptr ? ctx.cloud->agent_count() : 0;
        scale_ = n_a > 0 ? w.alpha / n_a : 0.0;
        stages_.resize(static_cast<std::size_t>(w.n_l));
        if (n_a == 0) return;
        std::vector<int> slot_of(static_cast<std::size_t>(n_a), -1);
        for (int j = 0; j < w.n_l; ++j) {
            Stage& st = stages_[static_cast<std::size_t>(j)];
            st.width = ctx.stage_widths[static_cast<std::size_t>(j)];
            const double reach = j * w.step_len + ctx.sensor_radius + kCutoffWidths * st.width;
            const auto pts = ctx.cloud->slice(ctx.stage_slices[static_cast<std::size_t>(j)]);
            for (int i = 0; i < n_a; ++i) {
                if (ctx.marks != nullptr && ctx.marks->is_marked(i)) continue;
                const Vec2 p = pts[static_cast<std::size_t>(i)];
                if (squared_distance(p, ctx.current) > reach * reach) continue;
                auto& slot = slot_of[static_cast<std::size_t>(i)];
                if (slot < 0) slot = slots_++;
                st.items.push_back({slot, p});
            }
        }
    }

    std::vector<double> fresh_remaining() const { return std::vector<double>(static_cast<std::size_t>(slots_), 1.0); }

    /// Adds stage j's detection mass at `wp` and consumes it from `remaining`.
    double stage_gain(int j, Vec2 wp, std::vector<double>& remaining) const {
        const Stage& st = stages_[static_cast<std::size_t>(j)];
        const double inv_h = 1.0 / st.width;
        double sum = 0.0;
        for (const Item& it : st.items) {
            double& rem = remaining[static_cast<std::size_t>(it.slot)];
            const double c = logistic((ctx_.sensor_radius - distance(it.pos, wp)) * inv_h) * rem;
            rem -= c;
            sum += c;
        }
        return scale_ * sum;
    }

    double evaluate(std::span<const Vec2> path) const {
        auto rem = fresh_remaining();
        double total = 0.0;
        for (int j = 0; j < w_.n_l; ++j) total += stage_gain(j, path[static_cast<std::size_t>(j)], rem);
        return total - nearest_neighbor_penalty(path[1], ctx_, w_);
    }

private:
    struct Item {
        int slot;
        Vec2 pos;
    };
    struct Stage {
        double width = 1.0;
        std::vector<Item> items;
    };

    const PlanContext& ctx_;
    const PlannerWeights& w_;
    double scale_ = 0.0;
    int slots_ = 0;
    std::vector<Stage> stages_;
};

struct Leaf {
    double value = kNegInf;
    std::vector<double> turns;
};

class TreeSearch {
public:
    TreeSearch(const PlanContext& ctx, const PlannerWeights& w, const Evaluator& eval, double inset)
        : ctx_(ctx), w_(w), eval_(eval), inset_(inset) {
        first_limit_ = has_incoming_heading(ctx) ? w.theta_max : 180.0;
        bins_first_ = make_bins(first_limit_, has_incoming_heading(ctx));
        bins_ = make_bins(w.theta_max, true);
    }

    std::vector<Leaf> run() {
        auto rem = eval_.fresh_remaining();
        const double root = eval_.stage_gain(0, ctx_.current, rem);
        std::vector<double> turns;
        expand(1, ctx_.current, incoming_heading(ctx_), rem, root, turns);
        return leaves_;
    }

    int evaluations() const { return evaluations_; }
    double bin_width(int level) const {
        if (level == 0 && !has_incoming_heading(ctx_)) return 360.0 / w_.n_headings;
        return 2.0 * w_.theta_max / (w_.n_headings - 1);
    }
    double turn_limit(int level) const { return level == 0 ? first_limit_ : w_.theta_max; }

private:
    // Turn values ordered from straight ahead outward, so ties favor small turns.
    // Without an incoming heading the first level spans the full circle.
    std::vector<double> make_bins(double limit, bool include_both_ends) const {
        std::vector<double> bins;
        const int n = w_.n_headings;
        const double span = include_both_ends ? 2.0 * limit / (n - 1) : 360.0 / n;
        for (int k = 0; k < n; ++k) {
            bins.push_back(include_both_ends ? -limit + k * span : -180.0 + (k + 1) * span);
        }
        std::stable_sort(bins.begin(), bins.end(), [](double a, double b) {
            if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
            return a < b;
        });
        return bins;
    }

    void expand(int level, Vec2 pos, double heading, const std::vector<double>& rem, double partial,
                std::vector<double>& turns) {
        const auto& bins = level == 1 ? bins_first_ : bins_;
        for (double turn : bins) {
            const double h = heading + turn;
            const Vec2 wp = pos + unit_from_bearing(h) * w_.step_len;
            if (!waypoint_feasible(wp, ctx_, 1e-9, inset_)) continue;
            ++evaluations_;
            auto next_rem = rem;
            double value = partial + eval_.stage_gain(level, wp, next_rem);
            if (level == 1) value -= nearest_neighbor_penalty(wp, ctx_, w_);
            turns.push_back(turn);
            if (level == w_.n_l - 1) {
                offer(value, turns);
            } else {
                expand(level + 1, wp, h, next_rem, value, turns);
            }
            turns.pop_back();
        }
    }

    void offer(double value, const std::vector<double>& turns) {
        const auto keep = static_cast<std::size_t>(std::max(1, w_.refine_leaves));
        if (leaves_.size() == keep && !(value > leaves_.back().value)) return;
        Leaf leaf{value, turns};
        auto it = std::upper_bound(leaves_.begin(), leaves_.end(), leaf,
                                   [](const Leaf& a, const Leaf& b) { return a.value > b.value; });
        leaves_.insert(it, std::move(leaf));
        if (leaves_.size() > keep) leaves_.pop_back();
    }

    const PlanContext& ctx_;
    const PlannerWeights& w_;
    const Evaluator& eval_;
    double inset_ = 0.0;
    double first_limit_ = 0.0;
    std::vector<double> bins_first_;
    std::vector<double> bins_;
    std::vector<Leaf> leaves_;
    int evaluations_ = 0;
};

}  // namespace

std::vector<Vec2> path_from_turns(const PlanContext& ctx, const PlannerWeights& w, std::span<const double> turns) {
    std::vector<Vec2> path{ctx.current};
    double heading = incoming_heading(ctx);
    for (double t : turns) {
        heading += t;
        path.push_back(path.back() + unit_from_bearing(heading) * w.step_len);
    }
    return path;
}

bool path_feasible(std::span<const Vec2> path, const PlanContext& ctx, const PlannerWeights& w, double tol) {
    return path_within(path, ctx, w, tol, 0.0);
}

double horizon_objective(std::span<const Vec2> path, const PlanContext& ctx, const PlannerWeights& w) {
    check_context(ctx, w);
    if (static_cast<int>(path.size()) != w.n_l) throw std::invalid_argument("horizon_objective: path must have n_l points");
    if (!(path[0] == ctx.current)) throw std::invalid_argument("horizon_objective: path must start at wp_1");
    for (std::size_t k = 1; k < path.size(); ++k) {
        if (std::abs(distance(path[k - 1], path[k]) - w.step_len) > 1e-6) {
            throw std::invalid_argument("horizon_objective: waypoint spacing differs from step_len");
        }
    }
    double total = 0.0;
    if (ctx.cloud != nullptr && ctx.cloud->agent_count() > 0) {
        const int n_a = ctx.cloud->agent_count();
        std::vector<double> rem(static_cast<std::size_t>(n_a), 1.0);
        for (int j = 0; j < w.n_l; ++j) {
            const auto pts = ctx.cloud->slice(ctx.stage_slices[static_cast<std::size_t>(j)]);
            const double h = ctx.stage_widths[static_cast<std::size_t>(j)];
            for (int i = 0; i < n_a; ++i) {
                if (ctx.marks != nullptr && ctx.marks->is_marked(i)) continue;
                const double c = logistic((ctx.sensor_radius - distance(pts[static_cast<std::size_t>(i)],
                                                                        path[static_cast<std::size_t>(j)])) /
                                          h) *
                                 rem[static_cast<std::size_t>(i)];
                rem[static_cast<std::size_t>(i)] -= c;
                total += c;
            }
        }
        total *= w.alpha / n_a;
    }
    return total - nearest_neighbor_penalty(path[1], ctx, w);
}

PlanResult plan_step(const PlanContext& ctx, const PlannerWeights& w) {
    w.validate();
    check_context(ctx, w);
    const Evaluator eval(ctx, w);
    // Insets tried in order. Two UAVs each d_min/2 inside their shared
    // bisector are at least d_min apart.
    const double margin = std::max(0.0, ctx.cell_margin);
    std::vector<double> insets{margin};
    if (margin > 0.5 * w.d_min) insets.push_back(0.5 * w.d_min);
    if (margin > 0.0) insets.push_back(0.0);

    PlanResult result;
    std::vector<Leaf> leaves;
    double inset = 0.0;
    std::optional<TreeSearch> tree;
    for (double candidate : insets) {
        inset = candidate;
        tree.emplace(ctx, w, eval, inset);
        leaves = tree->run();
        result.evaluations += tree->evaluations();
        if (!leaves.empty()) break;
    }

    if (leaves.empty()) {
        // Every branch violates a constraint somewhere: take the first step that
        // stays farthest from violation, then keep flying straight.
        const double limit = tree->turn_limit(0);
        const int samples = 8 * w.n_headings;
        double best_clear = kNegInf;
        double best_turn = 0.0;
        for (int k = 0; k < samples; ++k) {
            const double turn = -limit + 2.0 * limit * k / (samples - 1);
            const double c = clearance(path_from_turns(ctx, w, std::vector<double>{turn})[1], ctx);
            if (c > best_clear) {
                best_clear = c;
                best_turn = turn;
            }
        }
        result.turns.assign(static_cast<std::size_t>(w.n_l - 1), 0.0);
        result.turns[0] = best_turn;
        result.degenerate = true;
    } else {
        Leaf best = leaves.front();
        for (Leaf leaf : leaves) {
            for (std::size_t c = 0; c < leaf.turns.size(); ++c) {
                const double limit = tree->turn_limit(static_cast<int>(c));
                const double bin = tree->bin_width(static_cast<int>(c));
                double lo = std::max(-limit, leaf.turns[c] - bin);
                double hi = std::min(limit, leaf.turns[c] + bin);
                auto value_at = [&](double turn) {
                    std::vector<double> t = leaf.turns;
                    t[c] = turn;
                    const auto path = path_from_turns(ctx, w, t);
                    ++result.evaluations;
                    return path_within(path, ctx, w, 1e-9, inset) ? eval.evaluate(path) : kNegInf;
                };
                constexpr double kInvPhi = 0.6180339887498949;
                double x1 = hi - kInvPhi * (hi - lo);
                double x2 = lo + kInvPhi * (hi - lo);
                double f1 = value_at(x1);
                double f2 = value_at(x2);
                for (int it = 0; it < w.golden_iterations; ++it) {
                    if (f1 >= f2) {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - kInvPhi * (hi - lo);
                        f1 = value_at(x1);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + kInvPhi * (hi - lo);
                        f2 = value_at(x2);
                    }
                }
                const double x = f1 >= f2 ? x1 : x2;
                const double fx = std::max(f1, f2);
                if (fx > leaf.value) {
                    leaf.turns[c] = x;
                    leaf.value = fx;
                }
            }
            if (leaf.value > best.value) best = leaf;
        }
        result.turns = best.turns;
    }

    result.path = path_from_turns(ctx, w, result.turns);
    result.next = result.path[1];
    result.heading = wrap_360(bearing_of(result.next - ctx.current));
    result.objective = eval.evaluate(result.path);
    return result;
}

PlanResult tps_plan_step(PlanContext ctx, const PlannerWeights& w) {
    ctx.half_planes.clear();
    return plan_step(ctx, w);
}

}  // namespace wisar
