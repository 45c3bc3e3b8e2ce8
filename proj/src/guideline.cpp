#include "wisar/guideline.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "wisar/errors.hpp"
#include "wisar/format.hpp"

namespace wisar {

void ApfParams::validate() const {
    if (!(k_rep > 0.0 && k_att > 0.0 && d_0 > 0.0 && integration_step > 0.0 && max_length > 0.0)) {
        throw ConfigError("apf: all parameters must be positive");
    }
}

std::string to_string(RayEnd r) {
    switch (r) {
        case RayEnd::none: return "none";
        case RayEnd::water: return "water";
        case RayEnd::steep: return "steep";
    }
    return "?";
}

double Ray::length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < polyline.size(); ++i) len += distance(polyline[i - 1], polyline[i]);
    return len;
}

Vec2 apf_direction(Vec2 pos, std::span<const Obstacle> obstacles, double bearing, const ApfParams& params) {
    const Vec2 heading = unit_from_bearing(bearing);
    for (const Obstacle& o : obstacles) {
        if (o.position == pos) {
            pos += heading * 1e-6;
            break;
        }
    }
    Vec2 force = heading * params.k_att;
    for (const Obstacle& o : obstacles) {
        const Vec2 away = pos - o.position;
        const double d = norm(away);
        if (d > params.d_0 || d == 0.0) continue;
        const double magnitude = params.k_rep * (1.0 / d - 1.0 / params.d_0) / (d * d);
        force += away * (magnitude / d);
    }
    const Vec2 dir = normalized(force);
    return squared_norm(dir) > 0.0 ? dir : heading;
}

Ray trace_ray(Vec2 lkp, double bearing, const PassabilityModel& passability,
              std::span<const Obstacle> obstacles, const ApfParams& params) {
    params.validate();
    const TerrainGrid& terrain = *passability.terrain;
    if (!terrain.contains(lkp)) throw DomainError("trace_ray: LKP outside terrain");

    Ray ray;
    ray.bearing = wrap_360(bearing);
    ray.polyline.push_back(lkp);
    Vec2 pos = lkp;
    double travelled = 0.0;
    while (travelled < params.max_length) {
        const double step = std::min(params.integration_step, params.max_length - travelled);
        const Vec2 next = pos + apf_direction(pos, obstacles, ray.bearing, params) * step;
        if (!terrain.contains(next)) break;
        if (terrain.is_water(next, passability.z_0)) {
            ray.terminated = true;
            ray.termination_reason = RayEnd::water;
            break;
        }
        if (!passability.speed_params.walkable(average_slope(terrain, pos, next, 2))) {
            ray.terminated = true;
            ray.termination_reason = RayEnd::steep;
            break;
        }
        ray.polyline.push_back(next);
        pos = next;
        travelled += step;
    }
    return ray;
}

GuidelineMap build_guideline_map(Vec2 lkp, const PassabilityModel& passability,
                                 std::span<const Obstacle> obstacles, double delta_theta,
                                 const ApfParams& params) {
    if (!(delta_theta > 0.0)) throw ConfigError("guideline: delta_theta must be > 0");
    const double count_f = 360.0 / delta_theta;
    const long count = std::lround(count_f);
    if (count < 1 || std::abs(count_f - static_cast<double>(count)) > 1e-9) {
        throw ConfigError("guideline: delta_theta must divide 360");
    }
    GuidelineMap map;
    map.lkp = lkp;
    map.delta_theta = delta_theta;
    map.rays.reserve(static_cast<std::size_t>(count));
    for (long j = 0; j < count; ++j) {
        map.rays.push_back(trace_ray(lkp, static_cast<double>(j) * delta_theta, passability, obstacles, params));
    }
    return map;
}

int adjacent_ray(int index, int ray_count, Side side) {
    const int delta = side == Side::right ? 1 : -1;
    return ((index + delta) % ray_count + ray_count) % ray_count;
}

int transition_ray(const GuidelineMap& map, int current_index, Rng& rng) {
    return adjacent_ray(current_index, map.ray_count(), coin_flip(rng) ? Side::right : Side::left);
}

double project_arc_length(std::span<const Vec2> polyline, Vec2 p) {
    if (polyline.size() < 2) return 0.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    double s = 0.0;
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        const double seg = distance(polyline[i - 1], polyline[i]);
        const SegmentProjection proj = project_onto_segment(p, polyline[i - 1], polyline[i]);
        const double d2 = squared_distance(p, proj.point);
        if (d2 < best_d2) {
            best_d2 = d2;
            best_s = s + proj.t * seg;
        }
        s += seg;
    }
    return best_s;
}

Vec2 point_at_arc_length(std::span<const Vec2> polyline, double s) {
    if (polyline.empty()) return {};
    if (s <= 0.0) return polyline.front();
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        const double seg = distance(polyline[i - 1], polyline[i]);
        if (s <= seg && seg > 0.0) return polyline[i - 1] + (polyline[i] - polyline[i - 1]) * (s / seg);
        s -= seg;
    }
    return polyline.back();
}

Vec2 target_point_on_ray(const Ray& ray, Vec2 agent_pos, double lookahead) {
    const double s = project_arc_length(ray.polyline, agent_pos);
    return point_at_arc_length(ray.polyline, s + lookahead);
}

void write_ray_dump(std::ostream& os, const GuidelineMap& map) {
    for (const Ray& ray : map.rays) {
        os << format_double(ray.bearing) << ':';
        for (const Vec2& p : ray.polyline) os << ' ' << format_double(p.x) << ' ' << format_double(p.y);
        os << '\n';
    }
}

}  // namespace wisar
