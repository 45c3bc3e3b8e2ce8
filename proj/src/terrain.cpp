#include "wisar/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "wisar/errors.hpp"
#include "wisar/format.hpp"
#include "wisar/rng.hpp"

namespace wisar {

void TerrainParams::validate() const {
    if (n_e < 2) throw ConfigError("terrain: n_e must be >= 2");
    if (!(cell_size > 0.0)) throw ConfigError("terrain: cell_size must be > 0");
    if (!(r_0 >= 0.0)) throw ConfigError("terrain: r_0 must be >= 0");
    if (!(r_r > 0.0)) throw ConfigError("terrain: r_r must be > 0");
    if (!(vertical_scale > 0.0)) throw ConfigError("terrain: vertical_scale must be > 0");
    if (!std::isfinite(el)) throw ConfigError("terrain: el must be finite");
}

TerrainParams roughness_preset(Roughness r, int n_e, double cell_size) {
    TerrainParams p;
    p.n_e = n_e;
    p.cell_size = cell_size;
    switch (r) {
        case Roughness::mild: p.el = 8.0; p.r_0 = 6.0; p.r_r = 10.0; break;
        case Roughness::moderate: p.el = 8.0; p.r_0 = 11.0; p.r_r = 18.0; break;
        case Roughness::severe: p.el = 5.0; p.r_0 = 18.0; p.r_r = 8.0; break;
    }
    return p;
}

Roughness parse_roughness(const std::string& name) {
    if (name == "mild") return Roughness::mild;
    if (name == "moderate") return Roughness::moderate;
    if (name == "severe") return Roughness::severe;
    throw ConfigError("unknown roughness preset '" + name + "'");
}

std::string to_string(Roughness r) {
    switch (r) {
        case Roughness::mild: return "mild";
        case Roughness::moderate: return "moderate";
        case Roughness::severe: return "severe";
    }
    return "?";
}

TerrainGrid::TerrainGrid(TerrainParams params, Vec2 origin, std::vector<double> heights)
    : params_(params), origin_(origin), heights_(std::move(heights)) {
    params_.validate();
    const auto n = static_cast<std::size_t>(params_.n_e);
    if (heights_.size() != n * n) throw ConfigError("terrain: height matrix is not n_e x n_e");
    for (double h : heights_) {
        if (!std::isfinite(h)) throw ConfigError("terrain: non-finite height");
    }
}

TerrainGrid TerrainGrid::from_function(int n_e, double cell_size, Vec2 origin,
                                       const std::function<double(double, double)>& f) {
    TerrainParams p;
    p.n_e = n_e;
    p.cell_size = cell_size;
    p.r_0 = 0.0;
    std::vector<double> h(static_cast<std::size_t>(n_e) * n_e);
    for (int iy = 0; iy < n_e; ++iy) {
        for (int ix = 0; ix < n_e; ++ix) {
            h[static_cast<std::size_t>(iy) * n_e + ix] = f(origin.x + ix * cell_size, origin.y + iy * cell_size);
        }
    }
    return TerrainGrid(p, origin, std::move(h));
}

Vec2 TerrainGrid::extent_max() const {
    const double span = (params_.n_e - 1) * params_.cell_size;
    return origin_ + Vec2{span, span};
}

bool TerrainGrid::contains(const Vec2& p) const {
    const Vec2 hi = extent_max();
    return p.x >= origin_.x && p.y >= origin_.y && p.x <= hi.x && p.y <= hi.y;
}

double TerrainGrid::elevation_at(double x, double y) const {
    const int n = params_.n_e;
    const double u = (x - origin_.x) / params_.cell_size;
    const double v = (y - origin_.y) / params_.cell_size;
    if (!(u >= 0.0 && v >= 0.0 && u <= n - 1 && v <= n - 1)) {
        std::ostringstream msg;
        msg << "elevation query (" << x << ", " << y << ") outside terrain extent";
        throw DomainError(msg.str());
    }
    const int ix = std::min(static_cast<int>(u), n - 2);
    const int iy = std::min(static_cast<int>(v), n - 2);
    const double fx = u - ix;
    const double fy = v - iy;
    const double h00 = height(ix, iy);
    const double h10 = height(ix + 1, iy);
    const double h01 = height(ix, iy + 1);
    const double h11 = height(ix + 1, iy + 1);
    return (h00 * (1.0 - fx) + h10 * fx) * (1.0 - fy) + (h01 * (1.0 - fx) + h11 * fx) * fy;
}

TerrainGrid generate_terrain(const TerrainParams& params, std::uint64_t seed, Vec2 origin) {
    params.validate();
    int side = 2;
    while (side + 1 < params.n_e) side *= 2;
    const int n = side + 1;
    std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int ix, int iy) -> double& { return g[static_cast<std::size_t>(iy) * n + ix]; };

    Rng rng{stream_seed(seed, StreamTag::terrain)};
    auto amplitude = [&](int level) { return params.r_0 * std::exp2(-level * params.r_r / 10.0); };
    auto displace = [&](int level) {
        // Always draw so the stream layout does not depend on r_0.
        const double z = standard_normal(rng);
        return amplitude(level) * z;
    };

    at(0, 0) = displace(0);
    at(n - 1, 0) = displace(0);
    at(0, n - 1) = displace(0);
    at(n - 1, n - 1) = displace(0);

    int level = 0;
    for (int step = n - 1; step > 1; step /= 2, ++level) {
        const int half = step / 2;
        // Diamond step: square centers.
        for (int iy = half; iy < n; iy += step) {
            for (int ix = half; ix < n; ix += step) {
                const double avg = (at(ix - half, iy - half) + at(ix + half, iy - half) +
                                    at(ix - half, iy + half) + at(ix + half, iy + half)) / 4.0;
                at(ix, iy) = avg + displace(level);
            }
        }
        // Square step: edge midpoints, averaging the in-bounds neighbors.
        for (int iy = 0; iy < n; iy += half) {
            for (int ix = (iy / half) % 2 == 0 ? half : 0; ix < n; ix += step) {
                double sum = 0.0;
                int count = 0;
                if (ix - half >= 0) { sum += at(ix - half, iy); ++count; }
                if (ix + half < n) { sum += at(ix + half, iy); ++count; }
                if (iy - half >= 0) { sum += at(ix, iy - half); ++count; }
                if (iy + half < n) { sum += at(ix, iy + half); ++count; }
                at(ix, iy) = sum / count + displace(level);
            }
        }
    }

    const int ne = params.n_e;
    std::vector<double> heights(static_cast<std::size_t>(ne) * ne);
    for (int iy = 0; iy < ne; ++iy) {
        for (int ix = 0; ix < ne; ++ix) {
            heights[static_cast<std::size_t>(iy) * ne + ix] = params.el + params.vertical_scale * at(ix, iy);
        }
    }
    return TerrainGrid(params, origin, std::move(heights));
}

double height_percentile(const TerrainGrid& grid, double fraction) {
    std::vector<double> h = grid.heights();
    fraction = std::clamp(fraction, 0.0, 1.0);
    const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(h.size() - 1)));
    std::nth_element(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(k), h.end());
    return h[k];
}

double average_slope(const TerrainGrid& grid, const Vec2& from, const Vec2& to, int n_samples) {
    if (n_samples < 2) throw ConfigError("average_slope: n_samples must be >= 2");
    const double length = distance(from, to);
    if (length == 0.0) return 0.0;
    double s_mean = 0.0;
    double h_mean = 0.0;
    std::vector<double> hs(static_cast<std::size_t>(n_samples));
    for (int k = 0; k < n_samples; ++k) {
        const double f = static_cast<double>(k) / (n_samples - 1);
        hs[static_cast<std::size_t>(k)] = grid.elevation_at(from + (to - from) * f);
        s_mean += f * length;
        h_mean += hs[static_cast<std::size_t>(k)];
    }
    s_mean /= n_samples;
    h_mean /= n_samples;
    double sxy = 0.0;
    double sxx = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const double ds = static_cast<double>(k) / (n_samples - 1) * length - s_mean;
        sxy += ds * (hs[static_cast<std::size_t>(k)] - h_mean);
        sxx += ds * ds;
    }
    return rad_to_deg(std::atan(sxy / sxx));
}

void SpeedScaleParams::validate() const {
    if (!(gamma_min < 0.0 && gamma_max > 0.0)) throw ConfigError("speed scale: need gamma_min < 0 < gamma_max");
}

double speed_scale(double gamma, const SpeedScaleParams& p) {
    if (gamma <= p.gamma_min || gamma >= p.gamma_max) return 0.0;
    if (gamma < 0.0) return 1.0 - gamma / p.gamma_min;
    return 1.0 - gamma / p.gamma_max;
}

void write_heightfield(std::ostream& os, const TerrainGrid& grid) {
    const int n = grid.size();
    os << n << ' ' << format_double(grid.cell_size()) << ' ' << format_double(grid.origin().x) << ' '
       << format_double(grid.origin().y) << '\n';
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            if (ix > 0) os << ' ';
            os << format_double(grid.height(ix, iy));
        }
        os << '\n';
    }
}

TerrainGrid read_heightfield(std::istream& is) {
    std::string tok;
    auto next = [&]() {
        if (!(is >> tok)) throw ConfigError("heightfield: unexpected end of input");
        return tok;
    };
    TerrainParams p;
    p.n_e = static_cast<int>(parse_int(next()));
    p.cell_size = parse_double(next());
    Vec2 origin{parse_double(next()), parse_double(next())};
    p.r_0 = 0.0;
    if (p.n_e < 2) throw ConfigError("heightfield: n_e must be >= 2");
    std::vector<double> h(static_cast<std::size_t>(p.n_e) * p.n_e);
    for (double& v : h) v = parse_double(next());
    return TerrainGrid(p, origin, std::move(h));
}

}  // namespace wisar
