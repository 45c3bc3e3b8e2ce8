#include "wisar/density.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "wisar/errors.hpp"
#include "wisar/format.hpp"

namespace wisar {

bool MarkSet::mark(int i) {
    auto& f = flags_.at(static_cast<std::size_t>(i));
    if (f != 0) return false;
    f = 1;
    ++count_;
    return true;
}

int MarkSet::merge(const MarkSet& other) {
    if (other.flags_.size() != flags_.size()) throw ConfigError("MarkSet::merge: size mismatch");
    int added = 0;
    for (std::size_t i = 0; i < flags_.size(); ++i) {
        if (other.flags_[i] != 0 && flags_[i] == 0) {
            flags_[i] = 1;
            ++added;
        }
    }
    count_ += added;
    return added;
}

std::vector<int> MarkSet::indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count_));
    for (std::size_t i = 0; i < flags_.size(); ++i) {
        if (flags_[i] != 0) out.push_back(static_cast<int>(i));
    }
    return out;
}

bool is_subset(const MarkSet& a, const MarkSet& b) {
    if (a.flags_.size() != b.flags_.size()) return false;
    for (std::size_t i = 0; i < a.flags_.size(); ++i) {
        if (a.flags_[i] != 0 && b.flags_[i] == 0) return false;
    }
    return true;
}

double kernel_value(Kernel k, double u, double v) {
    const double r2 = u * u + v * v;
    switch (k) {
        case Kernel::gaussian: return std::exp(-0.5 * r2) / (2.0 * std::numbers::pi);
        case Kernel::epanechnikov: return r2 < 1.0 ? 2.0 / std::numbers::pi * (1.0 - r2) : 0.0;
    }
    return 0.0;
}

double kde_at(const ParticleCloud& cloud, int slice, double x, double y, const DensityParams& params,
              const MarkSet& marks) {
    const auto points = cloud.slice(slice);
    const double h = params.h_s;
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (marks.is_marked(static_cast<int>(i))) continue;
        sum += kernel_value(params.kernel, (x - points[i].x) / h, (y - points[i].y) / h);
    }
    return sum / (static_cast<double>(cloud.agent_count()) * h * h);
}

double poa_disk(const ParticleCloud& cloud, int slice, Vec2 center, double radius, const MarkSet& marks) {
    const auto points = cloud.slice(slice);
    const double r2 = radius * radius;
    int inside = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!marks.is_marked(static_cast<int>(i)) && squared_distance(points[i], center) <= r2) ++inside;
    }
    return static_cast<double>(inside) / cloud.agent_count();
}

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double poa_disk_smooth(const ParticleCloud& cloud, int slice, Vec2 center, double radius,
                       const DensityParams& params, const MarkSet& marks) {
    const auto points = cloud.slice(slice);
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (marks.is_marked(static_cast<int>(i))) continue;
        sum += logistic((radius - distance(points[i], center)) / params.h_s);
    }
    return sum / cloud.agent_count();
}

double silverman_bandwidth(std::span<const Vec2> points) {
    const auto n = static_cast<double>(points.size());
    if (points.size() < 2) return 1.0;
    Vec2 mean;
    for (const Vec2& p : points) mean += p;
    mean *= 1.0 / n;
    double ss = 0.0;
    for (const Vec2& p : points) ss += squared_distance(p, mean);
    const double sigma = std::sqrt(ss / (2.0 * (n - 1.0)));
    const double h = 1.06 * sigma * std::pow(n, -1.0 / 6.0);
    return h > 1.0 ? h : 1.0;
}

std::vector<double> rasterize_density(const ParticleCloud& cloud, int slice, const RasterSpec& raster,
                                      const DensityParams& params, const MarkSet& marks) {
    if (raster.nx < 1 || raster.ny < 1 || !(raster.cell > 0.0)) throw ConfigError("raster: bad dimensions");
    std::vector<double> out(static_cast<std::size_t>(raster.nx) * static_cast<std::size_t>(raster.ny));
    for (int j = 0; j < raster.ny; ++j) {
        for (int i = 0; i < raster.nx; ++i) {
            out[static_cast<std::size_t>(j) * raster.nx + i] =
                kde_at(cloud, slice, raster.origin.x + i * raster.cell, raster.origin.y + j * raster.cell, params,
                       marks);
        }
    }
    return out;
}

void write_matrix(std::ostream& os, const RasterSpec& raster, std::span<const double> values) {
    os << "# " << format_double(raster.origin.x) << ' ' << format_double(raster.origin.y) << ' '
       << format_double(raster.cell) << ' ' << raster.nx << ' ' << raster.ny << '\n';
    for (int j = 0; j < raster.ny; ++j) {
        for (int i = 0; i < raster.nx; ++i) {
            if (i > 0) os << ' ';
            os << format_double(values[static_cast<std::size_t>(j) * raster.nx + i]);
        }
        os << '\n';
    }
}

}  // namespace wisar
