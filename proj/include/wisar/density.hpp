/**
 * @file density.hpp
 * @brief Kernel density and detection probability over a particle cloud.
 *
 * All functions normalize by the total agent count, so particles marked as
 * searched simply drop out of the mass.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wisar/geometry.hpp"
#include "wisar/lost_person.hpp"

namespace wisar {

enum class Kernel { gaussian, epanechnikov };

struct DensityParams {
    double h_s = 100.0;  ///< spatial bandwidth, m
    Kernel kernel = Kernel::gaussian;
};

/// Monotone set of particles already searched.
class MarkSet {
public:
    MarkSet() = default;
    explicit MarkSet(int n_agents) : flags_(static_cast<std::size_t>(n_agents), 0) {}

    int size() const { return static_cast<int>(flags_.size()); }
    bool is_marked(int i) const { return flags_[static_cast<std::size_t>(i)] != 0; }
    /// Returns true when `i` was not marked before.
    bool mark(int i);
    int count() const { return count_; }
    /// Union with `other`; returns how many marks were added.
    int merge(const MarkSet& other);
    std::vector<int> indices() const;

    friend bool operator==(const MarkSet& a, const MarkSet& b) { return a.flags_ == b.flags_; }
    /// True iff every mark of `a` is also in `b`.
    friend bool is_subset(const MarkSet& a, const MarkSet& b);

private:
    std::vector<std::uint8_t> flags_;
    int count_ = 0;
};

/// Kernel value for the normalized offset (u, v); integrates to 1 over the plane.
double kernel_value(Kernel k, double u, double v);

/// Density estimate (1/m^2) at (x, y) from the unmarked particles of `slice`.
double kde_at(const ParticleCloud& cloud, int slice, double x, double y, const DensityParams& params,
              const MarkSet& marks);

/// Fraction of all particles that are unmarked and inside the closed disk.
double poa_disk(const ParticleCloud& cloud, int slice, Vec2 center, double radius, const MarkSet& marks);

/// Numerically stable logistic function.
double logistic(double z);

/// Smooth surrogate of poa_disk: sum of logistic((R - d) / h_s) over unmarked particles, / n.
double poa_disk_smooth(const ParticleCloud& cloud, int slice, Vec2 center, double radius,
                       const DensityParams& params, const MarkSet& marks);

/// Rule-of-thumb bandwidth 1.06 * sigma * n^(-1/6) on the unmarked particles of a slice.
double silverman_bandwidth(std::span<const Vec2> points);

/// Regular raster for heatmap export; cell (i, j) is centered at origin + (i, j) * cell.
struct RasterSpec {
    Vec2 origin;
    double cell = 100.0;
    int nx = 1;
    int ny = 1;
};

/// Row-major (row j = y index) matrix of kde_at values.
std::vector<double> rasterize_density(const ParticleCloud& cloud, int slice, const RasterSpec& raster,
                                      const DensityParams& params, const MarkSet& marks);

/// Plain-text matrix: ny rows of nx space-separated values, preceded by a
/// "# origin_x origin_y cell nx ny" comment line.
void write_matrix(std::ostream& os, const RasterSpec& raster, std::span<const double> values);

}  // namespace wisar
