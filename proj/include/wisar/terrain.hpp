/**
 * @file terrain.hpp
 * @brief Procedural heightfields, elevation queries, water masks and
 *        slope-dependent walking speed.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "wisar/geometry.hpp"

namespace wisar {

/**
 * @brief Generator parameters for a square heightfield.
 *
 * `el`, `r_0` and `r_r` are in abstract generator units; `vertical_scale`
 * converts them to meters.
 */
struct TerrainParams {
    int n_e = 257;                 ///< grid edge size in cells
    double el = 8.0;               ///< base elevation
    double r_0 = 6.0;              ///< initial roughness
    double r_r = 10.0;             ///< roughness rate; larger smooths out faster
    double cell_size = 62.5;       ///< meters per cell
    double vertical_scale = 12.0;  ///< meters per generator unit

    void validate() const;
};

/// Table II presets (mild / moderate / severe) with the given grid geometry.
enum class Roughness { mild, moderate, severe };

TerrainParams roughness_preset(Roughness r, int n_e, double cell_size);
Roughness parse_roughness(const std::string& name);
std::string to_string(Roughness r);

/**
 * @brief Immutable n_e x n_e heightfield sampled at cell centers.
 *
 * Cell (ix, iy) sits at `origin + (ix, iy) * cell_size`; the queryable extent is
 * the closed square spanned by the outermost cell centers.
 */
class TerrainGrid {
public:
    TerrainGrid(TerrainParams params, Vec2 origin, std::vector<double> heights);

    /// Samples `f(x, y)` at every cell center.
    static TerrainGrid from_function(int n_e, double cell_size, Vec2 origin,
                                     const std::function<double(double, double)>& f);

    const TerrainParams& params() const { return params_; }
    int size() const { return params_.n_e; }
    double cell_size() const { return params_.cell_size; }
    Vec2 origin() const { return origin_; }
    Vec2 extent_min() const { return origin_; }
    Vec2 extent_max() const;
    const std::vector<double>& heights() const { return heights_; }

    double height(int ix, int iy) const { return heights_[static_cast<std::size_t>(iy) * params_.n_e + ix]; }
    bool contains(const Vec2& p) const;

    /// Bilinear elevation in meters; throws DomainError outside the extent.
    double elevation_at(double x, double y) const;
    double elevation_at(const Vec2& p) const { return elevation_at(p.x, p.y); }

    /// True iff the elevation is strictly below `z_0`.
    bool is_water(double x, double y, double z_0) const { return elevation_at(x, y) < z_0; }
    bool is_water(const Vec2& p, double z_0) const { return is_water(p.x, p.y, z_0); }

private:
    TerrainParams params_;
    Vec2 origin_;
    std::vector<double> heights_;
};

/**
 * @brief Diamond-square midpoint displacement.
 *
 * Displacement at recursion level k has standard deviation
 * r_0 * 2^(-k * r_r / 10), so r_r = 10 is the classic halving per level and
 * larger r_r smooths faster. Deterministic for fixed (params, seed).
 */
TerrainGrid generate_terrain(const TerrainParams& params, std::uint64_t seed, Vec2 origin = {});

/// Height below which `fraction` of the cells lie (e.g. 0.08 for the 8th percentile).
double height_percentile(const TerrainGrid& grid, double fraction);

/// Least-squares slope angle (degrees) of the profile from `from` to `to`.
/// Positive when `to` is uphill. Coincident endpoints give 0.
double average_slope(const TerrainGrid& grid, const Vec2& from, const Vec2& to, int n_samples = 8);

struct SpeedScaleParams {
    double gamma_min = -35.0;  ///< steepest walkable decline, degrees (< 0)
    double gamma_max = 30.0;   ///< steepest walkable incline, degrees (> 0)

    void validate() const;
    bool walkable(double gamma) const { return gamma >= gamma_min && gamma <= gamma_max; }
};

/// Piecewise-linear speed factor in [0, 1]; 1 on flat ground, 0 at and beyond the limits.
double speed_scale(double gamma, const SpeedScaleParams& p);

/// Plain-text heightfield: header "n_e cell_size origin_x origin_y", then n_e rows
/// (row iy, ascending) of n_e space-separated heights.
void write_heightfield(std::ostream& os, const TerrainGrid& grid);
TerrainGrid read_heightfield(std::istream& is);

}  // namespace wisar
