/**
 * @file cli.hpp
 * @brief The `wisar` command line: terrain, simulate, heatmap, search,
 *        benchmark and replay subcommands.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wisar/density.hpp"
#include "wisar/lost_person.hpp"

namespace wisar {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 on success, 1 on a failed consistency check, 2 on usage or config
/// errors, 3 on I/O errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Grid-aligned raster covering a slice's particles plus `pad` meters,
/// clipped to [lo, hi].
RasterSpec raster_around(std::span<const Vec2> particles, double cell, double pad, Vec2 lo, Vec2 hi);

/// 8-bit binary PGM of a raster (north up), scaled to the largest value.
void write_pgm(std::ostream& os, const RasterSpec& raster, std::span<const double> values);

}  // namespace wisar
