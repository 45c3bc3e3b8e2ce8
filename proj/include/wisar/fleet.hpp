/**
 * @file fleet.hpp
 * @brief Tick-level coordination between UAVs: who can talk to whom, who is
 *        nearest, and how "searched" marks spread.
 */

#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wisar/density.hpp"
#include "wisar/geometry.hpp"
#include "wisar/lost_person.hpp"

namespace wisar {

struct UavState {
    int id = 0;
    Vec2 position;
    Vec2 previous;                 ///< position one tick ago (turning reference)
    std::vector<Vec2> trajectory;  ///< one entry per tick, starting at launch
    MarkSet marks;                 ///< particles this UAV believes are searched
};

/// Undirected single-hop links, stored as sorted (i < j) pairs.
struct CommGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    bool connected(int i, int j) const;
    std::vector<int> neighbors_of(int i) const;
};

/// Edge iff the pairwise distance is at most `range`.
CommGraph comm_graph(std::span<const Vec2> positions, double range);

/// Closest other UAV (lowest id on ties); empty with fewer than two UAVs.
std::optional<int> nearest_neighbor(int i, std::span<const Vec2> positions);

/// Unmarked particles of `slice` within the closed disk; they are marked in `marks`.
std::vector<int> detect_particles(Vec2 uav_pos, const ParticleCloud& cloud, int slice, double radius, MarkSet& marks);

/// Single-hop union: each UAV adds the marks its direct neighbors held before the exchange.
void exchange_pheromones(std::span<UavState> uavs, const CommGraph& graph);

}  // namespace wisar
