#include "wisar/fleet.hpp"

#include <algorithm>
#include <limits>

namespace wisar {

bool CommGraph::connected(int i, int j) const {
    const auto key = std::minmax(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::pair<int, int>{key.first, key.second});
}

std::vector<int> CommGraph::neighbors_of(int i) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
        if (a == i) out.push_back(b);
        if (b == i) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

CommGraph comm_graph(std::span<const Vec2> positions, double range) {
    CommGraph g;
    g.n = static_cast<int>(positions.size());
    const double r2 = range * range;
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            if (squared_distance(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(j)]) <= r2) {
                g.edges.emplace_back(i, j);
            }
        }
    }
    return g;
}

std::optional<int> nearest_neighbor(int i, std::span<const Vec2> positions) {
    std::optional<int> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(positions.size()); ++k) {
        if (k == i) continue;
        const double d2 = squared_distance(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(k)]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = k;
        }
    }
    return best;
}

std::vector<int> detect_particles(Vec2 uav_pos, const ParticleCloud& cloud, int slice, double radius, MarkSet& marks) {
    std::vector<int> found;
    const auto pts = cloud.slice(slice);
    const double r2 = radius * radius;
    for (int i = 0; i < cloud.agent_count(); ++i) {
        if (marks.is_marked(i)) continue;
        if (squared_distance(pts[static_cast<std::size_t>(i)], uav_pos) <= r2) {
            marks.mark(i);
            found.push_back(i);
        }
    }
    return found;
}

void exchange_pheromones(std::span<UavState> uavs, const CommGraph& graph) {
    std::vector<MarkSet> before;
    before.reserve(uavs.size());
    for (const UavState& u : uavs) before.push_back(u.marks);
    for (const auto& [a, b] : graph.edges) {
        uavs[static_cast<std::size_t>(a)].marks.merge(before[static_cast<std::size_t>(b)]);
        uavs[static_cast<std::size_t>(b)].marks.merge(before[static_cast<std::size_t>(a)]);
    }
}

}  // namespace wisar
