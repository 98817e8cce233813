#include "physnav/plan/frontier.hpp"

#include <cmath>

#include "physnav/core/errors.hpp"

namespace physnav {

std::vector<Cell> detect_frontiers(const std::vector<bool>& explored, const GridMap& map) {
  if (explored.size() != map.cell_count()) throw DimensionMismatch("explored mask does not match the map");
  std::vector<Cell> out;
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      const Cell cell{c, r};
      if (!explored[map.index(cell)] || map.kind(cell) != CellKind::Free) continue;
      const Cell around[4] = {{c + 1, r}, {c - 1, r}, {c, r + 1}, {c, r - 1}};
      for (const Cell& n : around) {
        if (map.in_bounds(n) && !explored[map.index(n)]) {
          out.push_back(cell);
          break;
        }
      }
    }
  }
  return out;
}

double reorient_cost(const ReorientCandidate& c, Vec2 x0, double target_dist, double alpha) {
  return std::abs(distance(c.position, x0) - target_dist) + alpha * c.gamma;
}

const ReorientCandidate& select_reorient_node(std::span<const ReorientCandidate> candidates, Vec2 x0,
                                              double target_dist, double alpha) {
  if (candidates.empty()) throw EmptyCandidates("no reorientation candidates");
  std::size_t best = 0;
  double best_cost = reorient_cost(candidates[0], x0, target_dist, alpha);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double cost = reorient_cost(candidates[i], x0, target_dist, alpha);
    if (cost < best_cost || (cost == best_cost && candidates[i].gamma < candidates[best].gamma)) {
      best = i;
      best_cost = cost;
    }
  }
  return candidates[best];
}

}  // namespace physnav
