#pragma once

#include <span>
#include <vector>

#include "physnav/core/geometry.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav {

/// Explored Free cells with at least one unexplored 4-neighbor, row-major.
/// Off-map neighbors do not count. Throws DimensionMismatch.
std::vector<Cell> detect_frontiers(const std::vector<bool>& explored, const GridMap& map);

struct ReorientCandidate {
  Cell n;
  Vec2 position;
  /// |angle to face n from the current heading|, in [0, pi].
  double gamma = 0.0;
};

inline constexpr double kReorientAlpha = 0.25;

/// |dist(n, x0) - target_dist| + alpha * gamma with Euclidean dist.
double reorient_cost(const ReorientCandidate& c, Vec2 x0, double target_dist, double alpha);

/// Argmin of reorient_cost; ties go to the smaller gamma, then to the
/// earlier candidate. Throws EmptyCandidates.
const ReorientCandidate& select_reorient_node(std::span<const ReorientCandidate> candidates, Vec2 x0,
                                              double target_dist, double alpha = kReorientAlpha);

}  // namespace physnav
