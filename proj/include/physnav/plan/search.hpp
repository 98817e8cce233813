#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "physnav/core/geometry.hpp"
#include "physnav/plan/cost_grid.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav {

/// Path costs are integers in units of 1e-9 cell lengths so that searches
/// with different expansion orders agree exactly.
inline constexpr double kCostScale = 1'000'000'000.0;

/// Cost of stepping into `to` from a neighbor; diagonal steps weigh sqrt(2).
std::int64_t edge_cost(const CostGrid& grid, Cell to, bool diagonal);

/// Whether the 8-connected move from `from` by (dc, dr) is allowed: target
/// unblocked and, for diagonals, both side cells unblocked.
bool can_step(const CostGrid& grid, Cell from, int dc, int dr);

/// Sum of edge costs along a cell path (0 for a single cell).
std::int64_t path_cost(const CostGrid& grid, std::span<const Cell> path);

/// Minimum-cost 8-connected path, octile heuristic, ties broken toward the
/// lower cell index. Throws NoPath (also when start or goal is blocked) and
/// OutOfBounds.
std::vector<Cell> astar(const CostGrid& grid, Cell start, Cell goal);

/// Unit-cost distances (meters) from `source` to every cell; unreachable
/// and blocked cells hold +inf.
std::vector<double> geodesic_field(const GridMap& map, Cell source);

/// 8-connected shortest-path length between two points in meters.
/// Throws OutOfBounds or Unreachable.
double geodesic_distance(const GridMap& map, Vec2 a, Vec2 b);

/// Cell centers of a path.
std::vector<Vec2> to_points(const GridMap& map, std::span<const Cell> path);

/// Polyline length.
double path_length(std::span<const Vec2> points);

}  // namespace physnav
