#include "physnav/plan/cost_grid.hpp"

#include <algorithm>
#include <cmath>

#include "physnav/core/errors.hpp"

namespace physnav {

CostGrid::CostGrid(int width, int height, double cell_size, std::vector<double> costs)
    : width_(width), height_(height), cell_size_(cell_size), costs_(std::move(costs)) {
  if (width <= 0 || height <= 0) throw ValidationError("cost grid has no cells");
  if (costs_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionMismatch("cost array does not match width*height");
  }
  for (double c : costs_) {
    if (!(c >= 1.0)) throw ValidationError("cell costs must be >= 1");
  }
}

CostGrid CostGrid::uniform(const GridMap& map) {
  std::vector<double> costs(map.cell_count(), 1.0);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (map.cells()[i] == CellKind::Obstacle) costs[i] = kBlocked;
  }
  return CostGrid(map.width(), map.height(), map.cell_size(), std::move(costs));
}

CostGrid dilate(const GridMap& map, double radius, const CostParams& params) {
  if (radius < 0.0) throw InvalidRange("dilation radius must be >= 0");
  if (!(params.dilated >= 1.0)) throw ValidationError("dilated cost must be >= 1");
  CostGrid grid = CostGrid::uniform(map);
  if (radius == 0.0) return grid;

  const double s = map.cell_size();
  const int reach = static_cast<int>(std::ceil(radius / s)) + 1;
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      if (!map.is_obstacle({c, r})) continue;
      for (int rr = std::max(0, r - reach); rr <= std::min(map.height() - 1, r + reach); ++rr) {
        for (int cc = std::max(0, c - reach); cc <= std::min(map.width() - 1, c + reach); ++cc) {
          const Cell n{cc, rr};
          if (grid.blocked(n) || grid.cost(n) >= params.dilated) continue;
          // Center of n to the obstacle square: the gap is whole cells minus half a cell per axis.
          const double dx = std::max(0.0, (std::abs(cc - c) - 0.5) * s);
          const double dy = std::max(0.0, (std::abs(rr - r) - 0.5) * s);
          if (std::hypot(dx, dy) <= radius) grid.set_cost(n, params.dilated);
        }
      }
    }
  }
  return grid;
}

void penalize_unexplored(CostGrid& grid, const std::vector<bool>& explored, double unexplored_cost) {
  if (explored.size() != grid.cell_count()) throw DimensionMismatch("explored mask does not match the grid");
  if (!(unexplored_cost >= 1.0)) throw ValidationError("unexplored cost must be >= 1");
  for (std::size_t i = 0; i < explored.size(); ++i) {
    const Cell c = grid.cell_at(i);
    if (explored[i] || grid.blocked(c)) continue;
    grid.set_cost(c, std::max(grid.cost(c), unexplored_cost));
  }
}

}  // namespace physnav
