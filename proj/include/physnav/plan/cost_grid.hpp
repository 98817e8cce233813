#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "physnav/core/geometry.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav {

struct CostParams {
  double dilated = 3.0;
  double unexplored = 2.0;
};

/// Per-cell traversal cost over a map's grid. Blocked cells hold +inf.
class CostGrid {
 public:
  static constexpr double kBlocked = std::numeric_limits<double>::infinity();

  CostGrid(int width, int height, double cell_size, std::vector<double> costs);

  /// Obstacles blocked, everything else (holes included) costs 1.
  static CostGrid uniform(const GridMap& map);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  std::size_t cell_count() const { return costs_.size(); }
  bool in_bounds(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(width_)),
            static_cast<int>(i / static_cast<std::size_t>(width_))};
  }

  double cost(Cell c) const { return costs_[index(c)]; }
  bool blocked(Cell c) const { return !in_bounds(c) || costs_[index(c)] == kBlocked; }
  void set_cost(Cell c, double cost) { costs_[index(c)] = cost; }
  const std::vector<double>& costs() const { return costs_; }

 private:
  int width_;
  int height_;
  double cell_size_;
  std::vector<double> costs_;
};

/// Obstacles blocked; free cells whose center lies within `radius` of an
/// obstacle cell (center-to-square distance) cost params.dilated; the rest 1.
CostGrid dilate(const GridMap& map, double radius, const CostParams& params = {});

/// Raises every unblocked cell outside `explored` to at least `unexplored_cost`.
/// Throws DimensionMismatch.
void penalize_unexplored(CostGrid& grid, const std::vector<bool>& explored, double unexplored_cost);

}  // namespace physnav
