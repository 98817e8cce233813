#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "physnav/core/geometry.hpp"
#include "physnav/embodiment/pose_state.hpp"
#include "physnav/world/grid_map.hpp"
#include "physnav/world/sensing.hpp"

namespace physnav {

inline constexpr double kDetectionThreshold = 0.5;

/// What the agent has seen so far: a score per (cell, label) in [0, 1], an
/// explored mask and an obstacle mask built from depth. Shares the
/// dimensions and label vocabulary of the world it was created from.
class SemanticMap {
 public:
  explicit SemanticMap(const GridMap& world);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  std::size_t cell_count() const { return explored_.size(); }
  bool in_bounds(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.col);
  }
  Cell cell_of(Vec2 p) const;
  Vec2 center(Cell c) const { return {(c.col + 0.5) * cell_size_, (c.row + 0.5) * cell_size_}; }

  /// Names by id; entry 0 is the unused "none" label.
  const std::vector<std::string>& label_names() const { return label_names_; }
  std::size_t label_count() const { return label_names_.size() - 1; }
  /// Throws UnknownLabel.
  LabelId label_id(std::string_view name) const;

  double score(Cell c, LabelId label) const;
  bool explored(Cell c) const { return explored_[index(c)]; }
  bool obstacle(Cell c) const { return obstacle_[index(c)]; }
  const std::vector<bool>& explored_mask() const { return explored_; }
  const std::vector<bool>& obstacle_mask() const { return obstacle_; }
  double explored_fraction() const;

  void mark_explored(Cell c) { explored_[index(c)] = true; }
  void mark_obstacle(Cell c);
  /// Max-merges a score into a cell and marks it explored.
  void deposit(Cell c, LabelId label, double score);

  /// Labels with a score above `threshold` somewhere in the map, by id.
  std::vector<LabelId> detected_labels(double threshold = kDetectionThreshold) const;

  friend bool operator==(const SemanticMap&, const SemanticMap&) = default;

 private:
  int width_;
  int height_;
  double cell_size_;
  std::vector<std::string> label_names_;
  // Row-major cells, label_count() scores per cell.
  std::vector<double> scores_;
  std::vector<bool> explored_;
  std::vector<bool> obstacle_;
};

/// Marks every cell the depth rays swept as explored, marks the cell just
/// past each ray that hit something as an obstacle, and max-merges visible
/// label scores into the cells they were seen at. Scores and masks never
/// decrease; integrating the same observation twice changes nothing.
void integrate_observation(SemanticMap& smap, const Observation& obs, const PoseState& pose);

/// Centroid of the 4-connected region of positive scores whose peak is the
/// highest, if that peak exceeds `threshold`. When the rounded centroid falls
/// outside the region, the region cell nearest to it is returned. Throws
/// UnknownLabel.
std::optional<Cell> index_landmark(const SemanticMap& smap, std::string_view label,
                                   double threshold = kDetectionThreshold);

}  // namespace physnav
