#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "physnav/core/geometry.hpp"

namespace physnav {

enum class CellKind : std::uint8_t { Free, Obstacle, Hole };

using LabelId = std::uint16_t;
inline constexpr LabelId kNoLabel = 0;

/// Occupancy + semantic grid. Row 0 is the first map row; cell (c, r)
/// covers world x in [c*s, (c+1)*s) and y in [r*s, (r+1)*s). Immutable
/// once built; every accessor is const.
class GridMap {
 public:
  /// Label names are indexed by LabelId; entry 0 is the empty "none" label.
  /// Throws ValidationError if dimensions or cell size are inconsistent, or
  /// if the border is not closed.
  GridMap(int width, int height, double cell_size, std::vector<CellKind> cells,
          std::vector<LabelId> labels, std::vector<std::string> label_names,
          std::vector<char> label_chars = {});

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  std::size_t cell_count() const { return cells_.size(); }

  bool in_bounds(Cell c) const {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }
  bool in_bounds(Vec2 p) const;

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  /// Cell containing a world point (no bounds check).
  Cell cell_of(Vec2 p) const;
  Vec2 center(Cell c) const {
    return {(c.col + 0.5) * cell_size_, (c.row + 0.5) * cell_size_};
  }

  CellKind kind(Cell c) const { return cells_[index(c)]; }
  LabelId label(Cell c) const { return labels_[index(c)]; }
  bool is_obstacle(Cell c) const { return kind(c) == CellKind::Obstacle; }
  bool is_traversable(Cell c) const { return in_bounds(c) && !is_obstacle(c); }

  const std::vector<CellKind>& cells() const { return cells_; }
  const std::vector<LabelId>& labels() const { return labels_; }

  /// Names by id; names()[0] == "".
  const std::vector<std::string>& label_names() const { return label_names_; }
  std::size_t label_count() const { return label_names_.size() - 1; }
  std::optional<LabelId> find_label(std::string_view name) const;
  /// Characters used for each label in the text format (index 0 unused).
  const std::vector<char>& label_chars() const { return label_chars_; }

  /// Cells carrying a label, in row-major order.
  const std::vector<Cell>& labeled_cells() const { return labeled_cells_; }

 private:
  int width_;
  int height_;
  double cell_size_;
  std::vector<CellKind> cells_;
  std::vector<LabelId> labels_;
  std::vector<std::string> label_names_;
  std::vector<char> label_chars_;
  std::vector<Cell> labeled_cells_;
};

/// Parses the map text format:
///
///   cellsize 0.1
///   label s sofa
///   #####
///   #.s.#
///   #.H.#
///   #####
///
/// `.` Free, `#` Obstacle, `H` Hole; label characters mark Free cells
/// carrying that semantic label. Throws ParseError or ValidationError.
GridMap load_map(std::string_view text);

GridMap load_map_file(const std::string& path);

/// Inverse of load_map; load_map(to_text(m)) reproduces m exactly.
std::string to_text(const GridMap& map);

}  // namespace physnav
