#include "physnav/semnav/semantic_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "physnav/core/errors.hpp"

namespace physnav {

SemanticMap::SemanticMap(const GridMap& world)
    : width_(world.width()),
      height_(world.height()),
      cell_size_(world.cell_size()),
      label_names_(world.label_names()),
      scores_(world.cell_count() * world.label_count(), 0.0),
      explored_(world.cell_count(), false),
      obstacle_(world.cell_count(), false) {}

Cell SemanticMap::cell_of(Vec2 p) const {
  return {static_cast<int>(std::floor(p.x / cell_size_)), static_cast<int>(std::floor(p.y / cell_size_))};
}

LabelId SemanticMap::label_id(std::string_view name) const {
  for (std::size_t i = 1; i < label_names_.size(); ++i) {
    if (label_names_[i] == name) return static_cast<LabelId>(i);
  }
  throw UnknownLabel("label not in vocabulary: " + std::string(name));
}

double SemanticMap::score(Cell c, LabelId label) const {
  if (label == kNoLabel || label > label_count()) throw UnknownLabel("label id out of range");
  return scores_[index(c) * label_count() + (label - 1)];
}

double SemanticMap::explored_fraction() const {
  if (explored_.empty()) return 0.0;
  const auto n = std::count(explored_.begin(), explored_.end(), true);
  return static_cast<double>(n) / static_cast<double>(explored_.size());
}

void SemanticMap::mark_obstacle(Cell c) {
  obstacle_[index(c)] = true;
  explored_[index(c)] = true;
}

void SemanticMap::deposit(Cell c, LabelId label, double score) {
  if (label == kNoLabel || label > label_count()) throw UnknownLabel("label id out of range");
  double& slot = scores_[index(c) * label_count() + (label - 1)];
  slot = std::max(slot, std::clamp(score, 0.0, 1.0));
  explored_[index(c)] = true;
}

std::vector<LabelId> SemanticMap::detected_labels(double threshold) const {
  std::vector<LabelId> out;
  const std::size_t labels = label_count();
  for (std::size_t l = 0; l < labels; ++l) {
    for (std::size_t i = 0; i < explored_.size(); ++i) {
      if (scores_[i * labels + l] > threshold) {
        out.push_back(static_cast<LabelId>(l + 1));
        break;
      }
    }
  }
  return out;
}

void integrate_observation(SemanticMap& smap, const Observation& obs, const PoseState& pose) {
  const Vec2 origin = pose.position();
  const Cell here = smap.cell_of(origin);
  if (smap.in_bounds(here)) smap.mark_explored(here);

  const SensorConfig& sensor = obs.sensor;
  const int rays = static_cast<int>(obs.depth_rays.size());
  if (rays > 0) {
    const double half_fov = sensor.field_of_view / 2.0;
    const double bin = sensor.field_of_view / rays;
    const double s = smap.cell_size();

    // Fill the swept sector: a cell is seen if its center lies inside the
    // field of view and no farther than the depth of the ray covering it.
    const int reach = static_cast<int>(std::ceil(sensor.max_range / s)) + 1;
    for (int r = here.row - reach; r <= here.row + reach; ++r) {
      for (int c = here.col - reach; c <= here.col + reach; ++c) {
        const Cell cell{c, r};
        if (!smap.in_bounds(cell)) continue;
        const Vec2 delta = smap.center(cell) - origin;
        const double d = norm(delta);
        if (d > sensor.max_range) continue;
        const double bearing = d > 0.0 ? normalize_angle(std::atan2(delta.y, delta.x) - pose.heading) : 0.0;
        if (std::abs(bearing) > half_fov) continue;
        const int i = std::clamp(static_cast<int>(std::floor((half_fov - bearing) / bin)), 0, rays - 1);
        if (d <= obs.depth_rays[static_cast<std::size_t>(i)]) smap.mark_explored(cell);
      }
    }

    // Walk each ray so that cells too thin for the sector test are covered,
    // then mark the cell the ray stopped in.
    const double stride = 0.25 * s;
    for (int i = 0; i < rays; ++i) {
      const double heading = pose.heading + ray_bearing(i, sensor);
      const Vec2 dir{std::cos(heading), std::sin(heading)};
      const double depth = obs.depth_rays[static_cast<std::size_t>(i)];
      for (double t = 0.0; t < depth; t += stride) {
        const Cell cell = smap.cell_of(origin + t * dir);
        if (smap.in_bounds(cell)) smap.mark_explored(cell);
      }
      if (depth < sensor.max_range) {
        const Cell hit = smap.cell_of(origin + (depth + 1e-6) * dir);
        if (smap.in_bounds(hit)) smap.mark_obstacle(hit);
      }
    }
  }

  for (const VisibleLabel& v : obs.visible_labels) {
    const double heading = pose.heading + v.bearing;
    const Cell cell = smap.cell_of(origin + v.distance * Vec2{std::cos(heading), std::sin(heading)});
    if (smap.in_bounds(cell)) smap.deposit(cell, v.label, v.score);
  }
}

std::optional<Cell> index_landmark(const SemanticMap& smap, std::string_view label, double threshold) {
  const LabelId id = smap.label_id(label);
  const std::size_t n = smap.cell_count();
  std::vector<int> region(n, -1);

  std::vector<Cell> best_cells;
  double best_peak = threshold;
  int regions = 0;
  for (std::size_t start = 0; start < n; ++start) {
    const Cell seed{static_cast<int>(start % static_cast<std::size_t>(smap.width())),
                    static_cast<int>(start / static_cast<std::size_t>(smap.width()))};
    if (region[start] >= 0 || !(smap.score(seed, id) > 0.0)) continue;

    std::vector<Cell> cells{seed};
    region[start] = regions;
    double peak = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Cell c = cells[k];
      peak = std::max(peak, smap.score(c, id));
      const Cell next[4] = {{c.col + 1, c.row}, {c.col - 1, c.row}, {c.col, c.row + 1}, {c.col, c.row - 1}};
      for (const Cell& m : next) {
        if (!smap.in_bounds(m) || region[smap.index(m)] >= 0 || !(smap.score(m, id) > 0.0)) continue;
        region[smap.index(m)] = regions;
        cells.push_back(m);
      }
    }
    if (peak > best_peak) {
      best_peak = peak;
      best_cells = std::move(cells);
    }
    ++regions;
  }
  if (best_cells.empty()) return std::nullopt;

  double sx = 0.0;
  double sy = 0.0;
  for (const Cell& c : best_cells) {
    sx += c.col;
    sy += c.row;
  }
  const double cx = sx / static_cast<double>(best_cells.size());
  const double cy = sy / static_cast<double>(best_cells.size());
  const Cell rounded{static_cast<int>(std::lround(cx)), static_cast<int>(std::lround(cy))};
  if (std::find(best_cells.begin(), best_cells.end(), rounded) != best_cells.end()) return rounded;

  Cell nearest = best_cells.front();
  double best = std::numeric_limits<double>::infinity();
  for (const Cell& c : best_cells) {
    const double d = std::hypot(c.col - cx, c.row - cy);
    if (d < best) {
      best = d;
      nearest = c;
    }
  }
  return nearest;
}

}  // namespace physnav
