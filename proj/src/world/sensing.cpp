#include "physnav/world/sensing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"

namespace physnav {

std::string_view to_string(LightingKind kind) {
  switch (kind) {
    case LightingKind::DL5000: return "DL5000";
    case LightingKind::DL300: return "DL300";
    case LightingKind::CL: return "CL";
  }
  return "unknown";
}

LightingKind parse_lighting_kind(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "DL5000") return LightingKind::DL5000;
  if (upper == "DL300") return LightingKind::DL300;
  if (upper == "CL") return LightingKind::CL;
  throw ParseError("unknown lighting condition: " + std::string(name));
}

LightingCondition default_lighting(LightingKind kind) {
  switch (kind) {
    case LightingKind::DL5000: return {kind, 0.0, 0.0};
    case LightingKind::DL300: return {kind, 0.3, 0.0};
    case LightingKind::CL: return {kind, 0.15, 1.0};
  }
  return {};
}

double ray_bearing(int i, const SensorConfig& sensor) {
  const double step = sensor.field_of_view / sensor.ray_count;
  return sensor.field_of_view / 2.0 - (i + 0.5) * step;
}

double ray_cast(const GridMap& map, Vec2 origin, double heading, double max_range) {
  if (!map.in_bounds(origin)) throw OutOfBounds("ray origin outside the map");
  Cell cell = map.cell_of(origin);
  if (map.is_obstacle(cell)) throw OutOfBounds("ray origin inside an obstacle");

  const double s = map.cell_size();
  const double dx = std::cos(heading);
  const double dy = std::sin(heading);
  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Boundary crossings are recomputed from integer boundary indices each
  // step rather than accumulated, so long rays do not drift.
  auto next_t_x = [&] {
    if (step_x == 0) return kInf;
    const int boundary = step_x > 0 ? cell.col + 1 : cell.col;
    return (boundary * s - origin.x) / dx;
  };
  auto next_t_y = [&] {
    if (step_y == 0) return kInf;
    const int boundary = step_y > 0 ? cell.row + 1 : cell.row;
    return (boundary * s - origin.y) / dy;
  };

  while (true) {
    const double tx = next_t_x();
    const double ty = next_t_y();
    const double t = std::min(tx, ty);
    if (t >= max_range) return max_range;
    if (tx <= ty) {
      cell.col += step_x;
    } else {
      cell.row += step_y;
    }
    if (!map.in_bounds(cell) || map.is_obstacle(cell)) return std::max(t, 0.0);
  }
}

double true_visibility_score(double distance, double max_range) {
  return std::clamp(1.0 - distance / (2.0 * max_range), 0.0, 1.0);
}

Observation observe(const GridMap& map, const PoseState& pose, const RobotProfile& profile,
                    const LightingCondition& lighting, std::uint64_t rng_seed,
                    const SensorConfig& sensor) {
  const Vec2 origin = pose.position();
  if (!map.in_bounds(origin) || map.is_obstacle(map.cell_of(origin))) {
    throw OutOfBounds("observation pose is not on a traversable cell");
  }

  Observation obs;
  obs.camera_height = profile.camera_height;
  obs.lighting = lighting;
  obs.sensor = sensor;
  obs.depth_rays.reserve(static_cast<std::size_t>(sensor.ray_count));
  for (int i = 0; i < sensor.ray_count; ++i) {
    obs.depth_rays.push_back(
        ray_cast(map, origin, pose.heading + ray_bearing(i, sensor), sensor.max_range));
  }

  Rng rng(rng_seed);
  const double half_fov = sensor.field_of_view / 2.0;
  for (const Cell& cell : map.labeled_cells()) {
    const Vec2 target = map.center(cell);
    const Vec2 delta = target - origin;
    const double d = norm(delta);
    if (d > sensor.max_range) continue;
    const double bearing = d > 0.0 ? normalize_angle(std::atan2(delta.y, delta.x) - pose.heading) : 0.0;
    if (std::abs(bearing) > half_fov) continue;
    if (d > 0.0 && ray_cast(map, origin, pose.heading + bearing, d) < d) continue;

    double sigma = lighting.semantic_noise_sigma;
    if (lighting.kind == LightingKind::CL) {
      sigma *= lighting.angular_falloff * std::abs(bearing) / sensor.field_of_view;
    }
    double score = true_visibility_score(d, sensor.max_range);
    if (sigma > 0.0) score = std::clamp(score - sigma * rng.normal(), 0.0, 1.0);
    obs.visible_labels.push_back({map.label(cell), bearing, d, score});
  }
  return obs;
}

}  // namespace physnav
