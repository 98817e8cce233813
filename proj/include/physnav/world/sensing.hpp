#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "physnav/core/geometry.hpp"
#include "physnav/embodiment/pose_state.hpp"
#include "physnav/embodiment/robot_profile.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav {

enum class LightingKind { DL5000, DL300, CL };

std::string_view to_string(LightingKind kind);
/// Accepts "DL5000", "DL300", "CL" (case-insensitive). Throws ParseError.
LightingKind parse_lighting_kind(std::string_view name);

/// Lighting regime. Only the semantic channel is affected; depth never is.
struct LightingCondition {
  LightingKind kind = LightingKind::DL5000;
  double semantic_noise_sigma = 0.0;
  /// Camera-light only: noise std grows with |bearing| / fov.
  double angular_falloff = 0.0;
};

/// Daylight 5000 is noiseless; DL300 sigma 0.3; CL sigma 0.15 with falloff 1.
LightingCondition default_lighting(LightingKind kind);

struct SensorConfig {
  double field_of_view = deg_to_rad(90.0);
  int ray_count = 64;
  double max_range = 10.0;
};

struct VisibleLabel {
  LabelId label = kNoLabel;
  double bearing = 0.0;
  double distance = 0.0;
  double score = 0.0;

  friend bool operator==(const VisibleLabel&, const VisibleLabel&) = default;
};

struct Observation {
  std::vector<double> depth_rays;
  std::vector<VisibleLabel> visible_labels;
  double camera_height = 0.0;
  LightingCondition lighting;
  SensorConfig sensor;
};

/// Bearing of ray i relative to the heading; rays sweep from +fov/2 (left)
/// to -fov/2 (right) at bin centers.
double ray_bearing(int i, const SensorConfig& sensor);

/// Distance from origin along heading to the first Obstacle cell boundary,
/// clamped to max_range. Hole cells do not block. Throws OutOfBounds if the
/// origin is outside the map or inside an obstacle.
double ray_cast(const GridMap& map, Vec2 origin, double heading, double max_range);

/// Noiseless visibility score of a landmark at `distance`: 1 - d / (2 max_range).
double true_visibility_score(double distance, double max_range);

/// Ego-centric observation. Depth is a pure function of geometry; semantic
/// scores are the true visibility scores perturbed by lighting noise and
/// clamped to [0, 1]. Pure in (map, pose, profile, lighting, seed).
Observation observe(const GridMap& map, const PoseState& pose, const RobotProfile& profile,
                    const LightingCondition& lighting, std::uint64_t rng_seed,
                    const SensorConfig& sensor = {});

}  // namespace physnav
