#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "physnav/bench/episode.hpp"
#include "physnav/bench/trace.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav {

/// Scene id -> map.
using SceneMaps = std::map<std::string, std::shared_ptr<const GridMap>>;

struct EpisodeMetrics {
  std::string episode_id;
  std::string scene_id;
  int steps = 0;
  /// Terminal event name, or "none" when the agent gave up.
  std::string terminal;
  double tl = 0.0;
  double ne = 0.0;
  int success = 0;
  int oracle_success = 0;
  double spl = 0.0;
  int fell = 0;
  int stuck = 0;
  std::string failure_reason;
};

/// Means in meters; every other aggregate is a percentage.
struct AggregateMetrics {
  int episodes = 0;
  double tl = 0.0;
  double ne = 0.0;
  double fr = 0.0;
  double str = 0.0;
  double os = 0.0;
  double sr = 0.0;
  double spl = 0.0;
};

struct MetricsReport {
  /// Sorted by (episode_id, scene_id).
  std::vector<EpisodeMetrics> episodes;
  AggregateMetrics aggregate;
};

/// TL sums pose displacements; NE is the geodesic from the last pose to the
/// goal (Euclidean if they are disconnected, which never counts as success);
/// success needs a Stop and NE <= radius; oracle success needs any pose
/// within the radius; SPL = success * l / max(l, TL) with l the geodesic
/// start-goal length. Throws LengthMismatch when traces and episodes do not
/// line up, ValidationError for an unknown scene.
MetricsReport compute_metrics(const std::vector<EpisodeTrace>& traces, const std::vector<Episode>& episodes,
                              const SceneMaps& maps, double success_radius);
MetricsReport compute_metrics(const std::vector<EpisodeTrace>& traces, const std::vector<Episode>& episodes,
                              const GridMap& map, double success_radius);

/// Aggregates per-episode rows; order-independent.
AggregateMetrics aggregate(std::vector<EpisodeMetrics> rows);

}  // namespace physnav
