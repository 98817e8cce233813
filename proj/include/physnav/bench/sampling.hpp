#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "physnav/bench/episode.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav {

struct SamplingConfig {
  double min_length = 3.0;
  double max_length = 15.0;
  /// A pair is rejected when both its start and goal lie within this
  /// distance of an accepted pair's start and goal.
  double similarity_radius = 1.0;
  double dilation_radius = 0.3;
  /// Draws per requested episode before giving up.
  int attempts_per_episode = 200;
  double train_fraction = 0.7;
  double val_seen_fraction = 0.1;
  /// Landmarks within this distance of the goal name it in the instruction
  /// and the subgoal program.
  double landmark_radius = 1.5;
  std::string scene_id = "scene";
};

/// Free cells of the largest 8-connected traversable component.
std::vector<Cell> free_map(const GridMap& map);

struct SampleResult {
  std::vector<Episode> episodes;
  /// Set when fewer than the requested episodes could be drawn.
  std::string warning;
};

/// Draws start/goal pairs from the free map, keeps those whose geodesic
/// length lies in [min_length, max_length] and that are not near-duplicates,
/// and attaches an A* reference path on the dilated grid, a templated
/// instruction and, when a landmark is near the goal, a subgoal program.
/// Throws InsufficientFreeSpace.
SampleResult sample_episodes(const GridMap& map, int count, const SamplingConfig& config, std::uint64_t seed);

/// Why an episode violates the dataset invariants, or nullopt if it is valid.
std::optional<std::string> episode_problem(const GridMap& map, const Episode& episode, const SamplingConfig& config);

/// "Walk forward 2 meters, then turn left and walk forward 3.5 meters, then
/// stop next to the sofa."
std::string describe_path(const std::vector<Vec2>& path, double start_heading, const std::string& landmark);

/// The structured program matching describe_path: per leg an optional
/// turn (when sharper than 30 degrees) and a forward move rounded to 0.5 m,
/// then move_to_object(landmark) if one is given, then stop.
SubgoalProgram path_program(const std::vector<Vec2>& path, double start_heading, const std::string& landmark);

}  // namespace physnav
