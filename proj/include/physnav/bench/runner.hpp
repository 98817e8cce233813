#pragma once

#include <cstdint>

#include "physnav/bench/episode.hpp"
#include "physnav/bench/trace.hpp"
#include "physnav/control/commands.hpp"
#include "physnav/embodiment/robot_profile.hpp"
#include "physnav/policy/policy.hpp"
#include "physnav/world/grid_map.hpp"
#include "physnav/world/sensing.hpp"

namespace physnav {

inline constexpr int kDefaultMaxSteps = 200;
inline constexpr double kDefaultSuccessRadius = 3.0;

struct RunOptions {
  ControllerKind controller = ControllerKind::Flash;
  RobotProfile profile = default_profile(RobotKind::Flash);
  LightingCondition lighting = default_lighting(LightingKind::DL5000);
  int max_steps = kDefaultMaxSteps;
  double success_radius = kDefaultSuccessRadius;
  SensorConfig sensor;
  ControlConfig control;
  std::uint64_t seed = 0;
};

/// Runs one episode: observe, decide, execute, then check for collisions,
/// falls and stuck windows. Ends on Stop, Fall, Stuck, an aborting policy,
/// or Timeout at step max_steps. Policy and planner errors end the episode
/// with a failure reason instead of propagating. Stuck detection is off
/// under the flash controller, which cannot be physically immobilized.
EpisodeTrace run_episode(const Episode& episode, const GridMap& map, Policy& policy, const RunOptions& options);

}  // namespace physnav
