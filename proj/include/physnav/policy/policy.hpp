#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "physnav/bench/episode.hpp"
#include "physnav/control/commands.hpp"
#include "physnav/core/geometry.hpp"
#include "physnav/embodiment/pose_state.hpp"
#include "physnav/embodiment/robot_profile.hpp"
#include "physnav/world/grid_map.hpp"
#include "physnav/world/sensing.hpp"

namespace physnav {

/// What a policy wants done in one decision step.
struct Decision {
  enum class Kind { Act, Path, Relative, Stop, Abort };

  Kind kind = Kind::Stop;
  DiscreteAction action;
  /// Kind::Path: world-frame waypoints.
  std::vector<Vec2> path;
  /// Kind::Relative: body-frame offsets (dx, dy, dyaw), applied in order.
  std::vector<Pose2> relative;
  /// Action log entry; defaults to the action name.
  std::string label;
  /// Kind::Abort: why the agent gave up.
  std::string reason;

  static Decision act(DiscreteAction a) { return {Kind::Act, a, {}, {}, std::string(to_string(a.kind)), {}}; }
  static Decision follow(std::vector<Vec2> waypoints, std::string label) {
    return {Kind::Path, {}, std::move(waypoints), {}, std::move(label), {}};
  }
  static Decision move_relative(std::vector<Pose2> offsets, std::string label) {
    return {Kind::Relative, {}, {}, std::move(offsets), std::move(label), {}};
  }
  static Decision stop() { return {Kind::Stop, DiscreteAction::stop(), {}, {}, "stop", {}}; }
  static Decision abort(std::string reason) { return {Kind::Abort, {}, {}, {}, {}, std::move(reason)}; }
};

struct StepContext {
  const Episode& episode;
  const GridMap& map;
  const PoseState& pose;
  const Observation& observation;
  const RobotProfile& profile;
  ControllerKind controller;
  /// 1-based decision step.
  int step;
  double success_radius;
  /// Per-step seed for stochastic policies.
  std::uint64_t seed;
};

/// A navigation agent. One instance is driven by one episode at a time;
/// reset() is called before the first step of every episode.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual void reset(const Episode& episode, const GridMap& map, std::uint64_t seed) = 0;
  virtual Decision decide(const StepContext& ctx) = 0;
};

}  // namespace physnav
