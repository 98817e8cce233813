#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "physnav/control/commands.hpp"
#include "physnav/control/kinematics.hpp"
#include "physnav/embodiment/pose_state.hpp"
#include "physnav/embodiment/robot_profile.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav {

struct MotionOutcome {
  bool collided = false;
  bool fell = false;
  /// Flash target rejected or the follower ran out of ticks.
  bool blocked = false;
  int ticks = 0;
};

/// A robot in a world driven through one controller family. Owns the pose
/// and a tick counter that seeds every stochastic update, so a body started
/// from the same seed replays identically. Once fallen, every motion call
/// throws AlreadyFallen.
class AgentBody {
 public:
  AgentBody(const GridMap& map, RobotProfile profile, ControllerKind controller, Pose2 start,
            std::uint64_t seed, ControlConfig config = {});

  const PoseState& pose() const { return pose_; }
  const RobotProfile& profile() const { return profile_; }
  ControllerKind controller() const { return controller_; }
  const ControlConfig& config() const { return config_; }
  const GridMap& map() const { return *map_; }
  SpeedLimits limits() const { return {profile_.max_linear_speed, profile_.max_angular_speed}; }
  bool fallen() const { return pose_.fallen; }
  /// Control ticks so far that ended in contact.
  std::uint64_t collision_ticks() const { return collision_ticks_; }

  /// Executes Forward / TurnLeft / TurnRight. Throws StopIsTerminal.
  MotionOutcome execute(const DiscreteAction& action);

  /// In-place rotation by a signed angle.
  MotionOutcome rotate_by(double radians);

  /// Goes to a point: teleport under flash, rotate-then-translate under
  /// move-by-speed, PID follow under move-along-path. If `final_heading`
  /// is given the body turns to it afterwards.
  MotionOutcome move_to(Vec2 target, const double* final_heading = nullptr);

  /// Moves by a body-frame offset (dx forward, dy left) and then turns by
  /// delta.heading. Rotate-then-translate under the physical controllers.
  MotionOutcome move_relative(const Pose2& delta);

  /// Follows a polyline. `on_step` runs after each waypoint (flash,
  /// move-by-speed) or every few ticks (move-along-path); returning false
  /// aborts the motion.
  MotionOutcome follow_path(std::span<const Vec2> path,
                            const std::function<bool(const PoseState&)>& on_step = {});

  /// Advances pose.step_index; runners call it once per decision step.
  void advance_step() { ++pose_.step_index; }

 private:
  MotionOutcome run_commands(std::span<const VelocityCommand> cmds);
  bool tick(const VelocityCommand& cmd, MotionOutcome& outcome);
  MotionOutcome translate(double meters);
  void require_standing() const;

  const GridMap* map_;
  RobotProfile profile_;
  ControllerKind controller_;
  ControlConfig config_;
  PoseState pose_;
  std::uint64_t seed_;
  std::uint64_t ticks_ = 0;
  std::uint64_t collision_ticks_ = 0;
};

}  // namespace physnav
