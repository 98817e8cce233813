#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "physnav/control/commands.hpp"
#include "physnav/embodiment/pose_state.hpp"
#include "physnav/embodiment/robot_profile.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav {

/// Teleports to the target. Only the target cell is checked; the segment in
/// between is ignored. Throws TargetInObstacle (also for targets off-map).
PoseState flash_step(const PoseState& pose, const Pose2& target, const GridMap& map);

/// Exact unicycle integration over dt (straight line when omega == 0,
/// circular arc of radius v/omega otherwise). Attitude is untouched.
PoseState diff_drive_step(const PoseState& pose, double v, double omega, double dt);
PoseState diff_drive_step(const PoseState& pose, const VelocityCommand& cmd, double dt);

/// Distance from p to the nearest obstacle cell, saturating at `horizon`.
double obstacle_clearance(const GridMap& map, Vec2 p, double horizon);

struct MotionResult {
  PoseState pose;
  bool collided = false;
};

/// Integrates the command for dt with a circular footprint. Motion stops at
/// first contact (the footprint may not get closer to an obstacle than
/// footprint_radius, or than it already was). The footprint center never
/// enters an obstacle cell.
MotionResult move_with_collisions(const GridMap& map, const PoseState& pose, double v,
                                  double omega, double dt, double footprint_radius);

struct SpeedStepResult {
  PoseState pose;
  bool collided = false;
  bool on_hole = false;
};

/// Physical speed tick for any embodiment: speed tracking error
/// v_eff = v (1 + U(-e, e)), collision-clipped unicycle motion, then one
/// attitude disturbance update. The collision impulse applies on the first
/// tick of a contact, not while the footprint stays pressed against an
/// obstacle. Throws AlreadyFallen.
SpeedStepResult speed_step(const PoseState& pose, const VelocityCommand& cmd,
                           const RobotProfile& profile, const GridMap& map, std::uint64_t rng_seed);

/// speed_step restricted to legged embodiments; throws ValidationError for
/// wheeled or flash profiles.
SpeedStepResult legged_speed_step(const PoseState& pose, const VelocityCommand& cmd,
                                  const RobotProfile& profile, const GridMap& map,
                                  std::uint64_t rng_seed);

/// Splits a discrete action into constant-rate commands at the speed
/// limits: full dt ticks followed by one shortened tick. Throws
/// StopIsTerminal for Stop and ValidationError for invalid magnitudes.
std::vector<VelocityCommand> discrete_to_commands(const DiscreteAction& action,
                                                  const SpeedLimits& limits, double dt);

struct PidState {
  std::size_t waypoint = 0;
  double integral = 0.0;
  double previous_error = 0.0;
  bool has_previous = false;
};

struct PidOutput {
  VelocityCommand cmd;
  std::size_t waypoint_index = 0;
  bool done = false;
};

/// One tick of the heading PID path follower. Waypoints within the capture
/// radius are consumed; inside the capture radius of the final waypoint the
/// command is zero and `done` is set. Throws EmptyPath.
PidOutput pid_follow_step(const PoseState& pose, std::span<const Vec2> path, const PidGains& gains,
                          double dt, PidState& state, const SpeedLimits& limits,
                          double capture_radius = 0.2);

}  // namespace physnav
