#pragma once

#include <string_view>

namespace physnav {

struct VelocityCommand {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
  double duration = 0.0;

  friend bool operator==(const VelocityCommand&, const VelocityCommand&) = default;
};

enum class ActionKind { Stop, Forward, TurnLeft, TurnRight };

std::string_view to_string(ActionKind kind);
ActionKind parse_action_kind(std::string_view name);

/// Discrete action; magnitude in meters for Forward, degrees for turns.
struct DiscreteAction {
  ActionKind kind = ActionKind::Stop;
  double magnitude = 0.0;

  static DiscreteAction stop() { return {ActionKind::Stop, 0.0}; }
  static DiscreteAction forward(double meters = 0.25) { return {ActionKind::Forward, meters}; }
  static DiscreteAction turn_left(double degrees = 15.0) { return {ActionKind::TurnLeft, degrees}; }
  static DiscreteAction turn_right(double degrees = 15.0) { return {ActionKind::TurnRight, degrees}; }

  friend bool operator==(const DiscreteAction&, const DiscreteAction&) = default;
};

struct PidGains {
  double kp = 2.0;
  double ki = 0.0;
  double kd = 0.1;
};

struct SpeedLimits {
  double v_max = 1.0;
  double omega_max = 1.5707963267948966;
};

enum class ControllerKind { Flash, MoveBySpeed, MoveAlongPath };

std::string_view to_string(ControllerKind kind);
/// Accepts "flash", "move_by_speed", "move_along_path". Throws ParseError.
ControllerKind parse_controller_kind(std::string_view name);

struct ControlConfig {
  double dt = 0.1;
  double capture_radius = 0.2;
  /// Capture radius used when a single discrete Forward is executed by the
  /// path follower; the default radius would swallow most of a 0.25 m step.
  double discrete_capture_radius = 0.02;
  int max_ticks_per_motion = 200;
  PidGains pid;
};

}  // namespace physnav
