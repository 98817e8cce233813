#pragma once

#include <map>
#include <string>
#include <string_view>

namespace physnav {

enum class RobotKind { Humanoid, Quadruped, Wheeled, Flash };

std::string_view to_string(RobotKind kind);
/// Accepts "humanoid", "quadruped", "wheeled", "flash". Throws ParseError.
RobotKind parse_robot_kind(std::string_view name);

/// Per-embodiment parameters. Angles in radians unless the name says _deg.
struct RobotProfile {
  RobotKind kind = RobotKind::Flash;
  double camera_height = 1.2;
  double footprint_radius = 0.2;
  /// Scale of the AR(1) attitude noise (rad).
  double disturbance_sigma = 0.0;
  /// Attitude kick per collision tick (rad).
  double collision_impulse = 0.0;
  /// Attitude kick per tick spent on a Hole cell (rad).
  double hole_impulse = 0.0;
  /// Relative speed-tracking error bound, in [0, 1).
  double speed_tracking_error = 0.0;
  double fall_roll_deg = 15.0;
  double fall_pitch_deg = 35.0;
  double max_linear_speed = 1.0;
  double max_angular_speed = 1.5707963267948966;

  bool is_legged() const { return kind == RobotKind::Humanoid || kind == RobotKind::Quadruped; }
};

/// Built-in profiles. Camera heights: humanoid 1.8 m, quadruped 0.5 m,
/// wheeled 0.3 m, flash 1.2 m. The flash agent has no disturbance at all.
RobotProfile default_profile(RobotKind kind);

/// Checks the profile invariants; throws ValidationError.
void validate(const RobotProfile& profile);

/// Key-value form ("camera_height" -> "1.8", ...). Unknown keys in
/// apply_overrides throw ValidationError.
std::map<std::string, std::string> to_key_values(const RobotProfile& profile);
RobotProfile apply_overrides(RobotProfile profile, const std::map<std::string, std::string>& kv);

}  // namespace physnav
