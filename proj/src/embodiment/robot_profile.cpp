#include "physnav/embodiment/robot_profile.hpp"

#include <cmath>

#include "physnav/core/errors.hpp"
#include "physnav/core/text.hpp"

namespace physnav {

namespace {

double parse_value(const std::string& key, const std::string& value) {
  double out = 0.0;
  if (!parse_double(value, out)) {
    throw ValidationError("profile key " + key + ": not a number: " + value);
  }
  return out;
}

}  // namespace

std::string_view to_string(RobotKind kind) {
  switch (kind) {
    case RobotKind::Humanoid: return "humanoid";
    case RobotKind::Quadruped: return "quadruped";
    case RobotKind::Wheeled: return "wheeled";
    case RobotKind::Flash: return "flash";
  }
  return "unknown";
}

RobotKind parse_robot_kind(std::string_view name) {
  if (name == "humanoid") return RobotKind::Humanoid;
  if (name == "quadruped") return RobotKind::Quadruped;
  if (name == "wheeled") return RobotKind::Wheeled;
  if (name == "flash") return RobotKind::Flash;
  throw ParseError("unknown robot profile: " + std::string(name));
}

RobotProfile default_profile(RobotKind kind) {
  RobotProfile p;
  p.kind = kind;
  switch (kind) {
    case RobotKind::Humanoid:
      p.camera_height = 1.8;
      p.footprint_radius = 0.25;
      p.disturbance_sigma = 0.01;
      p.collision_impulse = 0.12;
      p.hole_impulse = 0.15;
      p.speed_tracking_error = 0.15;
      break;
    case RobotKind::Quadruped:
      p.camera_height = 0.5;
      p.footprint_radius = 0.3;
      p.disturbance_sigma = 0.008;
      p.collision_impulse = 0.1;
      p.hole_impulse = 0.2;
      p.speed_tracking_error = 0.1;
      break;
    case RobotKind::Wheeled:
      // Jetbot-class platform; wheels roll over floor holes.
      p.camera_height = 0.3;
      p.footprint_radius = 0.15;
      p.disturbance_sigma = 0.002;
      p.collision_impulse = 0.02;
      break;
    case RobotKind::Flash:
      p.camera_height = 1.2;
      p.footprint_radius = 0.2;
      break;
  }
  return p;
}

void validate(const RobotProfile& p) {
  if (!(p.camera_height > 0.0)) throw ValidationError("camera_height must be > 0");
  if (!(p.footprint_radius >= 0.0)) throw ValidationError("footprint_radius must be >= 0");
  if (!(p.disturbance_sigma >= 0.0) || !(p.collision_impulse >= 0.0) || !(p.hole_impulse >= 0.0)) {
    throw ValidationError("disturbance magnitudes must be >= 0");
  }
  if (!(p.speed_tracking_error >= 0.0 && p.speed_tracking_error < 1.0)) {
    throw ValidationError("speed_tracking_error must be in [0, 1)");
  }
  if (!(p.fall_roll_deg > 0.0) || !(p.fall_pitch_deg > 0.0)) {
    throw ValidationError("fall thresholds must be > 0");
  }
  if (!(p.max_linear_speed > 0.0) || !(p.max_angular_speed > 0.0)) {
    throw ValidationError("speed limits must be > 0");
  }
  if (p.kind == RobotKind::Flash &&
      (p.disturbance_sigma != 0.0 || p.collision_impulse != 0.0 || p.hole_impulse != 0.0 ||
       p.speed_tracking_error != 0.0)) {
    throw ValidationError("flash profile must have zero disturbance");
  }
}

std::map<std::string, std::string> to_key_values(const RobotProfile& p) {
  return {
      {"kind", std::string(to_string(p.kind))},
      {"camera_height", format_double(p.camera_height)},
      {"footprint_radius", format_double(p.footprint_radius)},
      {"disturbance_sigma", format_double(p.disturbance_sigma)},
      {"collision_impulse", format_double(p.collision_impulse)},
      {"hole_impulse", format_double(p.hole_impulse)},
      {"speed_tracking_error", format_double(p.speed_tracking_error)},
      {"fall_roll_deg", format_double(p.fall_roll_deg)},
      {"fall_pitch_deg", format_double(p.fall_pitch_deg)},
      {"max_linear_speed", format_double(p.max_linear_speed)},
      {"max_angular_speed", format_double(p.max_angular_speed)},
  };
}

RobotProfile apply_overrides(RobotProfile p, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "kind") {
      p.kind = parse_robot_kind(value);
    } else if (key == "camera_height") {
      p.camera_height = parse_value(key, value);
    } else if (key == "footprint_radius") {
      p.footprint_radius = parse_value(key, value);
    } else if (key == "disturbance_sigma") {
      p.disturbance_sigma = parse_value(key, value);
    } else if (key == "collision_impulse") {
      p.collision_impulse = parse_value(key, value);
    } else if (key == "hole_impulse") {
      p.hole_impulse = parse_value(key, value);
    } else if (key == "speed_tracking_error") {
      p.speed_tracking_error = parse_value(key, value);
    } else if (key == "fall_roll_deg") {
      p.fall_roll_deg = parse_value(key, value);
    } else if (key == "fall_pitch_deg") {
      p.fall_pitch_deg = parse_value(key, value);
    } else if (key == "max_linear_speed") {
      p.max_linear_speed = parse_value(key, value);
    } else if (key == "max_angular_speed") {
      p.max_angular_speed = parse_value(key, value);
    } else {
      throw ValidationError("unknown profile key: " + key);
    }
  }
  validate(p);
  return p;
}

}  // namespace physnav
