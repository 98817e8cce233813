#include "physnav/control/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/embodiment/stability.hpp"

namespace physnav {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Stop: return "stop";
    case ActionKind::Forward: return "forward";
    case ActionKind::TurnLeft: return "turn_left";
    case ActionKind::TurnRight: return "turn_right";
  }
  return "unknown";
}

ActionKind parse_action_kind(std::string_view name) {
  if (name == "stop") return ActionKind::Stop;
  if (name == "forward") return ActionKind::Forward;
  if (name == "turn_left") return ActionKind::TurnLeft;
  if (name == "turn_right") return ActionKind::TurnRight;
  throw ParseError("unknown action: " + std::string(name));
}

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Flash: return "flash";
    case ControllerKind::MoveBySpeed: return "move_by_speed";
    case ControllerKind::MoveAlongPath: return "move_along_path";
  }
  return "unknown";
}

ControllerKind parse_controller_kind(std::string_view name) {
  if (name == "flash") return ControllerKind::Flash;
  if (name == "move_by_speed" || name == "speed") return ControllerKind::MoveBySpeed;
  if (name == "move_along_path" || name == "path") return ControllerKind::MoveAlongPath;
  throw ParseError("unknown controller: " + std::string(name));
}

PoseState flash_step(const PoseState& pose, const Pose2& target, const GridMap& map) {
  const Vec2 p = target.position();
  if (!map.in_bounds(p) || map.is_obstacle(map.cell_of(p))) {
    throw TargetInObstacle("flash target is not on a traversable cell");
  }
  PoseState out = pose;
  out.x = target.x;
  out.y = target.y;
  out.heading = normalize_angle(target.heading);
  return out;
}

PoseState diff_drive_step(const PoseState& pose, double v, double omega, double dt) {
  // Chord of the arc: length v dt sinc(omega dt / 2) along the mean heading.
  // Stays exact as omega goes to zero, unlike the v / omega radius form.
  const double half = 0.5 * omega * dt;
  const double sinc = std::abs(half) < 1e-6 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  const double chord = v * dt * sinc;
  PoseState out = pose;
  out.x += chord * std::cos(pose.heading + half);
  out.y += chord * std::sin(pose.heading + half);
  out.heading = normalize_angle(pose.heading + omega * dt);
  return out;
}

PoseState diff_drive_step(const PoseState& pose, const VelocityCommand& cmd, double dt) {
  return diff_drive_step(pose, cmd.v, cmd.omega, dt);
}

double obstacle_clearance(const GridMap& map, Vec2 p, double horizon) {
  const double s = map.cell_size();
  const Cell center = map.cell_of(p);
  const int reach = static_cast<int>(std::ceil(horizon / s)) + 1;
  double best = horizon;
  for (int r = center.row - reach; r <= center.row + reach; ++r) {
    for (int c = center.col - reach; c <= center.col + reach; ++c) {
      const Cell cell{c, r};
      if (map.in_bounds(cell) && !map.is_obstacle(cell)) continue;
      const double dx = std::max({c * s - p.x, 0.0, p.x - (c + 1) * s});
      const double dy = std::max({r * s - p.y, 0.0, p.y - (r + 1) * s});
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

MotionResult move_with_collisions(const GridMap& map, const PoseState& pose, double v,
                                  double omega, double dt, double footprint_radius) {
  const double start_clearance =
      footprint_radius > 0.0 ? obstacle_clearance(map, pose.position(), footprint_radius) : 0.0;
  auto valid = [&](const PoseState& p) {
    const Vec2 pos = p.position();
    if (!map.in_bounds(pos) || map.is_obstacle(map.cell_of(pos))) return false;
    if (footprint_radius <= 0.0) return true;
    const double clearance = obstacle_clearance(map, pos, footprint_radius);
    return clearance >= footprint_radius || clearance >= start_clearance;
  };
  auto at = [&](double fraction) { return diff_drive_step(pose, v, omega, fraction * dt); };

  const double travel = std::abs(v) * dt;
  const int substeps = std::max(1, static_cast<int>(std::ceil(travel / (0.25 * map.cell_size()))));
  double last_valid = 0.0;
  for (int i = 1; i <= substeps; ++i) {
    const double f = static_cast<double>(i) / substeps;
    if (valid(at(f))) {
      last_valid = f;
      continue;
    }
    double lo = last_valid;
    double hi = f;
    for (int iter = 0; iter < 40; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (valid(at(mid))) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return {lo == 0.0 ? pose : at(lo), true};
  }
  return {at(1.0), false};
}

SpeedStepResult speed_step(const PoseState& pose, const VelocityCommand& cmd,
                           const RobotProfile& profile, const GridMap& map, std::uint64_t rng_seed) {
  if (pose.fallen) throw AlreadyFallen("speed command on a fallen robot");
  double v = cmd.v;
  if (profile.speed_tracking_error > 0.0) {
    Rng rng(derive_seed(rng_seed, {0}));
    v *= 1.0 + rng.uniform(-profile.speed_tracking_error, profile.speed_tracking_error);
  }
  const MotionResult motion =
      move_with_collisions(map, pose, v, cmd.omega, cmd.duration, profile.footprint_radius);
  const bool on_hole = map.kind(map.cell_of(motion.pose.position())) == CellKind::Hole;
  SpeedStepResult out;
  const bool impact = motion.collided && !pose.in_contact;
  out.pose = apply_disturbance(motion.pose, profile, std::abs(cmd.v), impact, on_hole, rng_seed);
  out.pose.in_contact = motion.collided;
  out.collided = motion.collided;
  out.on_hole = on_hole;
  return out;
}

SpeedStepResult legged_speed_step(const PoseState& pose, const VelocityCommand& cmd,
                                  const RobotProfile& profile, const GridMap& map,
                                  std::uint64_t rng_seed) {
  if (!profile.is_legged()) throw ValidationError("legged_speed_step needs a humanoid or quadruped profile");
  return speed_step(pose, cmd, profile, map, rng_seed);
}

std::vector<VelocityCommand> discrete_to_commands(const DiscreteAction& action,
                                                  const SpeedLimits& limits, double dt) {
  double total = 0.0;
  double rate = 0.0;
  bool angular = false;
  switch (action.kind) {
    case ActionKind::Stop:
      throw StopIsTerminal("stop has no motion commands");
    case ActionKind::Forward:
      if (!(action.magnitude > 0.0)) throw ValidationError("forward distance must be > 0");
      total = action.magnitude;
      rate = limits.v_max;
      break;
    case ActionKind::TurnLeft:
    case ActionKind::TurnRight:
      if (!(action.magnitude > 0.0 && action.magnitude <= 180.0)) {
        throw ValidationError("turn angle must be in (0, 180] degrees");
      }
      total = deg_to_rad(action.magnitude);
      rate = limits.omega_max;
      angular = true;
      break;
  }
  const double sign = action.kind == ActionKind::TurnRight ? -1.0 : 1.0;
  const double duration = total / rate;
  const int full = static_cast<int>(std::floor(duration / dt));

  std::vector<VelocityCommand> cmds;
  auto emit = [&](double d) {
    VelocityCommand c;
    c.duration = d;
    (angular ? c.omega : c.v) = sign * rate;
    cmds.push_back(c);
  };
  for (int i = 0; i < full; ++i) emit(dt);
  const double rest = duration - full * dt;
  if (rest > 1e-12) emit(rest);
  return cmds;
}

PidOutput pid_follow_step(const PoseState& pose, std::span<const Vec2> path, const PidGains& gains,
                          double dt, PidState& state, const SpeedLimits& limits,
                          double capture_radius) {
  if (path.empty()) throw EmptyPath("pid_follow_step needs at least one waypoint");
  const std::size_t last = path.size() - 1;
  std::size_t idx = std::min(state.waypoint, last);
  while (idx < last && distance(pose.position(), path[idx]) <= capture_radius) ++idx;
  if (idx != state.waypoint) {
    state.integral = 0.0;
    state.has_previous = false;
  }
  state.waypoint = idx;

  PidOutput out;
  out.waypoint_index = idx;
  out.cmd.duration = dt;
  const Vec2 delta = path[idx] - pose.position();
  const double dist = norm(delta);
  if (idx == last && dist <= capture_radius) {
    out.done = true;
    state.integral = 0.0;
    state.has_previous = false;
    return out;
  }

  const double error = normalize_angle(std::atan2(delta.y, delta.x) - pose.heading);
  state.integral += error * dt;
  const double derivative = state.has_previous ? (error - state.previous_error) / dt : 0.0;
  state.previous_error = error;
  state.has_previous = true;

  const double omega = gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
  out.cmd.omega = std::clamp(omega, -limits.omega_max, limits.omega_max);
  double v = limits.v_max * std::max(0.0, std::cos(error));
  if (idx == last) v = std::min(v, dist / dt);
  out.cmd.v = std::clamp(v, 0.0, limits.v_max);
  return out;
}

}  // namespace physnav
