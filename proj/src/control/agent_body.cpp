#include "physnav/control/agent_body.hpp"

#include <algorithm>
#include <cmath>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/embodiment/stability.hpp"

namespace physnav {

namespace {
constexpr int kPathObserveEveryTicks = 5;
}

AgentBody::AgentBody(const GridMap& map, RobotProfile profile, ControllerKind controller, Pose2 start,
                     std::uint64_t seed, ControlConfig config)
    : map_(&map),
      profile_(std::move(profile)),
      controller_(controller),
      config_(config),
      pose_(PoseState::at(start)),
      seed_(seed) {}

void AgentBody::require_standing() const {
  if (pose_.fallen) throw AlreadyFallen("robot has fallen");
}

bool AgentBody::tick(const VelocityCommand& cmd, MotionOutcome& outcome) {
  const SpeedStepResult r = speed_step(pose_, cmd, profile_, *map_, derive_seed(seed_, {ticks_++}));
  pose_ = r.pose;
  ++outcome.ticks;
  outcome.collided |= r.collided;
  if (r.collided) ++collision_ticks_;
  if (check_fall(pose_, profile_)) {
    pose_.fallen = true;
    outcome.fell = true;
    return false;
  }
  return true;
}

MotionOutcome AgentBody::run_commands(std::span<const VelocityCommand> cmds) {
  MotionOutcome outcome;
  for (const auto& cmd : cmds) {
    if (!tick(cmd, outcome)) break;
  }
  return outcome;
}

MotionOutcome AgentBody::execute(const DiscreteAction& action) {
  require_standing();
  if (action.kind == ActionKind::Stop) throw StopIsTerminal("stop ends the episode");

  if (controller_ == ControllerKind::Flash) {
    MotionOutcome outcome;
    Pose2 target = pose_.planar();
    if (action.kind == ActionKind::Forward) {
      target.x += action.magnitude * std::cos(pose_.heading);
      target.y += action.magnitude * std::sin(pose_.heading);
    } else {
      const double sign = action.kind == ActionKind::TurnLeft ? 1.0 : -1.0;
      target.heading += sign * deg_to_rad(action.magnitude);
    }
    try {
      pose_ = flash_step(pose_, target, *map_);
    } catch (const TargetInObstacle&) {
      outcome.blocked = true;
    }
    return outcome;
  }

  if (controller_ == ControllerKind::MoveAlongPath && action.kind == ActionKind::Forward) {
    const Vec2 target{pose_.x + action.magnitude * std::cos(pose_.heading),
                      pose_.y + action.magnitude * std::sin(pose_.heading)};
    return move_to(target);
  }
  const auto cmds = discrete_to_commands(action, limits(), config_.dt);
  return run_commands(cmds);
}

MotionOutcome AgentBody::rotate_by(double radians) {
  require_standing();
  radians = normalize_angle(radians);
  if (radians == 0.0) return {};
  if (controller_ == ControllerKind::Flash) {
    pose_.heading = normalize_angle(pose_.heading + radians);
    return {};
  }
  const double degrees = std::min(180.0, rad_to_deg(std::abs(radians)));
  const DiscreteAction turn = radians > 0.0 ? DiscreteAction::turn_left(degrees)
                                            : DiscreteAction::turn_right(degrees);
  const auto cmds = discrete_to_commands(turn, limits(), config_.dt);
  return run_commands(cmds);
}

MotionOutcome AgentBody::translate(double meters) {
  if (!(meters > 0.0)) return {};
  const auto cmds = discrete_to_commands(DiscreteAction::forward(meters), limits(), config_.dt);
  return run_commands(cmds);
}

MotionOutcome AgentBody::move_to(Vec2 target, const double* final_heading) {
  require_standing();
  const Vec2 delta = target - pose_.position();
  const double dist = norm(delta);
  const double bearing = dist > 0.0 ? std::atan2(delta.y, delta.x) : pose_.heading;

  MotionOutcome outcome;
  auto merge = [&outcome](const MotionOutcome& o) {
    outcome.collided |= o.collided;
    outcome.fell |= o.fell;
    outcome.blocked |= o.blocked;
    outcome.ticks += o.ticks;
  };

  switch (controller_) {
    case ControllerKind::Flash: {
      const double heading = final_heading ? *final_heading : bearing;
      try {
        pose_ = flash_step(pose_, {target.x, target.y, heading}, *map_);
      } catch (const TargetInObstacle&) {
        outcome.blocked = true;
      }
      return outcome;
    }
    case ControllerKind::MoveBySpeed: {
      if (dist > 0.0) {
        merge(rotate_by(bearing - pose_.heading));
        if (outcome.fell) return outcome;
        merge(translate(dist));
        if (outcome.fell) return outcome;
      }
      break;
    }
    case ControllerKind::MoveAlongPath: {
      const Vec2 path[1] = {target};
      PidState state;
      int budget = config_.max_ticks_per_motion;
      while (budget-- > 0) {
        const PidOutput step = pid_follow_step(pose_, path, config_.pid, config_.dt, state, limits(),
                                               config_.discrete_capture_radius);
        if (step.done) break;
        if (!tick(step.cmd, outcome)) return outcome;
      }
      if (budget < 0) outcome.blocked = true;
      break;
    }
  }
  if (final_heading) merge(rotate_by(*final_heading - pose_.heading));
  return outcome;
}

MotionOutcome AgentBody::move_relative(const Pose2& delta) {
  const double c = std::cos(pose_.heading);
  const double s = std::sin(pose_.heading);
  const Vec2 target{pose_.x + c * delta.x - s * delta.y, pose_.y + s * delta.x + c * delta.y};
  const double final_heading = normalize_angle(pose_.heading + delta.heading);
  if (delta.x == 0.0 && delta.y == 0.0) return rotate_by(delta.heading);
  return move_to(target, &final_heading);
}

MotionOutcome AgentBody::follow_path(std::span<const Vec2> path,
                                     const std::function<bool(const PoseState&)>& on_step) {
  require_standing();
  MotionOutcome outcome;
  if (path.empty()) return outcome;

  if (controller_ != ControllerKind::MoveAlongPath) {
    for (const Vec2& wp : path) {
      const MotionOutcome o = move_to(wp);
      outcome.collided |= o.collided;
      outcome.fell |= o.fell;
      outcome.blocked |= o.blocked;
      outcome.ticks += o.ticks;
      if (o.fell || o.blocked) return outcome;
      if (on_step && !on_step(pose_)) return outcome;
    }
    return outcome;
  }

  PidState state;
  int budget = config_.max_ticks_per_motion + 20 * static_cast<int>(path.size());
  int since_step = 0;
  while (true) {
    if (budget-- <= 0) {
      outcome.blocked = true;
      break;
    }
    const PidOutput step =
        pid_follow_step(pose_, path, config_.pid, config_.dt, state, limits(), config_.capture_radius);
    if (step.done) break;
    if (!tick(step.cmd, outcome)) return outcome;
    if (++since_step == kPathObserveEveryTicks) {
      since_step = 0;
      if (on_step && !on_step(pose_)) return outcome;
    }
  }
  if (on_step && since_step > 0) on_step(pose_);
  return outcome;
}

}  // namespace physnav
