#include "physnav/policy/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "physnav/core/errors.hpp"
#include "physnav/control/kinematics.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/plan/search.hpp"

namespace physnav {

namespace {

std::vector<Vec2> plan_path(const CostGrid& costs, const GridMap& map, Vec2 from, Vec2 goal) {
  if (!map.in_bounds(from) || !map.in_bounds(goal)) throw NoPath("agent or goal is off the map");
  const auto cells = astar(costs, map.cell_of(from), map.cell_of(goal));
  auto points = to_points(map, cells);
  points.back() = goal;
  return points;
}

DiscreteAction turn_toward(const PoseState& pose, Vec2 target, double threshold_deg) {
  const Vec2 d = target - pose.position();
  if (norm(d) == 0.0) return DiscreteAction::forward();
  const double error = normalize_angle(std::atan2(d.y, d.x) - pose.heading);
  if (std::abs(error) > deg_to_rad(threshold_deg)) {
    return error > 0.0 ? DiscreteAction::turn_left() : DiscreteAction::turn_right();
  }
  return DiscreteAction::forward();
}

// With a footprint, also applies the contact rule of the physical
// controllers: the step may not end closer to an obstacle than the
// footprint radius unless it was already that close.
bool step_blocked(const PoseState& pose, double heading, const GridMap& map, double step, double footprint) {
  const Vec2 dir{std::cos(heading), std::sin(heading)};
  const Vec2 end = pose.position() + step * dir;
  if (!map.in_bounds(end) || map.is_obstacle(map.cell_of(end))) return true;
  if (footprint <= 0.0) return false;
  const double start = obstacle_clearance(map, pose.position(), footprint);
  const int samples = std::max(1, static_cast<int>(std::ceil(step / (0.25 * map.cell_size()))));
  for (int i = 1; i <= samples; ++i) {
    const double clearance = obstacle_clearance(map, pose.position() + (step * i / samples) * dir, footprint);
    if (clearance < footprint && clearance < start) return true;
  }
  return false;
}

bool forward_blocked(const PoseState& pose, const GridMap& map, double step, double footprint) {
  return step_blocked(pose, pose.heading, map, step, footprint);
}

DiscreteAction steer(const PoseState& pose, const std::vector<Vec2>& path, const OracleConfig& cfg) {
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = distance(pose.position(), path[i]);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  Vec2 target = path.back();
  for (std::size_t i = nearest; i < path.size(); ++i) {
    if (distance(pose.position(), path[i]) >= cfg.lookahead) {
      target = path[i];
      break;
    }
  }
  return turn_toward(pose, target, cfg.turn_threshold_deg);
}

// Among the headings reachable by whole turns, the one whose forward step
// lands lowest on the goal distance field; turns toward it, or moves when
// already facing it.
DiscreteAction descend_field(const PoseState& pose, const GridMap& map, const std::vector<double>& field,
                             double footprint) {
  const DiscreteAction fwd = DiscreteAction::forward();
  const double turn = DiscreteAction::turn_left().magnitude;
  const int n = static_cast<int>(std::lround(360.0 / turn));
  int best_k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    // 0, +1, -1, +2, -2 ... so the smallest turn wins ties.
    const int k = (i % 2 == 1) ? (i + 1) / 2 : -(i / 2);
    const double h = pose.heading + deg_to_rad(k * turn);
    if (step_blocked(pose, h, map, fwd.magnitude, footprint)) continue;
    const Vec2 p{pose.x + fwd.magnitude * std::cos(h), pose.y + fwd.magnitude * std::sin(h)};
    const double v = field[map.index(map.cell_of(p))];
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  if (best_k == 0) return fwd;
  return best_k > 0 ? DiscreteAction::turn_left() : DiscreteAction::turn_right();
}

double path_deviation(Vec2 p, const std::vector<Vec2>& path) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    best = std::min(best, distance(p, path[i]));
    if (i + 1 < path.size()) {
      const Vec2 a = path[i];
      const Vec2 ab = path[i + 1] - a;
      const double len2 = ab.x * ab.x + ab.y * ab.y;
      if (len2 > 0.0) {
        const double t = std::clamp(((p - a).x * ab.x + (p - a).y * ab.y) / len2, 0.0, 1.0);
        best = std::min(best, distance(p, a + t * ab));
      }
    }
  }
  return best;
}

}  // namespace

DiscreteAction random_policy_step(std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  if (rng.uniform() < kRandomStopProbability) return DiscreteAction::stop();
  switch (rng.index(3)) {
    case 0: return DiscreteAction::forward();
    case 1: return DiscreteAction::turn_left();
    default: return DiscreteAction::turn_right();
  }
}

Decision RandomPolicy::decide(const StepContext& ctx) {
  const DiscreteAction a = random_policy_step(ctx.seed);
  return a.kind == ActionKind::Stop ? Decision::stop() : Decision::act(a);
}

DiscreteAction oracle_policy_step(const Episode& episode, const PoseState& pose, const GridMap& map,
                                  double success_radius, const OracleConfig& cfg) {
  double remaining = 0.0;
  try {
    remaining = geodesic_distance(map, pose.position(), episode.goal);
  } catch (const Unreachable&) {
    throw NoPath("goal is not reachable from the agent");
  }
  if (remaining <= success_radius) return DiscreteAction::stop();
  const CostGrid costs = dilate(map, cfg.dilation_radius);
  const DiscreteAction a = steer(pose, plan_path(costs, map, pose.position(), episode.goal), cfg);
  if (a.kind != ActionKind::Forward || !forward_blocked(pose, map, a.magnitude, 0.0)) return a;
  return descend_field(pose, map, geodesic_field(map, map.cell_of(episode.goal)), 0.0);
}

void OraclePolicy::reset(const Episode& episode, const GridMap& map, std::uint64_t) {
  costs_.reset();
  if (!map.in_bounds(episode.goal)) throw NoPath("goal is off the map");
  goal_field_ = geodesic_field(map, map.cell_of(episode.goal));
  path_.clear();
  recovering_ = false;
}

Decision OraclePolicy::decide(const StepContext& ctx) {
  const Vec2 p = ctx.pose.position();
  const double remaining = goal_field_[ctx.map.index(ctx.map.cell_of(p))];
  if (std::isinf(remaining)) return Decision::abort("goal is not reachable from the agent");
  if (remaining <= ctx.success_radius) return Decision::stop();
  const double footprint = ctx.controller == ControllerKind::Flash ? 0.0 : ctx.profile.footprint_radius;
  if (!costs_) {
    // Keep the planned path a cell clear of the footprint.
    costs_ = dilate(ctx.map, std::max(cfg_.dilation_radius, footprint + ctx.map.cell_size()));
  }
  if (path_.empty() || path_deviation(p, path_) > cfg_.replan_deviation) {
    path_ = plan_path(*costs_, ctx.map, p, ctx.episode.goal);
  }
  const DiscreteAction a = steer(ctx.pose, path_, cfg_);
  if (!recovering_ && (a.kind != ActionKind::Forward || !forward_blocked(ctx.pose, ctx.map, a.magnitude, footprint))) {
    return Decision::act(a);
  }
  const DiscreteAction d = descend_field(ctx.pose, ctx.map, goal_field_, footprint);
  recovering_ = d.kind != ActionKind::Forward;
  if (!recovering_) path_.clear();
  return Decision::act(d);
}

}  // namespace physnav
