#include "physnav/semnav/navigator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "physnav/core/errors.hpp"
#include "physnav/plan/frontier.hpp"
#include "physnav/plan/search.hpp"

namespace physnav {

namespace {

constexpr int kMaxResolvePasses = 16;

std::vector<Vec2> simplify(const std::vector<Vec2>& points) {
  std::vector<Vec2> out;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (i + 1 < points.size()) {
      const Vec2 a = points[i] - points[i - 1];
      const Vec2 b = points[i + 1] - points[i];
      if (std::abs(a.x * b.y - a.y * b.x) < 1e-12 && a.x * b.x + a.y * b.y > 0.0) continue;
    }
    out.push_back(points[i]);
  }
  return out;
}

}  // namespace

std::string classify_room(const std::vector<std::string>& visible_labels, const std::vector<std::string>& rooms,
                          const AffinityTable& table) {
  if (rooms.empty()) throw ValidationError("classify_room needs at least one room");
  const std::set<std::string> distinct(visible_labels.begin(), visible_labels.end());
  if (distinct.empty()) return std::string(kOtherRoom);

  const std::string* best = nullptr;
  double best_score = -1.0;
  for (const std::string& room : rooms) {
    if (room == kOtherRoom) continue;
    double sum = 0.0;
    for (const std::string& label : distinct) sum += table.affinity(label, room);
    const double mean = sum / static_cast<double>(distinct.size());
    if (mean > best_score) {
      best_score = mean;
      best = &room;
    }
  }
  if (!best || best_score < kRoomFallbackThreshold) return std::string(kOtherRoom);
  return *best;
}

std::string classify_room(const Observation& obs, const GridMap& map, const std::vector<std::string>& rooms,
                          const AffinityTable& table) {
  std::vector<std::string> names;
  for (const VisibleLabel& v : obs.visible_labels) names.push_back(map.label_names().at(v.label));
  return classify_room(names, rooms, table);
}

double frontier_score(const SemanticMap& smap, Cell frontier, std::string_view target, const AffinityTable& table,
                      double peek_radius) {
  const Vec2 origin = smap.center(frontier);
  const int reach = static_cast<int>(std::ceil(peek_radius / smap.cell_size()));
  std::vector<bool> seen(smap.label_count() + 1, false);
  for (int r = frontier.row - reach; r <= frontier.row + reach; ++r) {
    for (int c = frontier.col - reach; c <= frontier.col + reach; ++c) {
      const Cell cell{c, r};
      if (!smap.in_bounds(cell) || distance(smap.center(cell), origin) > peek_radius) continue;
      for (LabelId l = 1; l <= smap.label_count(); ++l) {
        if (smap.score(cell, l) > 0.0) seen[l] = true;
      }
    }
  }
  double sum = 0.0;
  int count = 0;
  for (LabelId l = 1; l <= smap.label_count(); ++l) {
    if (!seen[l]) continue;
    sum += table.affinity(smap.label_names()[l], target);
    ++count;
  }
  return count == 0 ? 0.0 : sum / count;
}

Cell explore_step(const SemanticMap& smap, const GridMap& world, const PoseState& pose,
                  std::string_view next_landmark, const AffinityTable& table, std::span<const Cell> visited,
                  double peek_radius) {
  const Cell here = world.cell_of(pose.position());
  if (!world.in_bounds(here)) throw OutOfBounds("pose is off the map");
  const std::vector<double> field = geodesic_field(world, here);

  std::optional<Cell> best;
  double best_score = -1.0;
  double best_dist = 0.0;
  for (const Cell& f : detect_frontiers(smap.explored_mask(), world)) {
    const double d = field[world.index(f)];
    if (!std::isfinite(d)) continue;
    if (std::find(visited.begin(), visited.end(), f) != visited.end()) continue;
    const double score = frontier_score(smap, f, next_landmark, table, peek_radius);
    if (!best || score > best_score || (score == best_score && d < best_dist)) {
      best = f;
      best_score = score;
      best_dist = d;
    }
  }
  if (!best) throw NoFrontiers("no reachable frontiers left while searching for " + std::string(next_landmark));
  return *best;
}

VlmapsPolicy::VlmapsPolicy(AffinityTable table, VlmapsConfig config)
    : table_(std::move(table)), config_(config) {}

void VlmapsPolicy::reset(const Episode& episode, const GridMap& map, std::uint64_t) {
  if (!episode.subgoals) throw ValidationError("episode " + episode.episode_id + " carries no subgoal program");
  validate_program(*episode.subgoals);
  world_ = &map;
  program_ = *episode.subgoals;
  smap_.emplace(map);
  base_costs_ = dilate(map, config_.dilation_radius, config_.costs);
  records_.clear();
  visited_.clear();
  pc_ = 0;
  scan_remaining_ = 0;
  scanned_ = false;
  target_.reset();
  attempts_ = 0;
  frontier_.reset();
  frontier_attempts_ = 0;
}

Decision VlmapsPolicy::scan() {
  --scan_remaining_;
  Decision d = Decision::act(DiscreteAction::turn_left(config_.scan_turn_degrees));
  d.label = "scan";
  return d;
}

std::string VlmapsPolicy::search_label(const Subgoal& subgoal) const {
  if (subgoal.kind == SubgoalKind::MoveInBetween) {
    if (!index_landmark(*smap_, subgoal.first, config_.detection_threshold)) return subgoal.first;
    return subgoal.second;
  }
  return subgoal.first;
}

Vec2 VlmapsPolicy::reachable_point(Vec2 p, const PoseState& pose) const {
  const Cell c = world_->cell_of(p);
  const std::vector<double> field = geodesic_field(*world_, world_->cell_of(pose.position()));
  if (world_->in_bounds(c) && std::isfinite(field[world_->index(c)])) return p;
  std::optional<Cell> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!std::isfinite(field[i])) continue;
    const double d = distance(world_->center(world_->cell_at(i)), p);
    if (d < best_d) {
      best_d = d;
      best = world_->cell_at(i);
    }
  }
  if (!best) throw NoPath("no reachable cell near the target");
  return world_->center(*best);
}

std::optional<Vec2> VlmapsPolicy::resolve_target(const Subgoal& subgoal, const PoseState& pose) {
  const double thr = config_.detection_threshold;
  switch (subgoal.kind) {
    case SubgoalKind::MoveToObject: {
      const auto cell = index_landmark(*smap_, subgoal.first, thr);
      if (!cell) return std::nullopt;
      return reachable_point(smap_->center(*cell), pose);
    }
    case SubgoalKind::MoveInBetween: {
      const auto a = index_landmark(*smap_, subgoal.first, thr);
      const auto b = index_landmark(*smap_, subgoal.second, thr);
      if (!a || !b) return std::nullopt;
      return reachable_point(0.5 * (smap_->center(*a) + smap_->center(*b)), pose);
    }
    case SubgoalKind::MoveToRoom: {
      std::optional<LabelId> best;
      double best_affinity = kRoomFallbackThreshold;
      for (LabelId l : smap_->detected_labels(thr)) {
        const double a = table_.affinity(smap_->label_names()[l], subgoal.first);
        if (a >= best_affinity && (!best || a > best_affinity)) {
          best = l;
          best_affinity = a;
        }
      }
      if (!best) return std::nullopt;
      const auto cell = index_landmark(*smap_, smap_->label_names()[*best], thr);
      return reachable_point(smap_->center(*cell), pose);
    }
    case SubgoalKind::MoveForward: {
      const Vec2 x0 = pose.position();
      const Vec2 nominal = x0 + subgoal.value * Vec2{std::cos(pose.heading), std::sin(pose.heading)};
      const std::vector<double> field = geodesic_field(*world_, world_->cell_of(x0));
      std::vector<ReorientCandidate> candidates;
      for (std::size_t i = 0; i < field.size(); ++i) {
        if (!std::isfinite(field[i])) continue;
        const Cell n = world_->cell_at(i);
        const Vec2 p = world_->center(n);
        if (distance(p, nominal) > config_.reorient_window) continue;
        const Vec2 d = p - x0;
        const double gamma = std::abs(normalize_angle(std::atan2(d.y, d.x) - pose.heading));
        candidates.push_back({n, p, gamma});
      }
      return select_reorient_node(candidates, x0, subgoal.value).position;
    }
    case SubgoalKind::Turn:
    case SubgoalKind::Stop:
      break;
  }
  return pose.position();
}

Decision VlmapsPolicy::plan_to(Vec2 target, const PoseState& pose, std::string label) const {
  CostGrid grid = *base_costs_;
  penalize_unexplored(grid, smap_->explored_mask(), config_.costs.unexplored);
  const std::vector<Cell> cells = astar(grid, world_->cell_of(pose.position()), world_->cell_of(target));
  std::vector<Vec2> points = to_points(*world_, cells);
  points.front() = pose.position();
  points.back() = target;
  std::vector<Vec2> waypoints = simplify(points);
  if (waypoints.empty()) waypoints.push_back(target);
  return Decision::follow(std::move(waypoints), std::move(label));
}

Decision VlmapsPolicy::explore(const Subgoal& subgoal, const PoseState& pose) {
  if (frontier_) {
    const Vec2 goal = smap_->center(*frontier_);
    if (distance(pose.position(), goal) <= config_.arrive_tolerance || frontier_attempts_ >= config_.max_attempts) {
      visited_.push_back(*frontier_);
      frontier_.reset();
      scan_remaining_ = config_.scan_turns;
      return scan();
    }
  } else {
    frontier_ = explore_step(*smap_, *world_, pose, search_label(subgoal), table_, visited_, config_.peek_radius);
    frontier_attempts_ = 0;
  }
  ++frontier_attempts_;
  return plan_to(smap_->center(*frontier_), pose, "explore");
}

void VlmapsPolicy::finish_subgoal(const Subgoal& subgoal, Vec2 target, const StepContext& ctx) {
  records_.push_back({subgoal, target, ctx.pose.position(), ctx.step});
  ++pc_;
  target_.reset();
  attempts_ = 0;
  frontier_.reset();
}

Decision VlmapsPolicy::decide(const StepContext& ctx) {
  integrate_observation(*smap_, ctx.observation, ctx.pose);
  if (scan_remaining_ > 0) return scan();

  for (int pass = 0; pass < kMaxResolvePasses; ++pass) {
    if (pc_ >= program_.size()) return Decision::stop();
    const Subgoal& subgoal = program_[pc_];

    if (subgoal.kind == SubgoalKind::Stop) {
      finish_subgoal(subgoal, ctx.pose.position(), ctx);
      return Decision::stop();
    }
    if (subgoal.kind == SubgoalKind::Turn) {
      const double degrees = rad_to_deg(normalize_angle(deg_to_rad(subgoal.value)));
      const Subgoal done = subgoal;
      finish_subgoal(done, ctx.pose.position(), ctx);
      if (degrees == 0.0) continue;
      Decision d = Decision::act(degrees > 0.0 ? DiscreteAction::turn_left(degrees)
                                               : DiscreteAction::turn_right(-degrees));
      d.label = to_string(done);
      return d;
    }

    if (!target_) target_ = resolve_target(subgoal, ctx.pose);
    if (!target_ && !scanned_) {
      // Look around once before searching any further.
      scanned_ = true;
      scan_remaining_ = config_.scan_turns;
      return scan();
    }
    if (!target_) return explore(subgoal, ctx.pose);

    if (distance(ctx.pose.position(), *target_) <= config_.arrive_tolerance) {
      finish_subgoal(subgoal, *target_, ctx);
      continue;
    }
    if (attempts_ >= config_.max_attempts) {
      return Decision::abort("could not reach the target of " + to_string(subgoal));
    }
    ++attempts_;
    return plan_to(*target_, ctx.pose, to_string(subgoal));
  }
  return Decision::abort("subgoal program made no progress");
}

ProgramRun execute_program(const SubgoalProgram& program, const GridMap& world, Pose2 start,
                           const RunOptions& options, VlmapsConfig config, const AffinityTable& table) {
  validate_program(program);
  Episode episode;
  episode.episode_id = "program";
  episode.scene_id = "program";
  episode.start = start;
  episode.goal = start.position();
  episode.instruction_text = "";
  for (std::size_t i = 0; i < program.size(); ++i) {
    episode.instruction_text += (i ? "; " : "") + to_string(program[i]);
  }
  episode.subgoals = program;

  VlmapsPolicy policy(table, config);
  ProgramRun run;
  run.trace = run_episode(episode, world, policy, options);
  run.records = policy.records();
  return run;
}

}  // namespace physnav
