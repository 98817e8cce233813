#include "physnav/bench/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/core/text.hpp"
#include "physnav/plan/cost_grid.hpp"
#include "physnav/plan/search.hpp"

namespace physnav {

namespace {

double rounded_meters(double m) { return std::max(0.5, std::round(m * 2.0) / 2.0); }

std::string meters_text(double m) {
  const double rounded = rounded_meters(m);
  return format_double(rounded) + (rounded == 1.0 ? " meter" : " meters");
}

std::optional<std::string> nearest_landmark(const GridMap& map, Vec2 goal, double radius) {
  std::optional<std::string> best;
  double best_d = radius;
  for (const Cell& c : map.labeled_cells()) {
    const double d = distance(map.center(c), goal);
    if (d <= best_d) {
      best_d = d;
      best = map.label_names()[map.label(c)];
    }
  }
  return best;
}

}  // namespace

std::vector<Cell> free_map(const GridMap& map) {
  const CostGrid grid = CostGrid::uniform(map);
  std::vector<int> component(map.cell_count(), -1);
  std::vector<Cell> best;
  int next = 0;
  for (std::size_t start = 0; start < map.cell_count(); ++start) {
    if (component[start] >= 0 || map.cells()[start] == CellKind::Obstacle) continue;
    std::vector<Cell> cells{map.cell_at(start)};
    component[start] = next;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Cell c = cells[k];
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if ((dr == 0 && dc == 0) || !can_step(grid, c, dc, dr)) continue;
          const Cell m{c.col + dc, c.row + dr};
          if (component[map.index(m)] >= 0) continue;
          component[map.index(m)] = next;
          cells.push_back(m);
        }
      }
    }
    if (cells.size() > best.size()) best = std::move(cells);
    ++next;
  }
  std::vector<Cell> out;
  for (const Cell& c : best) {
    if (map.kind(c) == CellKind::Free) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [&](Cell a, Cell b) { return map.index(a) < map.index(b); });
  return out;
}

namespace {

struct Leg {
  double turn_degrees = 0.0;
  double length = 0.0;
};

// Merges consecutive path segments that keep roughly the same direction.
std::vector<Leg> path_legs(const std::vector<Vec2>& path, double start_heading) {
  std::vector<Leg> legs;
  double heading = start_heading;
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    const Vec2 d0 = path[i + 1] - path[i];
    const double dir = std::atan2(d0.y, d0.x);
    double length = norm(d0);
    std::size_t j = i + 1;
    while (j + 1 < path.size()) {
      const Vec2 d = path[j + 1] - path[j];
      if (std::abs(normalize_angle(std::atan2(d.y, d.x) - dir)) > deg_to_rad(30.0)) break;
      length += norm(d);
      ++j;
    }
    legs.push_back({rad_to_deg(normalize_angle(dir - heading)), length});
    heading = dir;
    i = j;
  }
  return legs;
}

}  // namespace

std::string describe_path(const std::vector<Vec2>& path, double start_heading, const std::string& landmark) {
  std::vector<std::string> parts;
  for (const Leg& leg : path_legs(path, start_heading)) {
    std::string part;
    if (leg.turn_degrees > 135.0 || leg.turn_degrees < -135.0) {
      part = "turn around and ";
    } else if (leg.turn_degrees > 30.0) {
      part = "turn left and ";
    } else if (leg.turn_degrees < -30.0) {
      part = "turn right and ";
    }
    parts.push_back(part + "walk forward " + meters_text(leg.length));
  }
  parts.push_back(landmark.empty() ? "stop there" : "stop next to the " + landmark);

  std::string text;
  for (std::size_t k = 0; k < parts.size(); ++k) text += (k ? ", then " : "") + parts[k];
  text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text + ".";
}

SubgoalProgram path_program(const std::vector<Vec2>& path, double start_heading, const std::string& landmark) {
  SubgoalProgram program;
  for (const Leg& leg : path_legs(path, start_heading)) {
    if (std::abs(leg.turn_degrees) > 30.0) program.push_back(Subgoal::turn(std::round(leg.turn_degrees)));
    program.push_back(Subgoal::move_forward(rounded_meters(leg.length)));
  }
  if (!landmark.empty()) program.push_back(Subgoal::move_to_object(landmark));
  program.push_back(Subgoal::stop());
  return program;
}

SampleResult sample_episodes(const GridMap& map, int count, const SamplingConfig& config, std::uint64_t seed) {
  if (count < 0) throw InvalidRange("episode count must be >= 0");
  const std::vector<Cell> free = free_map(map);
  if (free.size() < 2) throw InsufficientFreeSpace("map has fewer than two connected free cells");

  const CostGrid dilated = dilate(map, config.dilation_radius);
  Rng rng(seed);
  SampleResult result;
  const long long max_attempts = static_cast<long long>(count) * config.attempts_per_episode;
  for (long long attempt = 0; attempt < max_attempts && static_cast<int>(result.episodes.size()) < count;
       ++attempt) {
    const Cell s = free[rng.index(free.size())];
    const Cell g = free[rng.index(free.size())];
    const double heading = rng.uniform(-kPi, kPi);
    const double split_draw = rng.uniform();
    if (s == g) continue;

    const Vec2 start = map.center(s);
    const Vec2 goal = map.center(g);
    const double length = geodesic_field(map, s)[map.index(g)];
    if (!(length >= config.min_length && length <= config.max_length)) continue;
    const bool similar = std::any_of(result.episodes.begin(), result.episodes.end(), [&](const Episode& e) {
      return distance(e.start.position(), start) <= config.similarity_radius &&
             distance(e.goal, goal) <= config.similarity_radius;
    });
    if (similar) continue;

    Episode ep;
    ep.episode_id = config.scene_id + "_" + std::to_string(result.episodes.size());
    ep.scene_id = config.scene_id;
    ep.start = {start.x, start.y, heading};
    ep.goal = goal;
    ep.reference_path = to_points(map, astar(dilated, s, g));
    const auto landmark = nearest_landmark(map, goal, config.landmark_radius);
    ep.instruction_text = describe_path(ep.reference_path, heading, landmark.value_or(""));
    ep.subgoals = path_program(ep.reference_path, heading, landmark.value_or(""));
    if (split_draw < config.train_fraction) {
      ep.split = Split::Train;
    } else if (split_draw < config.train_fraction + config.val_seen_fraction) {
      ep.split = Split::ValSeen;
    } else {
      ep.split = Split::ValUnseen;
    }
    result.episodes.push_back(std::move(ep));
  }
  if (static_cast<int>(result.episodes.size()) < count) {
    result.warning = "only " + std::to_string(result.episodes.size()) + " of " + std::to_string(count) +
                     " episodes found after " + std::to_string(max_attempts) + " draws";
  }
  return result;
}

std::optional<std::string> episode_problem(const GridMap& map, const Episode& episode, const SamplingConfig& config) {
  const Vec2 start = episode.start.position();
  for (const Vec2& p : {start, episode.goal}) {
    if (!map.in_bounds(p) || map.kind(map.cell_of(p)) != CellKind::Free) return "endpoint not on a free cell";
  }
  double length = 0.0;
  try {
    length = geodesic_distance(map, start, episode.goal);
  } catch (const Error&) {
    return "goal not reachable from start";
  }
  if (length < config.min_length || length > config.max_length) {
    return "geodesic length " + format_double(length) + " outside bounds";
  }
  const auto& path = episode.reference_path;
  if (path.size() < 2) return "reference path too short";
  if (map.cell_of(path.front()) != map.cell_of(start) || map.cell_of(path.back()) != map.cell_of(episode.goal)) {
    return "reference path does not join start and goal";
  }
  const CostGrid grid = CostGrid::uniform(map);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Cell c = map.cell_of(path[i]);
    if (!map.is_traversable(c)) return "reference path crosses an obstacle";
    if (i == 0) continue;
    const Cell p = map.cell_of(path[i - 1]);
    const int dc = c.col - p.col;
    const int dr = c.row - p.row;
    if (std::abs(dc) > 1 || std::abs(dr) > 1 || !can_step(grid, p, dc, dr)) return "reference path is not connected";
  }
  return std::nullopt;
}

}  // namespace physnav
