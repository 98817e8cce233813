#include <cmath>
#include <string>

#include "doctest.h"
#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/world/grid_map.hpp"
#include "physnav/world/random_map.hpp"
#include "physnav/world/sensing.hpp"

using namespace physnav;

namespace {

// Open room of `cols` x `rows` interior cells with a closed border.
std::string open_room(int cols, int rows, double cell = 0.1) {
  std::string text = "cellsize " + std::to_string(cell) + "\n";
  text += std::string(static_cast<std::size_t>(cols + 2), '#') + "\n";
  for (int r = 0; r < rows; ++r) text += "#" + std::string(static_cast<std::size_t>(cols), '.') + "#\n";
  text += std::string(static_cast<std::size_t>(cols + 2), '#') + "\n";
  return text;
}

// Independent depth oracle: march in 1e-4 m increments until the sample
// point lands in an obstacle cell.
double marching_depth(const GridMap& map, Vec2 origin, double heading, double max_range) {
  constexpr double kStep = 1e-4;
  for (double t = 0.0; t < max_range; t += kStep) {
    const Vec2 p{origin.x + t * std::cos(heading), origin.y + t * std::sin(heading)};
    const Cell c = map.cell_of(p);
    if (!map.in_bounds(c) || map.is_obstacle(c)) return t;
  }
  return max_range;
}

PoseState pose_at(double x, double y, double heading) {
  PoseState p;
  p.x = x;
  p.y = y;
  p.heading = heading;
  return p;
}

const char* kLabeledRoom =
    "cellsize 0.1\n"
    "label s sofa\n"
    "label t table\n"
    "############\n"
    "#..........#\n"
    "#......ss..#\n"
    "#..........#\n"
    "#...H......#\n"
    "#......tt..#\n"
    "#..........#\n"
    "############\n";

}  // namespace

TEST_CASE("load_map: bordered 3x3 room") {
  const GridMap map = load_map(open_room(3, 3));
  CHECK(map.width() == 5);
  CHECK(map.height() == 5);
  int free = 0;
  for (CellKind k : map.cells()) free += k == CellKind::Free;
  CHECK(free == 9);
  CHECK(map.cell_size() == doctest::Approx(0.1));
}

TEST_CASE("load_map: malformed input") {
  CHECK_THROWS_AS(load_map("cellsize 0.1\n#####\n#..#\n#####\n"), ParseError);
  CHECK_THROWS_AS(load_map("cellsize 0.1\n###\n#x#\n###\n"), ParseError);
  CHECK_THROWS_AS(load_map("#####\n#...#\n#####\n"), ParseError);
  CHECK_THROWS_AS(load_map(""), ParseError);
  CHECK_THROWS_AS(load_map("cellsize 0.1\nlabel . floor\n###\n#.#\n###\n"), ParseError);
}

TEST_CASE("load_map: validation errors") {
  CHECK_THROWS_AS(load_map("cellsize 0.1\n###\n#..\n###\n"), ValidationError);
  CHECK_THROWS_AS(load_map("cellsize 0\n###\n#.#\n###\n"), ValidationError);
  CHECK_THROWS_AS(load_map("cellsize -1\n###\n#.#\n###\n"), ValidationError);
}

TEST_CASE("load_map: hole cell and round trip") {
  const std::string text = "cellsize 0.1\n#####\n#.H.#\n#...#\n#####\n";
  const GridMap map = load_map(text);
  int holes = 0;
  for (CellKind k : map.cells()) holes += k == CellKind::Hole;
  CHECK(holes == 1);
  CHECK(map.kind({2, 1}) == CellKind::Hole);
  CHECK(to_text(map) == text);

  const GridMap labeled = load_map(kLabeledRoom);
  CHECK(to_text(labeled) == kLabeledRoom);
  REQUIRE(labeled.find_label("sofa").has_value());
  CHECK(labeled.label({7, 2}) == *labeled.find_label("sofa"));
  CHECK(labeled.kind({7, 2}) == CellKind::Free);
  CHECK(labeled.labeled_cells().size() == 4);
}

TEST_CASE("ray_cast: wall straight ahead in a corridor") {
  // 100-cell corridor (10 m); wall inserted at column 41 => boundary at 4.1 m.
  std::string text = "cellsize 0.1\n" + std::string(102, '#') + "\n#" + std::string(100, '.') + "#\n" +
                     std::string(102, '#') + "\n";
  text[std::string("cellsize 0.1\n").size() + 103 + 41] = '#';
  const GridMap map = load_map(text);
  const Vec2 origin{0.15, 0.15};
  const double d = ray_cast(map, origin, 0.0, 10.0);
  // Analytic: wall face at x = 41 * 0.1.
  CHECK(d == doctest::Approx(4.1 - 0.15).epsilon(1e-12));
  CHECK(std::abs(d - 3.95) <= 0.05);
}

TEST_CASE("ray_cast: clamp to max range and adjacent wall") {
  const GridMap map = load_map(open_room(50, 3));
  CHECK(ray_cast(map, {0.25, 0.25}, 0.0, 1.0) == 1.0);

  // Origin in the cell next to the left border wall; the shared boundary is x = 0.1.
  const double d = ray_cast(map, {0.13, 0.25}, kPi, 10.0);
  CHECK(d == doctest::Approx(0.03).epsilon(1e-9));
  CHECK_THROWS_AS(ray_cast(map, {-1.0, 0.25}, 0.0, 1.0), OutOfBounds);
  CHECK_THROWS_AS(ray_cast(map, {0.05, 0.05}, 0.0, 1.0), OutOfBounds);
}

TEST_CASE("ray_cast agrees with a marching oracle on random maps") {
  RandomMapConfig cfg;
  cfg.width = 40;
  cfg.height = 40;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridMap map = make_random_map(seed, cfg);
    Rng rng(seed * 77);
    int checked = 0;
    while (checked < 20) {
      const Vec2 origin{rng.uniform(0.0, map.width() * map.cell_size()),
                        rng.uniform(0.0, map.height() * map.cell_size())};
      if (map.is_obstacle(map.cell_of(origin))) continue;
      const double heading = rng.uniform(-kPi, kPi);
      const double fast = ray_cast(map, origin, heading, 3.0);
      const double slow = marching_depth(map, origin, heading, 3.0);
      CHECK(std::abs(fast - slow) <= 2e-4);
      ++checked;
    }
  }
}

TEST_CASE("ray_cast: holes do not block, distance monotone as obstacle approaches") {
  const GridMap holes = load_map("cellsize 0.1\n##########\n#..HHHH..#\n##########\n");
  CHECK(ray_cast(holes, {0.15, 0.15}, 0.0, 10.0) == doctest::Approx(0.75));

  double previous = 1e9;
  for (int wall = 9; wall >= 2; --wall) {
    std::string row = "#" + std::string(10, '.') + "#";
    row[static_cast<std::size_t>(wall)] = '#';
    const GridMap map = load_map("cellsize 0.1\n############\n" + row + "\n############\n");
    const double d = ray_cast(map, {0.15, 0.15}, 0.0, 10.0);
    CHECK(d <= previous);
    previous = d;
  }
}

TEST_CASE("observe: daylight is noiseless, depth is lighting-invariant") {
  const GridMap map = load_map(kLabeledRoom);
  const RobotProfile profile = default_profile(RobotKind::Humanoid);
  const PoseState pose = pose_at(0.25, 0.35, 0.0);

  const Observation bright = observe(map, pose, profile, default_lighting(LightingKind::DL5000), 7);
  REQUIRE(bright.depth_rays.size() == 64);
  REQUIRE(!bright.visible_labels.empty());
  for (const auto& v : bright.visible_labels) {
    CHECK(v.score == true_visibility_score(v.distance, 10.0));
  }
  const Observation bright2 = observe(map, pose, profile, default_lighting(LightingKind::DL5000), 12345);
  CHECK(bright2.visible_labels == bright.visible_labels);

  for (LightingKind kind : {LightingKind::DL300, LightingKind::CL}) {
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
      const Observation o = observe(map, pose, profile, default_lighting(kind), seed);
      CHECK(o.depth_rays == bright.depth_rays);
      for (const auto& v : o.visible_labels) {
        CHECK(v.score >= 0.0);
        CHECK(v.score <= 1.0);
      }
    }
  }
}

TEST_CASE("observe: seeded noise is deterministic and actually perturbs at night") {
  const GridMap map = load_map(kLabeledRoom);
  const RobotProfile profile = default_profile(RobotKind::Quadruped);
  const PoseState pose = pose_at(0.25, 0.35, 0.0);
  const auto night = default_lighting(LightingKind::DL300);
  const Observation a = observe(map, pose, profile, night, 42);
  const Observation b = observe(map, pose, profile, night, 42);
  CHECK(a.visible_labels == b.visible_labels);
  CHECK(a.depth_rays == b.depth_rays);
  CHECK(a.camera_height == 0.5);

  bool any_diff = false;
  for (const auto& v : a.visible_labels) any_diff |= v.score != true_visibility_score(v.distance, 10.0);
  CHECK(any_diff);
}

TEST_CASE("observe: all distances in (0, max_range]") {
  const GridMap map = make_random_map(3);
  const RobotProfile profile = default_profile(RobotKind::Wheeled);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Cell c{static_cast<int>(rng.index(static_cast<std::size_t>(map.width()))),
                 static_cast<int>(rng.index(static_cast<std::size_t>(map.height())))};
    if (map.is_obstacle(c)) continue;
    const Vec2 p = map.center(c);
    const Observation o = observe(map, pose_at(p.x, p.y, rng.uniform(-kPi, kPi)), profile,
                                  default_lighting(LightingKind::CL), 9);
    for (double d : o.depth_rays) {
      CHECK(d > 0.0);
      CHECK(d <= 10.0);
    }
  }
}

TEST_CASE("make_random_map: closed, connected, deterministic") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GridMap a = make_random_map(seed);
    const GridMap b = make_random_map(seed);
    CHECK(to_text(a) == to_text(b));
    CHECK(a.labeled_cells().size() >= 4);
  }
  CHECK(to_text(make_random_map(1)) != to_text(make_random_map(2)));
}

TEST_CASE("lighting names") {
  CHECK(parse_lighting_kind("dl300") == LightingKind::DL300);
  CHECK(to_string(LightingKind::CL) == "CL");
  CHECK_THROWS_AS(parse_lighting_kind("moonlight"), ParseError);
  CHECK(default_lighting(LightingKind::DL5000).semantic_noise_sigma == 0.0);
}
