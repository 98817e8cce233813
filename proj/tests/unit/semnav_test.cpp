#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/plan/frontier.hpp"
#include "physnav/plan/search.hpp"
#include "physnav/semnav/affinity.hpp"
#include "physnav/semnav/navigator.hpp"
#include "physnav/semnav/semantic_map.hpp"
#include "physnav/world/random_map.hpp"
#include "unit/test_maps.hpp"

using namespace physnav;
using physnav::testing::open_room;
using physnav::testing::pose_at;

namespace {

struct Mark {
  int col;
  int row;
  char ch;
};

// 15x15 map with 0.5 m cells: closed border, free interior, marks applied
// over it. Label declarations go in `header`.
GridMap house15(const std::string& header, std::initializer_list<Mark> marks) {
  std::vector<std::string> rows(15, std::string(15, '.'));
  for (int i = 0; i < 15; ++i) {
    rows[0][i] = rows[14][i] = '#';
    rows[i][0] = rows[i][14] = '#';
  }
  for (const Mark& m : marks) rows[static_cast<std::size_t>(m.row)][static_cast<std::size_t>(m.col)] = m.ch;
  std::string text = "cellsize 0.5\n" + header;
  for (const auto& r : rows) text += r + "\n";
  return load_map(text);
}

RunOptions flash_options(int max_steps = 200) {
  RunOptions o;
  o.controller = ControllerKind::Flash;
  o.profile = default_profile(RobotKind::Flash);
  o.max_steps = max_steps;
  return o;
}

Observation no_labels(const GridMap& map, const PoseState& pose) {
  Observation obs = observe(map, pose, default_profile(RobotKind::Flash), default_lighting(LightingKind::DL5000), 1);
  obs.visible_labels.clear();
  return obs;
}

}  // namespace

TEST_CASE("default affinity table orders tables toward dining rooms") {
  const AffinityTable t = default_affinity_table();
  CHECK(t.affinity("table", "dining room") > t.affinity("table", "toilet"));
  CHECK(t.affinity("sofa", "living room") == doctest::Approx(0.9));
  CHECK(t.affinity("sofa", "others") == doctest::Approx(0.2));
  CHECK(t.affinity("table", "chair") == doctest::Approx(0.6));
  CHECK(t.affinity("table", "bed") == doctest::Approx(0.05));
  CHECK(t.affinity("table", "table") == 1.0);
  CHECK(t.affinity("unicorn", "kitchen") == 0.0);
  CHECK(t.columns().size() == room_names().size() + t.objects().size());
}

TEST_CASE("affinity CSV round-trips and rejects bad input") {
  const AffinityTable t = default_affinity_table();
  const AffinityTable back = parse_affinity_csv(to_csv(t));
  CHECK(back.objects() == t.objects());
  CHECK(back.columns() == t.columns());
  for (const auto& o : t.objects()) {
    for (const auto& c : t.columns()) CHECK(back.affinity(o, c) == t.affinity(o, c));
  }

  const AffinityTable small = parse_affinity_csv("object,kitchen,toilet\r\nstove,0.8,0.1\nsink,0.3,0.9\n");
  CHECK(small.affinity("sink", "toilet") == 0.9);
  CHECK_THROWS_AS(parse_affinity_csv("object,kitchen\nstove,abc\n"), ParseError);
  CHECK_THROWS_AS(parse_affinity_csv("object,kitchen\nstove,1.5\n"), ParseError);
  CHECK_THROWS_AS(parse_affinity_csv("object,kitchen\nstove,0.5,0.2\n"), ParseError);
  CHECK_THROWS_AS(parse_affinity_csv(""), ParseError);
  CHECK_THROWS_AS(AffinityTable({"a"}, {"b"}, {0.1, 0.2}), ValidationError);
}

TEST_CASE("classify_room examples") {
  const AffinityTable t = default_affinity_table();
  CHECK(classify_room({"table", "chair"}, room_names(), t) == "dining room");
  CHECK(classify_room({}, room_names(), t) == "others");
  CHECK(classify_room({"bed", "stove", "sink", "sofa", "table"}, room_names(), t) == "others");

  const AffinityTable uniform({"thing"}, {"kitchen", "bedroom"}, {0.5, 0.5});
  CHECK(classify_room({"thing"}, {"kitchen", "bedroom"}, uniform) == "kitchen");
  CHECK(classify_room({"thing"}, {"bedroom", "kitchen"}, uniform) == "bedroom");
  CHECK_THROWS_AS(classify_room({"thing"}, {}, uniform), ValidationError);
}

TEST_CASE("classify_room ignores the order and repetition of visible labels") {
  const AffinityTable t = default_affinity_table();
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> labels;
    const std::size_t n = rng.index(6);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(t.objects()[rng.index(t.objects().size())]);
    const std::string expected = classify_room(labels, room_names(), t);
    for (int k = 0; k < 5; ++k) {
      std::vector<std::string> shuffled = labels;
      for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
      if (!shuffled.empty() && rng.uniform() < 0.5) shuffled.push_back(shuffled.front());
      CHECK(classify_room(shuffled, room_names(), t) == expected);
    }
  }
}

TEST_CASE("classify_room from an observation uses the map's label names") {
  const GridMap map = house15("label t table\nlabel c chair\n", {{10, 7, 't'}, {10, 8, 'c'}});
  const Observation obs =
      observe(map, pose_at(2.25, 3.75), default_profile(RobotKind::Flash), default_lighting(LightingKind::DL5000), 3);
  CHECK(obs.visible_labels.size() == 2);
  CHECK(classify_room(obs, map, room_names(), default_affinity_table()) == "dining room");
}

TEST_CASE("integrating an observation without labels only grows the explored mask") {
  const GridMap map = house15("label s sofa\n", {{10, 7, 's'}});
  SemanticMap smap(map);
  const PoseState pose = pose_at(2.25, 3.75);
  integrate_observation(smap, no_labels(map, pose), pose);

  CHECK(smap.explored(map.cell_of(pose.position())));
  CHECK(smap.explored(Cell{8, 7}));
  CHECK_FALSE(smap.explored(Cell{2, 7}));  // behind the robot
  CHECK(smap.obstacle(Cell{14, 7}));       // wall straight ahead
  for (std::size_t i = 0; i < map.cell_count(); ++i) CHECK(smap.score(map.cell_at(i), 1) == 0.0);
  CHECK(smap.explored_fraction() > 0.0);
  CHECK(smap.explored_fraction() < 1.0);
}

TEST_CASE("integrating the same observation twice changes nothing") {
  const GridMap map = house15("label s sofa\n", {{10, 7, 's'}});
  const PoseState pose = pose_at(2.25, 3.75);
  const Observation obs =
      observe(map, pose, default_profile(RobotKind::Flash), default_lighting(LightingKind::DL300), 5);
  SemanticMap once(map);
  integrate_observation(once, obs, pose);
  SemanticMap twice = once;
  integrate_observation(twice, obs, pose);
  CHECK(once == twice);
}

TEST_CASE("two sightings of a landmark keep the larger score") {
  const GridMap map = house15("label s sofa\n", {{10, 7, 's'}});
  const Cell sofa{10, 7};
  const PoseState near = pose_at(3.75, 3.75);
  const PoseState far = pose_at(1.25, 3.75);
  const auto lighting = default_lighting(LightingKind::DL300);
  const Observation a = observe(map, near, default_profile(RobotKind::Flash), lighting, 21);
  const Observation b = observe(map, far, default_profile(RobotKind::Flash), lighting, 22);
  REQUIRE(a.visible_labels.size() == 1);
  REQUIRE(b.visible_labels.size() == 1);

  SemanticMap smap(map);
  integrate_observation(smap, a, near);
  integrate_observation(smap, b, far);
  CHECK(smap.score(sofa, 1) == std::max(a.visible_labels[0].score, b.visible_labels[0].score));
}

TEST_CASE("integration is monotone along random walks") {
  const GridMap map = make_random_map(5);
  SemanticMap smap(map);
  Rng rng(6);
  std::vector<Cell> free;
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    if (map.cells()[i] == CellKind::Free) free.push_back(map.cell_at(i));
  }
  const auto lighting = default_lighting(LightingKind::CL);
  for (int k = 0; k < 40; ++k) {
    const Vec2 p = map.center(free[rng.index(free.size())]);
    const PoseState pose = pose_at(p.x, p.y, rng.uniform(-kPi, kPi));
    const SemanticMap before = smap;
    integrate_observation(smap, observe(map, pose, default_profile(RobotKind::Flash), lighting, rng.next_u64()), pose);
    for (std::size_t i = 0; i < map.cell_count(); ++i) {
      const Cell c = map.cell_at(i);
      if (before.explored(c)) CHECK(smap.explored(c));
      if (before.obstacle(c)) CHECK(smap.obstacle(c));
      for (LabelId l = 1; l <= smap.label_count(); ++l) CHECK(smap.score(c, l) >= before.score(c, l));
    }
    CHECK(smap.explored_fraction() >= before.explored_fraction());
  }
}

TEST_CASE("index_landmark examples") {
  const GridMap map = house15("label s sofa\nlabel b bed\n", {{3, 3, 's'}, {9, 9, 'b'}});
  SemanticMap smap(map);
  CHECK_FALSE(index_landmark(smap, "sofa"));
  CHECK_THROWS_AS(index_landmark(smap, "piano"), UnknownLabel);

  smap.deposit(Cell{4, 5}, 1, 0.9);
  CHECK(index_landmark(smap, "sofa") == Cell{4, 5});

  // Region A: a 3x1 run peaking at 0.9; region B: a 2x2 block peaking at 0.7.
  SemanticMap two(map);
  two.deposit(Cell{2, 2}, 1, 0.6);
  two.deposit(Cell{3, 2}, 1, 0.9);
  two.deposit(Cell{4, 2}, 1, 0.6);
  two.deposit(Cell{8, 8}, 1, 0.7);
  two.deposit(Cell{9, 8}, 1, 0.7);
  two.deposit(Cell{8, 9}, 1, 0.7);
  two.deposit(Cell{9, 9}, 1, 0.7);
  CHECK(index_landmark(two, "sofa") == Cell{3, 2});
  CHECK_FALSE(index_landmark(two, "bed"));

  // Peaks at or below the threshold do not count.
  SemanticMap faint(map);
  faint.deposit(Cell{5, 5}, 2, 0.5);
  CHECK_FALSE(index_landmark(faint, "bed"));
  CHECK(index_landmark(faint, "bed", 0.4) == Cell{5, 5});
}

TEST_CASE("index_landmark snaps a centroid outside an L-shaped region onto it") {
  const GridMap map = house15("label s sofa\n", {});
  SemanticMap smap(map);
  for (int c = 2; c <= 6; ++c) smap.deposit(Cell{c, 2}, 1, 0.8);
  for (int r = 3; r <= 6; ++r) smap.deposit(Cell{2, r}, 1, 0.8);
  // Centroid (3.33, 3.33) rounds to (3, 3), which is not in the region.
  const auto cell = index_landmark(smap, "sofa");
  REQUIRE(cell);
  CHECK(smap.score(*cell, 1) > 0.0);
  CHECK((*cell == Cell{3, 2} || *cell == Cell{2, 3}));
}

TEST_CASE("explore_step with a single frontier returns it") {
  const GridMap map = open_room(5, 3, 0.5);
  SemanticMap smap(map);
  for (std::size_t i = 0; i < map.cell_count(); ++i) smap.mark_explored(map.cell_at(i));
  SemanticMap partial(map);
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    const Cell c = map.cell_at(i);
    if (!(c == Cell{5, 2})) partial.mark_explored(c);
  }
  const auto frontiers = detect_frontiers(partial.explored_mask(), map);
  REQUIRE(frontiers.size() == 3);  // the free neighbors of the hidden cell
  const Cell pick = explore_step(partial, map, pose_at(0.75, 0.75), "sofa", default_affinity_table());
  CHECK(std::find(frontiers.begin(), frontiers.end(), pick) != frontiers.end());

  SemanticMap one(map);
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    const Cell c = map.cell_at(i);
    if (c.col <= 2) one.mark_explored(c);
  }
  const auto single = detect_frontiers(one.explored_mask(), map);
  REQUIRE(single.size() == 3);
  const std::vector<Cell> visited{single[0], single[2]};
  CHECK(explore_step(one, map, pose_at(0.75, 0.75), "sofa", default_affinity_table(), visited) == single[1]);

  CHECK_THROWS_AS(explore_step(smap, map, pose_at(0.75, 0.75), "sofa", default_affinity_table()), NoFrontiers);
}

TEST_CASE("explore_step prefers the frontier next to related objects") {
  // Chair seen near the west frontier, sink near the east one.
  const GridMap map = house15("label c chair\nlabel k sink\n", {{2, 7, 'c'}, {12, 7, 'k'}});
  SemanticMap smap(map);
  for (int r = 1; r <= 13; ++r) {
    for (int c = 1; c <= 13; ++c) {
      if (r != 1) smap.mark_explored(Cell{c, r});
    }
  }
  smap.deposit(Cell{2, 7}, 1, 0.9);
  smap.deposit(Cell{12, 7}, 2, 0.9);
  // Unexplored row 1 makes every cell of row 2 a frontier; carve it down to
  // one frontier per side by exploring the middle of row 1.
  for (int c = 3; c <= 11; ++c) smap.mark_explored(Cell{c, 1});
  const AffinityTable t = default_affinity_table();
  const PoseState pose = pose_at(3.75, 3.75);

  const Cell pick = explore_step(smap, map, pose, "table", t, {}, 6.0);
  CHECK(pick.col <= 2);
  CHECK(frontier_score(smap, pick, "table", t, 6.0) == doctest::Approx(0.6));
  const Cell other = explore_step(smap, map, pose, "bathtub", t, {}, 6.0);
  CHECK(other.col >= 12);
  CHECK(frontier_score(smap, other, "bathtub", t, 6.0) == doctest::Approx(0.6));
}

TEST_CASE("exploring frontier by frontier terminates with growing coverage") {
  const GridMap map = make_random_map(9);
  const AffinityTable t = default_affinity_table();
  SemanticMap smap(map);
  Vec2 p{};
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    if (map.cells()[i] == CellKind::Free) {
      p = map.center(map.cell_at(i));
      break;
    }
  }
  std::vector<Cell> visited;
  double coverage = 0.0;
  int iterations = 0;
  const auto lighting = default_lighting(LightingKind::DL5000);
  const std::size_t free_cells = std::count(map.cells().begin(), map.cells().end(), CellKind::Free);
  while (true) {
    for (int k = 0; k < 8; ++k) {
      const PoseState pose = pose_at(p.x, p.y, k * kPi / 4);
      integrate_observation(smap, observe(map, pose, default_profile(RobotKind::Flash), lighting, 1), pose);
    }
    CHECK(smap.explored_fraction() >= coverage);
    coverage = smap.explored_fraction();
    Cell next;
    try {
      next = explore_step(smap, map, pose_at(p.x, p.y), "piano", t, visited);
    } catch (const NoFrontiers&) {
      break;
    }
    CHECK(std::find(visited.begin(), visited.end(), next) == visited.end());
    visited.push_back(next);
    p = map.center(next);
    REQUIRE(++iterations <= static_cast<int>(free_cells));
  }
  CHECK(iterations > 0);
  CHECK(coverage > 0.5);
}

TEST_CASE("a program of just stop ends at the start") {
  const GridMap map = house15("label s sofa\n", {{10, 7, 's'}});
  const ProgramRun run = execute_program({Subgoal::stop()}, map, {2.25, 3.75, 0.0}, flash_options());
  CHECK(run.trace.steps == 1);
  CHECK(run.trace.has_event(EventKind::Stop));
  CHECK(run.trace.path_length() == 0.0);
  CHECK(run.trace.poses.back().x == 2.25);
  CHECK(run.trace.poses.back().y == 3.75);
  CHECK_THROWS_AS(execute_program({}, map, {2.25, 3.75, 0.0}, flash_options()), ValidationError);
}

TEST_CASE("move_to_object reaches a visible sofa under every controller") {
  const GridMap map = house15("label s sofa\n", {{10, 7, 's'}});
  const Vec2 sofa = map.center(Cell{10, 7});
  for (ControllerKind controller :
       {ControllerKind::Flash, ControllerKind::MoveBySpeed, ControllerKind::MoveAlongPath}) {
    CAPTURE(to_string(controller));
    RunOptions o = flash_options();
    o.controller = controller;
    o.profile = default_profile(controller == ControllerKind::Flash ? RobotKind::Flash : RobotKind::Wheeled);
    const ProgramRun run =
        execute_program({Subgoal::move_to_object("sofa"), Subgoal::stop()}, map, {1.25, 1.25, 0.0}, o);
    CHECK(run.trace.failure_reason == "");
    CHECK(run.trace.has_event(EventKind::Stop));
    const TracePose& end = run.trace.poses.back();
    CHECK(distance({end.x, end.y}, sofa) <= o.success_radius);
    CHECK(distance({end.x, end.y}, sofa) <= 0.35);
    REQUIRE(run.records.size() == 2);
    CHECK(run.records[0].target == sofa);
  }
}

TEST_CASE("move_in_between ends near the midpoint of two landmarks 4 m apart") {
  const GridMap map = house15("label a sofa\nlabel b tv\n", {{3, 7, 'a'}, {11, 7, 'b'}});
  const Vec2 mid = 0.5 * (map.center(Cell{3, 7}) + map.center(Cell{11, 7}));
  REQUIRE(distance(map.center(Cell{3, 7}), map.center(Cell{11, 7})) == doctest::Approx(4.0));
  for (ControllerKind controller : {ControllerKind::Flash, ControllerKind::MoveAlongPath}) {
    RunOptions o = flash_options();
    o.controller = controller;
    o.profile = default_profile(controller == ControllerKind::Flash ? RobotKind::Flash : RobotKind::Wheeled);
    const ProgramRun run = execute_program({Subgoal::move_in_between("sofa", "tv"), Subgoal::stop()}, map,
                                           {1.25, 1.25, kPi / 2}, o);
    CHECK(run.trace.failure_reason == "");
    const TracePose& end = run.trace.poses.back();
    CHECK(distance({end.x, end.y}, mid) <= 0.5);
  }
}

TEST_CASE("a landmark behind walls ends the episode with a failure reason") {
  // Sofa sealed inside a closed box in the corner.
  const GridMap map = house15("label s sofa\n",
                              {{10, 10, '#'}, {11, 10, '#'}, {12, 10, '#'}, {13, 10, '#'}, {10, 11, '#'},
                               {10, 12, '#'}, {10, 13, '#'}, {12, 12, 's'}});
  const ProgramRun run =
      execute_program({Subgoal::move_to_object("sofa"), Subgoal::stop()}, map, {1.25, 1.25, 0.0}, flash_options(400));
  CHECK(run.trace.failure_reason.find("frontier") != std::string::npos);
  CHECK_FALSE(run.trace.terminal().has_value());
}

TEST_CASE("move_forward reorients onto a reachable point and turn rotates in place") {
  const GridMap map = house15("label s sofa\n", {{6, 7, '#'}, {10, 10, 's'}});
  const ProgramRun run = execute_program({Subgoal::move_forward(2.0), Subgoal::turn(90), Subgoal::stop()}, map,
                                         {1.75, 3.75, 0.0}, flash_options());
  CHECK(run.trace.failure_reason == "");
  REQUIRE(run.records.size() == 3);
  // The nominal point (3.75, 3.75) sits just past the pillar cell at x in
  // [3, 3.5); the chosen target must be free and about 2 m away.
  const Vec2 target = run.records[0].target;
  CHECK_FALSE(map.is_obstacle(map.cell_of(target)));
  CHECK(std::abs(distance(target, {1.75, 3.75}) - 2.0) <= 0.5);
  const TracePose& end = run.trace.poses.back();
  CHECK(distance({end.x, end.y}, target) <= 0.35);
}

TEST_CASE("flash runs reach every landmark target on random houses") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    CAPTURE(seed);
    const GridMap map = make_random_map(seed);
    Rng rng(seed * 31);
    const Cell landmark = map.labeled_cells()[rng.index(map.labeled_cells().size())];
    const std::string label = map.label_names()[map.label(landmark)];
    std::vector<Cell> free;
    for (std::size_t i = 0; i < map.cell_count(); ++i) {
      if (map.cells()[i] == CellKind::Free) free.push_back(map.cell_at(i));
    }
    const Vec2 start = map.center(free[rng.index(free.size())]);

    const ProgramRun run = execute_program({Subgoal::move_to_object(label), Subgoal::stop()}, map,
                                           {start.x, start.y, 0.0}, flash_options(1000));
    REQUIRE(run.trace.failure_reason == "");
    REQUIRE(run.records.size() == 2);
    const SubgoalRecord& r = run.records[0];
    CHECK(distance(r.reached, r.target) <= kDefaultSuccessRadius);
    double nearest = 1e9;
    for (const Cell& c : map.labeled_cells()) {
      if (map.label_names()[map.label(c)] == label) nearest = std::min(nearest, distance(map.center(c), r.target));
    }
    CHECK(nearest <= kDefaultSuccessRadius);
  }
}
