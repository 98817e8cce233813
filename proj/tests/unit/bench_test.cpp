#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "physnav/bench/evaluate.hpp"
#include "physnav/bench/metrics.hpp"
#include "physnav/bench/results.hpp"
#include "physnav/bench/runner.hpp"
#include "physnav/bench/sampling.hpp"
#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/core/text.hpp"
#include "physnav/plan/search.hpp"
#include "physnav/policy/baselines.hpp"
#include "physnav/world/random_map.hpp"
#include "unit/test_maps.hpp"

using namespace physnav;
using physnav::testing::open_room;

namespace {

class SpinForever : public Policy {
 public:
  std::string name() const override { return "forward"; }
  void reset(const Episode&, const GridMap&, std::uint64_t) override {}
  Decision decide(const StepContext&) override { return Decision::act(DiscreteAction::turn_left()); }
};

Episode corridor_episode(Vec2 start, Vec2 goal) {
  Episode e;
  e.episode_id = "c0";
  e.scene_id = "corridor";
  e.start = {start.x, start.y, 0.0};
  e.goal = goal;
  e.reference_path = {start, goal};
  return e;
}

EpisodeTrace trace_through(const Episode& e, const std::vector<Vec2>& points, EventKind end) {
  EpisodeTrace t;
  t.episode_id = e.episode_id;
  t.scene_id = e.scene_id;
  for (std::size_t i = 0; i < points.size(); ++i) {
    t.poses.push_back({static_cast<int>(i), points[i].x, points[i].y, 0.0, 0.0, 0.0});
    if (i > 0) t.actions.push_back("forward");
  }
  t.steps = static_cast<int>(points.size()) - 1;
  t.events.push_back({end, t.steps});
  return t;
}

RandomMapConfig medium_house() {
  RandomMapConfig cfg;
  cfg.width = 120;
  cfg.height = 90;
  return cfg;
}

}  // namespace

TEST_CASE("sample_episodes is deterministic and every episode validates") {
  const GridMap map = make_random_map(3, medium_house());
  SamplingConfig cfg;
  cfg.scene_id = "house3";
  const SampleResult a = sample_episodes(map, 40, cfg, 99);
  const SampleResult b = sample_episodes(map, 40, cfg, 99);
  REQUIRE(a.episodes.size() == 40);
  CHECK(a.warning.empty());
  CHECK(dataset_to_json(a.episodes) == dataset_to_json(b.episodes));
  CHECK(dataset_to_json(a.episodes) != dataset_to_json(sample_episodes(map, 40, cfg, 100).episodes));

  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    const Episode& e = a.episodes[i];
    CAPTURE(e.episode_id);
    CHECK_FALSE(episode_problem(map, e, cfg).has_value());
    const double l = geodesic_distance(map, e.start.position(), e.goal);
    CHECK(l >= cfg.min_length);
    CHECK(l <= cfg.max_length);
    CHECK_FALSE(e.instruction_text.empty());
    if (e.subgoals) CHECK_NOTHROW(validate_program(*e.subgoals));
    for (std::size_t j = 0; j < i; ++j) {
      const Episode& o = a.episodes[j];
      CHECK_FALSE((distance(o.start.position(), e.start.position()) <= cfg.similarity_radius &&
                   distance(o.goal, e.goal) <= cfg.similarity_radius));
    }
  }
}

TEST_CASE("sample_episodes degenerate inputs") {
  const GridMap one = open_room(1, 1, 0.5);
  CHECK_THROWS_AS(sample_episodes(one, 5, {}, 1), InsufficientFreeSpace);

  // Too small for any 3 m pair: fewer episodes and a warning.
  const GridMap tiny = open_room(4, 4, 0.5);
  SamplingConfig cfg;
  cfg.attempts_per_episode = 20;
  const SampleResult r = sample_episodes(tiny, 3, cfg, 1);
  CHECK(r.episodes.empty());
  CHECK_FALSE(r.warning.empty());
}

TEST_CASE("episode_problem flags broken episodes") {
  const GridMap map = open_room(60, 10, 0.1);
  Episode e = corridor_episode({0.55, 0.55}, {4.55, 0.55});
  e.reference_path.clear();
  for (int c = 5; c <= 45; ++c) e.reference_path.push_back(map.center({c, 5}));
  CHECK_FALSE(episode_problem(map, e, {}).has_value());
  Episode short_one = e;
  short_one.goal = {1.55, 0.55};
  CHECK(episode_problem(map, short_one, {}).has_value());
  Episode gap = e;
  gap.reference_path.erase(gap.reference_path.begin() + 10);
  CHECK(episode_problem(map, gap, {}).has_value());
  Episode wall = e;
  wall.goal = {0.05, 0.55};
  CHECK(episode_problem(map, wall, {}).has_value());
}

TEST_CASE("describe_path") {
  const std::vector<Vec2> path{{0, 0}, {1, 0}, {2, 0}, {2, 1.5}, {2, 3}};
  CHECK(describe_path(path, 0.0, "sofa") ==
        "Walk forward 2 meters, then turn left and walk forward 3 meters, then stop next to the sofa.");
  CHECK(describe_path({{0, 0}, {-1, 0}}, 0.0, "") == "Turn around and walk forward 1 meter, then stop there.");
}

TEST_CASE("path_program follows the same legs as the instruction") {
  const std::vector<Vec2> path{{0, 0}, {1, 0}, {2, 0}, {2, 1.5}, {2, 3}};
  const SubgoalProgram p = path_program(path, 0.0, "sofa");
  CHECK(p == SubgoalProgram{Subgoal::move_forward(2), Subgoal::turn(90), Subgoal::move_forward(3),
                            Subgoal::move_to_object("sofa"), Subgoal::stop()});
  CHECK_NOTHROW(validate_program(p));
  CHECK(path_program({{0, 0}, {-1.2, 0}}, 0.0, "") ==
        SubgoalProgram{Subgoal::turn(180), Subgoal::move_forward(1), Subgoal::stop()});
}

TEST_CASE("run_episode ends a never-stopping policy at exactly 200 steps") {
  const GridMap map = open_room(40, 40, 0.1);
  const Episode e = corridor_episode({1.0, 1.0}, {3.5, 3.5});
  SpinForever policy;
  for (ControllerKind controller : {ControllerKind::Flash, ControllerKind::MoveBySpeed}) {
    RunOptions o;
    o.controller = controller;
    o.profile = default_profile(controller == ControllerKind::Flash ? RobotKind::Flash : RobotKind::Wheeled);
    const EpisodeTrace t = run_episode(e, map, policy, o);
    REQUIRE(t.terminal().has_value());
    CHECK(t.steps == 200);
    // Turning in place is caught as stuck under a physical controller.
    if (controller == ControllerKind::Flash) {
      CHECK(t.terminal()->kind == EventKind::Timeout);
      CHECK(t.terminal()->step == 200);
    }
    CHECK(t.actions.size() == static_cast<std::size_t>(t.steps));
  }
}

TEST_CASE("a profile that cannot stay upright falls at step 1") {
  const GridMap map = open_room(40, 40, 0.1);
  const Episode e = corridor_episode({1.0, 1.0}, {3.5, 3.5});
  RunOptions o;
  o.controller = ControllerKind::MoveBySpeed;
  o.profile = default_profile(RobotKind::Humanoid);
  o.profile.disturbance_sigma = 5.0;
  SpinForever policy;
  const EpisodeTrace t = run_episode(e, map, policy, o);
  REQUIRE(t.terminal().has_value());
  CHECK(t.terminal()->kind == EventKind::Fall);
  CHECK(t.terminal()->step == 1);
  CHECK(t.steps == 1);
  CHECK_FALSE(t.has_event(EventKind::Stuck));
}

TEST_CASE("oracle with flash stops within the success radius") {
  const GridMap map = make_random_map(4, medium_house());
  SamplingConfig cfg;
  const auto episodes = sample_episodes(map, 10, cfg, 5).episodes;
  OraclePolicy oracle;
  RunOptions o;
  for (const Episode& e : episodes) {
    const EpisodeTrace t = run_episode(e, map, oracle, o);
    REQUIRE(t.terminal().has_value());
    CHECK(t.terminal()->kind == EventKind::Stop);
    const TracePose& end = t.poses.back();
    CHECK(geodesic_distance(map, {end.x, end.y}, e.goal) <= o.success_radius);
  }
}

TEST_CASE("oracle keeps clear of walls under physical controllers") {
  const GridMap map = make_random_map(4, medium_house());
  const auto episodes = sample_episodes(map, 20, SamplingConfig{}, 5).episodes;
  for (RobotKind kind : {RobotKind::Wheeled, RobotKind::Humanoid}) {
    OraclePolicy oracle;
    RunOptions o;
    o.controller = ControllerKind::MoveBySpeed;
    o.profile = default_profile(kind);
    int stopped = 0;
    for (const Episode& e : episodes) {
      const EpisodeTrace t = run_episode(e, map, oracle, o);
      if (t.terminal() && t.terminal()->kind == EventKind::Stop) ++stopped;
    }
    CHECK(stopped >= 16);
  }
}

TEST_CASE("compute_metrics examples") {
  const GridMap map = open_room(60, 10, 0.1);
  const Episode e = corridor_episode(map.center({5, 5}), map.center({45, 5}));
  std::vector<Vec2> along;
  for (int c = 5; c <= 45; ++c) along.push_back(map.center({c, 5}));

  SUBCASE("stopping at the goal along the optimal path scores SPL 1") {
    const MetricsReport r = compute_metrics({trace_through(e, along, EventKind::Stop)}, {e}, map, 3.0);
    const EpisodeMetrics& m = r.episodes[0];
    CHECK(m.success == 1);
    CHECK(m.oracle_success == 1);
    CHECK(m.ne == 0.0);
    CHECK(m.tl == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(m.spl == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.terminal == "stop");
  }
  SUBCASE("stopping 2.9 m short is still a success at radius 3") {
    std::vector<Vec2> part(along.begin(), along.begin() + 12);  // ends at column 16, 29 cells from 45
    const MetricsReport r = compute_metrics({trace_through(e, part, EventKind::Stop)}, {e}, map, 3.0);
    CHECK(r.episodes[0].ne == doctest::Approx(2.9));
    CHECK(r.episodes[0].success == 1);
    CHECK(r.episodes[0].spl == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(compute_metrics({trace_through(e, part, EventKind::Stop)}, {e}, map, 2.8).episodes[0].success == 0);
  }
  SUBCASE("passing the goal then timing out away from it is oracle success only") {
    std::vector<Vec2> there_and_back = along;
    for (int c = 44; c >= 5; --c) there_and_back.push_back(map.center({c, 5}));
    const MetricsReport r = compute_metrics({trace_through(e, there_and_back, EventKind::Timeout)}, {e}, map, 3.0);
    CHECK(r.episodes[0].oracle_success == 1);
    CHECK(r.episodes[0].success == 0);
    CHECK(r.episodes[0].spl == 0.0);
    CHECK(r.aggregate.os == 100.0);
    CHECK(r.aggregate.sr == 0.0);
  }
  SUBCASE("a stop without a terminal-stop event is not success") {
    EpisodeTrace t = trace_through(e, along, EventKind::Stop);
    t.events.clear();
    t.failure_reason = "gave up";
    const MetricsReport r = compute_metrics({t}, {e}, map, 3.0);
    CHECK(r.episodes[0].success == 0);
    CHECK(r.episodes[0].terminal == "none");
  }
  CHECK_THROWS_AS(compute_metrics({}, {e}, map, 3.0), LengthMismatch);
  Episode other = e;
  other.episode_id = "zz";
  CHECK_THROWS_AS(compute_metrics({trace_through(e, along, EventKind::Stop)}, {other}, map, 3.0), LengthMismatch);
}

TEST_CASE("metric ordering and permutation invariance on random batches") {
  const GridMap map = make_random_map(8, medium_house());
  const auto episodes = sample_episodes(map, 30, {}, 2).episodes;
  const PolicyRegistry registry = PolicyRegistry::builtin();
  SceneMaps maps{{"scene", std::make_shared<const GridMap>(map)}};
  Rng rng(3);
  for (const std::string name : {"random", "oracle"}) {
    RunOptions o;
    o.seed = rng.next_u64();
    const EvalResult r = evaluate(episodes, maps, registry.factory(name), o, 2);
    const AggregateMetrics& a = r.report.aggregate;
    CHECK(a.spl <= a.sr);
    CHECK(a.sr <= a.os);
    CHECK(a.fr == 0.0);
    CHECK(a.str == 0.0);
    for (const EpisodeMetrics& m : r.report.episodes) {
      CHECK(m.spl <= m.success);
      CHECK(m.success <= m.oracle_success);
      CHECK((m.fell + m.stuck) <= 1);
    }

    std::vector<std::size_t> order(episodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    std::vector<Episode> shuffled_eps;
    std::vector<EpisodeTrace> shuffled_traces;
    for (std::size_t i : order) {
      shuffled_eps.push_back(episodes[i]);
      shuffled_traces.push_back(r.traces[i]);
    }
    const MetricsReport s = compute_metrics(shuffled_traces, shuffled_eps, maps, o.success_radius);
    CHECK(metrics_to_csv(s) == metrics_to_csv(r.report));
    CHECK(s.aggregate.sr == a.sr);
    CHECK(s.aggregate.spl == a.spl);
    CHECK(s.aggregate.tl == a.tl);
  }
}

TEST_CASE("evaluate does not depend on the worker count") {
  const GridMap map = make_random_map(2, medium_house());
  const auto episodes = sample_episodes(map, 12, {}, 4).episodes;
  SceneMaps maps{{"scene", std::make_shared<const GridMap>(map)}};
  const PolicyRegistry registry = PolicyRegistry::builtin();
  RunOptions o;
  o.controller = ControllerKind::MoveBySpeed;
  o.profile = default_profile(RobotKind::Quadruped);
  o.seed = 21;
  const EvalResult one = evaluate(episodes, maps, registry.factory("random"), o, 1);
  const EvalResult four = evaluate(episodes, maps, registry.factory("random"), o, 4);
  REQUIRE(one.traces.size() == four.traces.size());
  for (std::size_t i = 0; i < one.traces.size(); ++i) CHECK(trace_to_json(one.traces[i]) == trace_to_json(four.traces[i]));
  CHECK(metrics_to_csv(one.report) == metrics_to_csv(four.report));

  CHECK_THROWS_AS(evaluate(episodes, SceneMaps{}, registry.factory("random"), o, 1), ValidationError);
}

TEST_CASE("policy registry") {
  const PolicyRegistry r = PolicyRegistry::builtin();
  CHECK(r.names() == std::vector<std::string>{"cma", "oracle", "random", "rdp", "seq2seq", "vlmaps"});
  for (const auto& n : r.names()) CHECK(r.create(n)->name() == n);
  try {
    r.create("teleporter");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("oracle") != std::string::npos);
  }
}

TEST_CASE("result files") {
  MetricsReport report;
  EpisodeMetrics m;
  m.episode_id = "e,1";
  m.scene_id = "s";
  m.steps = 7;
  m.terminal = "stop";
  m.tl = 1.25;
  m.ne = 0.5;
  m.success = 1;
  m.oracle_success = 1;
  m.spl = 0.8;
  m.failure_reason = "said \"no\"";
  report.episodes.push_back(m);
  report.aggregate = aggregate(report.episodes);
  const std::string csv = metrics_to_csv(report);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "episode_id,scene_id,steps,terminal,TL,NE,success,oracle_success,SPL,fell,stuck,failure_reason");
  CHECK(csv.find("\"e,1\",s,7,stop,1.25,0.5,1,1,0.8,0,0,\"said \"\"no\"\"\"") != std::string::npos);

  ResultSummary s{{"oracle", "flash", "flash", "DL5000", 3, 200, 3.0}, report.aggregate};
  const ResultSummary back = summary_from_json(summary_to_json(s));
  CHECK(back.run == s.run);
  CHECK(back.metrics.sr == s.metrics.sr);
  CHECK(back.metrics.spl == s.metrics.spl);
  CHECK(summary_to_json(back) == summary_to_json(s));

  std::string old = summary_to_json(s);
  old.replace(old.find("\"schema_version\": 1"), 19, "\"schema_version\": 0");
  CHECK_THROWS_AS(summary_from_json(old), ValidationError);
  CHECK_THROWS_AS(summary_from_json("{"), ParseError);

  const std::string table = format_table({s});
  const std::string header = table.substr(0, table.find('\n'));
  std::vector<std::string> columns;
  for (auto part : split(header, ' ')) {
    if (!part.empty()) columns.emplace_back(part);
  }
  CHECK(columns == std::vector<std::string>{"Policy", "Controller", "Profile", "Lighting", "TL", "NE", "FR", "StR",
                                            "OS", "SR", "SPL"});
  CHECK(table.find("100.00") != std::string::npos);

  ResultSummary dim = s;
  dim.run.lighting = "DL300";
  const auto merged = merge_summaries({s, dim});
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].run.lighting == "DL300");
  CHECK(merged[0].run.policy == merged[1].run.policy);
  CHECK_THROWS_AS(merge_summaries({s, s}), ValidationError);
}
