#include "physnav/bench/runner.hpp"

#include "physnav/control/agent_body.hpp"
#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/embodiment/stability.hpp"

namespace physnav {

namespace {

enum SeedStream : std::uint64_t { kBodyStream = 1, kPolicyStream = 2, kObserveStream = 3, kDecideStream = 4 };

class TraceRecorder {
 public:
  explicit TraceRecorder(EpisodeTrace& trace) : trace_(trace) {}

  void record(int step, const PoseState& p) {
    const TracePose tp{step, p.x, p.y, p.heading, p.roll, p.pitch};
    if (!trace_.poses.empty() && trace_.poses.back().step == step && trace_.poses.back() == tp) return;
    trace_.poses.push_back(tp);
  }
  // Guarantees at least one pose per executed step.
  void close_step(int step, const PoseState& p) {
    if (trace_.poses.back().step != step) {
      trace_.poses.push_back({step, p.x, p.y, p.heading, p.roll, p.pitch});
    } else {
      record(step, p);
    }
  }

 private:
  EpisodeTrace& trace_;
};

}  // namespace

EpisodeTrace run_episode(const Episode& episode, const GridMap& map, Policy& policy, const RunOptions& options) {
  EpisodeTrace trace;
  trace.episode_id = episode.episode_id;
  trace.scene_id = episode.scene_id;
  trace.policy = policy.name();
  trace.controller = std::string(to_string(options.controller));
  trace.profile = std::string(to_string(options.profile.kind));
  trace.lighting = std::string(to_string(options.lighting.kind));
  trace.seed = options.seed;

  AgentBody body(map, options.profile, options.controller, episode.start,
                 derive_seed(options.seed, {kBodyStream}), options.control);
  TraceRecorder recorder(trace);
  trace.poses.push_back({0, body.pose().x, body.pose().y, body.pose().heading, 0.0, 0.0});

  try {
    policy.reset(episode, map, derive_seed(options.seed, {kPolicyStream}));
  } catch (const Error& e) {
    trace.failure_reason = e.what();
    return trace;
  }

  const bool detect_stuck = options.controller != ControllerKind::Flash;
  StuckWindow window;
  window.push(body.pose().planar());

  for (int step = 1; step <= options.max_steps; ++step) {
    const auto s = static_cast<std::uint64_t>(step);
    const Observation obs = observe(map, body.pose(), options.profile, options.lighting,
                                    derive_seed(options.seed, {kObserveStream, s}), options.sensor);
    const StepContext ctx{episode,         map,  body.pose(),           obs,
                          options.profile, options.controller, step, options.success_radius,
                          derive_seed(options.seed, {kDecideStream, s})};
    Decision decision;
    try {
      decision = policy.decide(ctx);
    } catch (const Error& e) {
      decision = Decision::abort(e.what());
    }
    if (decision.kind == Decision::Kind::Abort) {
      trace.failure_reason = decision.reason.empty() ? "policy gave up" : decision.reason;
      break;
    }

    trace.steps = step;
    trace.actions.push_back(decision.label.empty() ? "?" : decision.label);
    body.advance_step();
    if (decision.kind == Decision::Kind::Stop) {
      recorder.close_step(step, body.pose());
      trace.events.push_back({EventKind::Stop, step});
      break;
    }

    const std::uint64_t collisions_before = body.collision_ticks();
    try {
      switch (decision.kind) {
        case Decision::Kind::Act:
          body.execute(decision.action);
          break;
        case Decision::Kind::Path:
          body.follow_path(decision.path, [&](const PoseState& p) {
            recorder.record(step, p);
            return true;
          });
          break;
        case Decision::Kind::Relative:
          for (const Pose2& offset : decision.relative) {
            const MotionOutcome o = body.move_relative(offset);
            recorder.record(step, body.pose());
            if (o.fell || o.blocked) break;
          }
          break;
        case Decision::Kind::Stop:
        case Decision::Kind::Abort:
          break;
      }
    } catch (const Error& e) {
      recorder.close_step(step, body.pose());
      trace.failure_reason = e.what();
      break;
    }
    recorder.close_step(step, body.pose());

    if (body.collision_ticks() > collisions_before) trace.events.push_back({EventKind::Collision, step});
    if (body.fallen()) {
      trace.events.push_back({EventKind::Fall, step});
      break;
    }
    window.push(body.pose().planar());
    if (detect_stuck && check_stuck(window)) {
      trace.events.push_back({EventKind::Stuck, step});
      break;
    }
    if (step == options.max_steps) trace.events.push_back({EventKind::Timeout, step});
  }
  return trace;
}

}  // namespace physnav
