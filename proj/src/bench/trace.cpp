#include "physnav/bench/trace.hpp"

#include <cmath>

#include "json.hpp"
#include "physnav/core/errors.hpp"
#include "physnav/core/file_io.hpp"

namespace physnav {

using Json = nlohmann::ordered_json;

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Collision: return "collision";
    case EventKind::Fall: return "fall";
    case EventKind::Stuck: return "stuck";
    case EventKind::Stop: return "stop";
    case EventKind::Timeout: return "timeout";
  }
  return "collision";
}

EventKind parse_event_kind(std::string_view name) {
  for (EventKind k : {EventKind::Collision, EventKind::Fall, EventKind::Stuck, EventKind::Stop, EventKind::Timeout}) {
    if (name == to_string(k)) return k;
  }
  throw ParseError("unknown event: " + std::string(name));
}

bool is_terminal(EventKind kind) { return kind != EventKind::Collision; }

std::optional<TraceEvent> EpisodeTrace::terminal() const {
  for (const TraceEvent& e : events) {
    if (is_terminal(e.kind)) return e;
  }
  return std::nullopt;
}

bool EpisodeTrace::has_event(EventKind kind) const {
  for (const TraceEvent& e : events) {
    if (e.kind == kind) return true;
  }
  return false;
}

double EpisodeTrace::path_length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < poses.size(); ++i) {
    total += std::hypot(poses[i].x - poses[i - 1].x, poses[i].y - poses[i - 1].y);
  }
  return total;
}

std::string trace_to_json(const EpisodeTrace& t) {
  Json j;
  j["episode_id"] = t.episode_id;
  j["scene_id"] = t.scene_id;
  j["policy"] = t.policy;
  j["controller"] = t.controller;
  j["profile"] = t.profile;
  j["lighting"] = t.lighting;
  j["seed"] = t.seed;
  j["steps"] = t.steps;
  Json poses = Json::array();
  for (const TracePose& p : t.poses) poses.push_back({p.step, p.x, p.y, p.heading, p.roll, p.pitch});
  j["poses"] = std::move(poses);
  Json events = Json::array();
  for (const TraceEvent& e : t.events) events.push_back({{"kind", std::string(to_string(e.kind))}, {"step", e.step}});
  j["events"] = std::move(events);
  j["actions"] = t.actions;
  j["failure_reason"] = t.failure_reason;
  return j.dump() + "\n";
}

EpisodeTrace trace_from_json(std::string_view text) {
  EpisodeTrace t;
  try {
    const Json j = Json::parse(text);
    t.episode_id = j.at("episode_id").get<std::string>();
    t.scene_id = j.at("scene_id").get<std::string>();
    t.policy = j.at("policy").get<std::string>();
    t.controller = j.at("controller").get<std::string>();
    t.profile = j.at("profile").get<std::string>();
    t.lighting = j.at("lighting").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.steps = j.at("steps").get<int>();
    for (const Json& p : j.at("poses")) {
      if (!p.is_array() || p.size() != 6) throw ParseError("trace pose must have 6 entries");
      t.poses.push_back({p[0].get<int>(), p[1].get<double>(), p[2].get<double>(), p[3].get<double>(),
                         p[4].get<double>(), p[5].get<double>()});
    }
    for (const Json& e : j.at("events")) {
      t.events.push_back({parse_event_kind(e.at("kind").get<std::string>()), e.at("step").get<int>()});
    }
    t.actions = j.at("actions").get<std::vector<std::string>>();
    t.failure_reason = j.at("failure_reason").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("bad trace: ") + ex.what());
  }

  if (t.poses.empty() || t.poses.front().step != 0) throw ParseError("trace must start with the step-0 pose");
  for (std::size_t i = 1; i < t.poses.size(); ++i) {
    if (t.poses[i].step < t.poses[i - 1].step || t.poses[i].step > t.steps) {
      throw ParseError("trace poses out of step order");
    }
  }
  int terminals = 0;
  for (const TraceEvent& e : t.events) {
    if (e.step < 1 || e.step > t.steps) throw ParseError("trace event outside the step range");
    terminals += is_terminal(e.kind) ? 1 : 0;
  }
  if (terminals > 1) throw ParseError("trace has more than one terminal event");
  if (t.actions.size() != static_cast<std::size_t>(t.steps)) throw ParseError("trace action log does not match steps");
  return t;
}

void save_trace(const std::string& path, const EpisodeTrace& trace) { write_file_atomic(path, trace_to_json(trace)); }

EpisodeTrace load_trace(const std::string& path) { return trace_from_json(read_file(path)); }

}  // namespace physnav
