#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace physnav {

enum class EventKind { Collision, Fall, Stuck, Stop, Timeout };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view name);
/// Everything except Collision ends an episode.
bool is_terminal(EventKind kind);

struct TraceEvent {
  EventKind kind = EventKind::Collision;
  int step = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct TracePose {
  /// Decision step that produced this pose; 0 for the start pose. A step
  /// that follows a path records one pose per waypoint.
  int step = 0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double roll = 0.0;
  double pitch = 0.0;

  friend bool operator==(const TracePose&, const TracePose&) = default;
};

/// Everything that happened in one episode. Steps are numbered from 1;
/// actions[i] is the action taken at step i + 1.
struct EpisodeTrace {
  std::string episode_id;
  std::string scene_id;
  std::string policy;
  std::string controller;
  std::string profile;
  std::string lighting;
  std::uint64_t seed = 0;
  int steps = 0;
  std::vector<TracePose> poses;
  std::vector<TraceEvent> events;
  std::vector<std::string> actions;
  /// Set when the agent gave up (planner failure, exhausted exploration).
  std::string failure_reason;

  std::optional<TraceEvent> terminal() const;
  bool has_event(EventKind kind) const;
  /// Sum of displacements between consecutive recorded poses.
  double path_length() const;
};

std::string trace_to_json(const EpisodeTrace& trace);
/// Throws ParseError on malformed input, missing fields or inconsistent
/// contents (more than one terminal event, poses out of step order).
EpisodeTrace trace_from_json(std::string_view text);

void save_trace(const std::string& path, const EpisodeTrace& trace);
EpisodeTrace load_trace(const std::string& path);

}  // namespace physnav
