#include "physnav/bench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "physnav/core/errors.hpp"
#include "physnav/plan/search.hpp"

namespace physnav {

namespace {

bool row_order(const EpisodeMetrics& a, const EpisodeMetrics& b) {
  if (a.episode_id != b.episode_id) return a.episode_id < b.episode_id;
  return a.scene_id < b.scene_id;
}

double field_at(const GridMap& map, const std::vector<double>& field, Vec2 p) {
  const Cell c = map.cell_of(p);
  if (!map.in_bounds(c)) return std::numeric_limits<double>::infinity();
  return field[map.index(c)];
}

EpisodeMetrics episode_metrics(const EpisodeTrace& trace, const Episode& episode, const GridMap& map,
                               double radius) {
  EpisodeMetrics m;
  m.episode_id = episode.episode_id;
  m.scene_id = episode.scene_id;
  m.steps = trace.steps;
  const auto terminal = trace.terminal();
  m.terminal = terminal ? std::string(to_string(terminal->kind)) : "none";
  m.failure_reason = trace.failure_reason;
  m.tl = trace.path_length();
  m.fell = trace.has_event(EventKind::Fall) ? 1 : 0;
  m.stuck = trace.has_event(EventKind::Stuck) ? 1 : 0;

  const std::vector<double> field = geodesic_field(map, map.cell_of(episode.goal));
  const Vec2 last = trace.poses.empty() ? episode.start.position()
                                        : Vec2{trace.poses.back().x, trace.poses.back().y};
  double ne = field_at(map, field, last);
  const bool connected = std::isfinite(ne);
  if (!connected) ne = distance(last, episode.goal);
  m.ne = ne;

  const bool stopped = terminal && terminal->kind == EventKind::Stop;
  m.success = stopped && connected && ne <= radius ? 1 : 0;
  for (const TracePose& p : trace.poses) {
    if (field_at(map, field, {p.x, p.y}) <= radius) {
      m.oracle_success = 1;
      break;
    }
  }
  if (m.success) {
    const double l = field_at(map, field, episode.start.position());
    const double denom = std::max(l, m.tl);
    m.spl = denom > 0.0 ? l / denom : 1.0;
  }
  return m;
}

}  // namespace

AggregateMetrics aggregate(std::vector<EpisodeMetrics> rows) {
  std::sort(rows.begin(), rows.end(), row_order);
  AggregateMetrics a;
  a.episodes = static_cast<int>(rows.size());
  if (rows.empty()) return a;
  double tl = 0.0, ne = 0.0, fr = 0.0, str = 0.0, os = 0.0, sr = 0.0, spl = 0.0;
  for (const EpisodeMetrics& m : rows) {
    tl += m.tl;
    ne += m.ne;
    fr += m.fell;
    str += m.stuck;
    os += m.oracle_success;
    sr += m.success;
    spl += m.spl;
  }
  const double n = static_cast<double>(rows.size());
  a.tl = tl / n;
  a.ne = ne / n;
  a.fr = 100.0 * fr / n;
  a.str = 100.0 * str / n;
  a.os = 100.0 * os / n;
  a.sr = 100.0 * sr / n;
  a.spl = 100.0 * spl / n;
  return a;
}

MetricsReport compute_metrics(const std::vector<EpisodeTrace>& traces, const std::vector<Episode>& episodes,
                              const SceneMaps& maps, double success_radius) {
  if (traces.size() != episodes.size()) {
    throw LengthMismatch(std::to_string(traces.size()) + " traces for " + std::to_string(episodes.size()) +
                         " episodes");
  }
  MetricsReport report;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (traces[i].episode_id != episodes[i].episode_id) {
      throw LengthMismatch("trace " + traces[i].episode_id + " does not match episode " + episodes[i].episode_id);
    }
    const auto it = maps.find(episodes[i].scene_id);
    if (it == maps.end() || !it->second) throw ValidationError("no map for scene " + episodes[i].scene_id);
    report.episodes.push_back(episode_metrics(traces[i], episodes[i], *it->second, success_radius));
  }
  std::sort(report.episodes.begin(), report.episodes.end(), row_order);
  report.aggregate = aggregate(report.episodes);
  return report;
}

MetricsReport compute_metrics(const std::vector<EpisodeTrace>& traces, const std::vector<Episode>& episodes,
                              const GridMap& map, double success_radius) {
  if (traces.size() != episodes.size()) {
    throw LengthMismatch(std::to_string(traces.size()) + " traces for " + std::to_string(episodes.size()) +
                         " episodes");
  }
  SceneMaps maps;
  auto shared = std::shared_ptr<const GridMap>(&map, [](const GridMap*) {});
  for (const Episode& e : episodes) maps[e.scene_id] = shared;
  return compute_metrics(traces, episodes, maps, success_radius);
}

}  // namespace physnav
