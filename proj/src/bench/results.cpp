#include "physnav/bench/results.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include "json.hpp"
#include "physnav/core/errors.hpp"
#include "physnav/core/text.hpp"

namespace physnav {

namespace {

using Json = nlohmann::ordered_json;

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json summary_json(const ResultSummary& s) {
  Json j;
  j["schema_version"] = kResultsSchemaVersion;
  j["policy"] = s.run.policy;
  j["controller"] = s.run.controller;
  j["profile"] = s.run.profile;
  j["lighting"] = s.run.lighting;
  j["seed"] = s.run.seed;
  j["max_steps"] = s.run.max_steps;
  j["success_radius"] = s.run.success_radius;
  j["episodes"] = s.metrics.episodes;
  j["metrics"] = {{"TL", s.metrics.tl},  {"NE", s.metrics.ne}, {"FR", s.metrics.fr},  {"StR", s.metrics.str},
                  {"OS", s.metrics.os},  {"SR", s.metrics.sr}, {"SPL", s.metrics.spl}};
  return j;
}

ResultSummary summary_from(const Json& j) {
  if (!j.is_object() || !j.contains("schema_version")) throw ParseError("result summary has no schema_version");
  const int version = j.at("schema_version").get<int>();
  if (version != kResultsSchemaVersion) {
    throw ValidationError("result schema version " + std::to_string(version) + ", expected " +
                          std::to_string(kResultsSchemaVersion));
  }
  ResultSummary s;
  s.run.policy = j.at("policy").get<std::string>();
  s.run.controller = j.at("controller").get<std::string>();
  s.run.profile = j.at("profile").get<std::string>();
  s.run.lighting = j.at("lighting").get<std::string>();
  s.run.seed = j.at("seed").get<std::uint64_t>();
  s.run.max_steps = j.at("max_steps").get<int>();
  s.run.success_radius = j.at("success_radius").get<double>();
  s.metrics.episodes = j.at("episodes").get<int>();
  const Json& m = j.at("metrics");
  s.metrics.tl = m.at("TL").get<double>();
  s.metrics.ne = m.at("NE").get<double>();
  s.metrics.fr = m.at("FR").get<double>();
  s.metrics.str = m.at("StR").get<double>();
  s.metrics.os = m.at("OS").get<double>();
  s.metrics.sr = m.at("SR").get<double>();
  s.metrics.spl = m.at("SPL").get<double>();
  return s;
}

auto key(const ResultSummary& s) { return std::tie(s.run.policy, s.run.profile, s.run.controller, s.run.lighting); }

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string metrics_to_csv(const MetricsReport& report) {
  std::string out =
      "episode_id,scene_id,steps,terminal,TL,NE,success,oracle_success,SPL,fell,stuck,failure_reason\n";
  for (const EpisodeMetrics& m : report.episodes) {
    out += csv_field(m.episode_id) + "," + csv_field(m.scene_id) + "," + std::to_string(m.steps) + "," +
           m.terminal + "," + format_double(m.tl) + "," + format_double(m.ne) + "," + std::to_string(m.success) +
           "," + std::to_string(m.oracle_success) + "," + format_double(m.spl) + "," + std::to_string(m.fell) + "," +
           std::to_string(m.stuck) + "," + csv_field(m.failure_reason) + "\n";
  }
  return out;
}

std::string summary_to_json(const ResultSummary& summary) { return summary_json(summary).dump(2) + "\n"; }

ResultSummary summary_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad result summary: ") + e.what());
  }
  try {
    return summary_from(j);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad result summary: ") + e.what());
  }
}

std::string format_table(const std::vector<ResultSummary>& rows) {
  const std::vector<std::string> header = {"Policy", "Controller", "Profile", "Lighting", "TL",  "NE",
                                           "FR",     "StR",        "OS",      "SR",       "SPL"};
  std::vector<std::vector<std::string>> cells{header};
  for (const ResultSummary& r : rows) {
    const AggregateMetrics& m = r.metrics;
    cells.push_back({r.run.policy, r.run.controller, r.run.profile, r.run.lighting, fixed2(m.tl), fixed2(m.ne),
                     fixed2(m.fr), fixed2(m.str), fixed2(m.os), fixed2(m.sr), fixed2(m.spl)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string pad(width[c] - row[c].size(), ' ');
      // Names left-aligned, numbers right-aligned.
      line += c < 4 ? row[c] + pad : pad + row[c];
      if (c + 1 < row.size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::vector<ResultSummary> merge_summaries(std::vector<ResultSummary> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultSummary& a, const ResultSummary& b) {
    return key(a) < key(b);
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (key(rows[i]) == key(rows[i - 1])) {
      throw ValidationError("two results share policy=" + rows[i].run.policy + " profile=" + rows[i].run.profile +
                            " controller=" + rows[i].run.controller + " lighting=" + rows[i].run.lighting);
    }
  }
  return rows;
}

std::string summaries_to_json(const std::vector<ResultSummary>& rows) {
  Json arr = Json::array();
  for (const ResultSummary& r : rows) arr.push_back(summary_json(r));
  return arr.dump(2) + "\n";
}

}  // namespace physnav
