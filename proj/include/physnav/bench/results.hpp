#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "physnav/bench/metrics.hpp"

namespace physnav {

inline constexpr int kResultsSchemaVersion = 1;

/// What a result file was produced from.
struct RunInfo {
  std::string policy;
  std::string controller;
  std::string profile;
  std::string lighting;
  std::uint64_t seed = 0;
  int max_steps = 0;
  double success_radius = 0.0;

  friend bool operator==(const RunInfo&, const RunInfo&) = default;
};

struct ResultSummary {
  RunInfo run;
  AggregateMetrics metrics;
};

/// One row per episode: ids, steps, terminal event, TL, NE, success,
/// oracle_success, SPL, fell, stuck and the failure reason.
std::string metrics_to_csv(const MetricsReport& report);

std::string summary_to_json(const ResultSummary& summary);
/// Throws ParseError on malformed input and ValidationError when the
/// schema version differs from kResultsSchemaVersion.
ResultSummary summary_from_json(std::string_view text);

/// Aligned text table with columns Policy Controller Profile Lighting
/// TL NE FR StR OS SR SPL, two decimals.
std::string format_table(const std::vector<ResultSummary>& rows);

/// Rows sorted by (policy, profile, controller, lighting). Throws
/// ValidationError when two summaries share a key.
std::vector<ResultSummary> merge_summaries(std::vector<ResultSummary> rows);

std::string summaries_to_json(const std::vector<ResultSummary>& rows);

}  // namespace physnav
