#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "physnav/bench/sampling.hpp"
#include "physnav/bench/trace.hpp"
#include "physnav/world/grid_map.hpp"
#include "physnav/world/random_map.hpp"

namespace physnav {

struct GenerateConfig {
  std::string map;
  std::uint64_t seed = 0;
  int count = 50;
  std::string out;
  SamplingConfig sampling;
};

struct EvalConfig {
  /// One map serves every scene; with several, scenes are matched by file stem.
  std::vector<std::string> maps;
  std::string dataset;
  std::string policy = "oracle";
  std::string controller = "flash";
  std::string profile = "flash";
  std::string lighting = "DL5000";
  std::uint64_t seed = 0;
  int max_steps = 200;
  double success_radius = 3.0;
  int workers = 1;
  std::string out;
  std::string weights_dir;
  bool write_traces = true;
};

struct ReplayConfig {
  std::string trace;
  std::string map;
};

struct ReportConfig {
  std::vector<std::string> inputs;
  std::string out;
};

struct MakeMapConfig {
  std::uint64_t seed = 0;
  RandomMapConfig map;
  std::string out;
};

/// Writes <out>/episodes.json and <out>/manifest.json (seed, config hash,
/// per-split counts). Nothing is written if the map fails to load.
void cmd_generate(const GenerateConfig& config, std::ostream& log);

/// Writes <out>/results.csv, <out>/summary.json, <out>/table.txt and one
/// trace per episode under <out>/traces/.
void cmd_eval(const EvalConfig& config, std::ostream& log);

/// One ASCII frame per step: the map with the agent drawn as an arrow, the
/// step's action and any events. Ends with the trace length.
std::string render_replay(const EpisodeTrace& trace, const GridMap& map);
void cmd_replay(const ReplayConfig& config, std::ostream& out);

/// Merges result summaries into one table keyed by (policy, profile,
/// controller, lighting), printed and, with `out`, written as
/// <out>/report.json and <out>/report.txt.
void cmd_report(const ReportConfig& config, std::ostream& out);

void cmd_make_map(const MakeMapConfig& config, std::ostream& log);

/// Parses arguments (flags > PHYSNAV_* environment > --config file >
/// defaults), logs the resolved configuration to `err` and dispatches.
/// Returns the process exit code: 0 ok, 1 runtime failure, 2 bad usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace physnav
