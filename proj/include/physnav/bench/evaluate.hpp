#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "physnav/bench/metrics.hpp"
#include "physnav/bench/runner.hpp"
#include "physnav/policy/policy.hpp"

namespace physnav {

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

/// Named policy constructors. Each worker builds its own instance.
class PolicyRegistry {
 public:
  void add(std::string name, PolicyFactory factory);
  bool contains(const std::string& name) const { return factories_.count(name) > 0; }
  /// Throws ValidationError naming the registered policies.
  const PolicyFactory& factory(const std::string& name) const;
  std::unique_ptr<Policy> create(const std::string& name) const { return factory(name)(); }
  std::vector<std::string> names() const;

  /// random, oracle, seq2seq, cma, rdp, vlmaps. Learned policies load
  /// `<weights_dir>/<name>.pnwb` when it exists and otherwise use seeded
  /// untrained weights.
  static PolicyRegistry builtin(const std::string& weights_dir = "", std::uint64_t weight_seed = 7);

 private:
  std::map<std::string, PolicyFactory> factories_;
};

/// Seed of one episode's run, independent of order and worker count.
std::uint64_t episode_seed(std::uint64_t run_seed, const Episode& episode);

struct EvalResult {
  /// In dataset order.
  std::vector<EpisodeTrace> traces;
  MetricsReport report;
};

/// Runs every episode on its scene with `workers` threads (at least one).
/// Output does not depend on the worker count. Throws ValidationError for
/// episodes whose scene is missing.
EvalResult evaluate(const std::vector<Episode>& episodes, const SceneMaps& maps, const PolicyFactory& factory,
                    const RunOptions& options, int workers = 1);

}  // namespace physnav
