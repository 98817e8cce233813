#include "physnav/bench/evaluate.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <thread>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/core/text.hpp"
#include "physnav/policy/baselines.hpp"
#include "physnav/policy/cma.hpp"
#include "physnav/policy/seq2seq.hpp"
#include "physnav/rdp/rdp_policy.hpp"
#include "physnav/semnav/navigator.hpp"

namespace physnav {

void PolicyRegistry::add(std::string name, PolicyFactory factory) { factories_[std::move(name)] = std::move(factory); }

const PolicyFactory& PolicyRegistry::factory(const std::string& name) const {
  const auto it = factories_.find(name);
  if (it == factories_.end()) {
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown policy '" + name + "'; registered: " + known);
  }
  return it->second;
}

std::vector<std::string> PolicyRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, f] : factories_) out.push_back(name);
  return out;
}

PolicyRegistry PolicyRegistry::builtin(const std::string& weights_dir, std::uint64_t weight_seed) {
  auto blob = [weights_dir](const std::string& name) -> std::optional<WeightSet> {
    if (weights_dir.empty()) return std::nullopt;
    const std::string path = (std::filesystem::path(weights_dir) / (name + ".pnwb")).string();
    if (!std::filesystem::exists(path)) return std::nullopt;
    return load_weights(path);
  };

  PolicyRegistry r;
  r.add("random", [] { return std::make_unique<RandomPolicy>(); });
  r.add("oracle", [] { return std::make_unique<OraclePolicy>(); });
  r.add("vlmaps", [] { return std::make_unique<VlmapsPolicy>(); });

  const auto s = blob("seq2seq");
  auto seq = std::make_shared<const Seq2SeqWeights>(s ? Seq2SeqWeights::from_weight_set(*s)
                                                      : Seq2SeqWeights::random(derive_seed(weight_seed, {1})));
  r.add("seq2seq", [seq] { return std::make_unique<Seq2SeqPolicy>(seq); });

  const auto c = blob("cma");
  auto cma = std::make_shared<const CmaWeights>(c ? CmaWeights::from_weight_set(*c)
                                                  : CmaWeights::random(derive_seed(weight_seed, {2})));
  r.add("cma", [cma] { return std::make_unique<CmaPolicy>(cma); });

  const auto d = blob("rdp");
  auto rdp = std::make_shared<const RdpWeights>(d ? RdpWeights::from_weight_set(*d)
                                                  : RdpWeights::random(derive_seed(weight_seed, {3})));
  r.add("rdp", [rdp] { return std::make_unique<RdpPolicy>(rdp); });
  return r;
}

std::uint64_t episode_seed(std::uint64_t run_seed, const Episode& episode) {
  return derive_seed(run_seed, {fnv1a64(episode.scene_id), fnv1a64(episode.episode_id)});
}

EvalResult evaluate(const std::vector<Episode>& episodes, const SceneMaps& maps, const PolicyFactory& factory,
                    const RunOptions& options, int workers) {
  for (const Episode& e : episodes) {
    const auto it = maps.find(e.scene_id);
    if (it == maps.end() || !it->second) throw ValidationError("no map for scene " + e.scene_id);
  }

  EvalResult result;
  result.traces.resize(episodes.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto work = [&] {
    try {
      const std::unique_ptr<Policy> policy = factory();
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= episodes.size()) break;
        RunOptions o = options;
        o.seed = episode_seed(options.seed, episodes[i]);
        result.traces[i] = run_episode(episodes[i], *maps.at(episodes[i].scene_id), *policy, o);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next = episodes.size();
    }
  };

  const int n = std::max(1, std::min<int>(workers, static_cast<int>(episodes.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  result.report = compute_metrics(result.traces, episodes, maps, options.success_radius);
  return result;
}

}  // namespace physnav
