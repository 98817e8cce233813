#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "physnav/policy/features.hpp"
#include "physnav/policy/nn.hpp"
#include "physnav/policy/policy.hpp"
#include "physnav/policy/weights.hpp"

namespace physnav {

struct CmaWeights {
  GruWeights first;
  Linear query_instruction;
  Linear query_visual;
  Linear query_depth;
  GruWeights second;
  Linear head;

  static CmaWeights random(std::uint64_t seed, const FeatureConfig& cfg = {}, int hidden = 64);
  WeightSet to_weight_set() const;
  static CmaWeights from_weight_set(const WeightSet& set);
};

struct CmaState {
  Vec first;
  Vec second;
};

CmaState zero_state(const CmaWeights& weights);

struct CmaOutput {
  DiscreteAction action;
  Vec probs;
  CmaState state;
  Vec attended_instruction;
  Vec attended_visual;
  Vec attended_depth;
};

/// h1' = GRU1([V, D, a_prev], h1); I^ = Attn(I, h1'), V^ = Attn(V, h1'),
/// D^ = Attn(D, h1') with V and D viewed as per-sector tokens;
/// h2' = GRU2([I^, V^, D^, a_prev, h1'], h2); action from W_a h2' + b_a.
/// Throws DimensionMismatch.
CmaOutput cma_step(const FeatureBundle& features, const CmaState& state, const CmaWeights& weights,
                   const FeatureConfig& cfg = {});

class CmaPolicy : public Policy {
 public:
  explicit CmaPolicy(std::shared_ptr<const CmaWeights> weights, FeatureConfig cfg = {});
  std::string name() const override { return "cma"; }
  void reset(const Episode& episode, const GridMap& map, std::uint64_t seed) override;
  Decision decide(const StepContext& ctx) override;

 private:
  std::shared_ptr<const CmaWeights> weights_;
  FeatureConfig cfg_;
  Mat instruction_;
  CmaState state_;
  std::optional<ActionKind> prev_;
};

}  // namespace physnav
