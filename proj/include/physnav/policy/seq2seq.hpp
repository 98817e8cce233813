#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "physnav/policy/features.hpp"
#include "physnav/policy/nn.hpp"
#include "physnav/policy/policy.hpp"
#include "physnav/policy/weights.hpp"

namespace physnav {

/// Action head order: stop, forward, turn_left, turn_right.
inline constexpr int kActionCount = 4;
DiscreteAction action_from_index(int index);

struct Seq2SeqWeights {
  Linear visual;
  Linear depth;
  Linear instruction;
  GruWeights gru;
  Linear head;

  static Seq2SeqWeights random(std::uint64_t seed, const FeatureConfig& cfg = {}, int hidden = 64, int embed = 32);
  WeightSet to_weight_set() const;
  static Seq2SeqWeights from_weight_set(const WeightSet& set);
  int hidden_size() const { return gru.hidden_size(); }
};

struct Seq2SeqOutput {
  DiscreteAction action;
  Vec probs;
  Vec hidden;
};

/// h' = GRU([P_v V, P_d D, P_i mean(I)], h); action = argmax softmax(W_a h' + b_a).
/// Throws DimensionMismatch.
Seq2SeqOutput seq2seq_step(const FeatureBundle& features, const Vec& h, const Seq2SeqWeights& weights);

class Seq2SeqPolicy : public Policy {
 public:
  explicit Seq2SeqPolicy(std::shared_ptr<const Seq2SeqWeights> weights, FeatureConfig cfg = {});
  std::string name() const override { return "seq2seq"; }
  void reset(const Episode& episode, const GridMap& map, std::uint64_t seed) override;
  Decision decide(const StepContext& ctx) override;

 private:
  std::shared_ptr<const Seq2SeqWeights> weights_;
  FeatureConfig cfg_;
  Mat instruction_;
  Vec hidden_;
  std::optional<ActionKind> prev_;
};

}  // namespace physnav
