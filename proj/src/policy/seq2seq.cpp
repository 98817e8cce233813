#include "physnav/policy/seq2seq.hpp"

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"

namespace physnav {

DiscreteAction action_from_index(int index) {
  switch (index) {
    case 0: return DiscreteAction::stop();
    case 1: return DiscreteAction::forward();
    case 2: return DiscreteAction::turn_left();
    case 3: return DiscreteAction::turn_right();
    default: throw ValidationError("action index out of range: " + std::to_string(index));
  }
}

Seq2SeqWeights Seq2SeqWeights::random(std::uint64_t seed, const FeatureConfig& cfg, int hidden, int embed) {
  Seq2SeqWeights w;
  w.visual = random_linear(cfg.visual_size(), embed, derive_seed(seed, {0}));
  w.depth = random_linear(cfg.depth_size(), embed, derive_seed(seed, {1}));
  w.instruction = random_linear(cfg.token_dim, embed, derive_seed(seed, {2}));
  w.gru = random_gru(3 * embed, hidden, derive_seed(seed, {3}));
  w.head = random_linear(hidden, kActionCount, derive_seed(seed, {4}));
  return w;
}

WeightSet Seq2SeqWeights::to_weight_set() const {
  WeightSet s;
  s.put_linear("visual", visual);
  s.put_linear("depth", depth);
  s.put_linear("instruction", instruction);
  s.put_gru("gru", gru);
  s.put_linear("head", head);
  return s;
}

Seq2SeqWeights Seq2SeqWeights::from_weight_set(const WeightSet& s) {
  return {s.get_linear("visual"), s.get_linear("depth"), s.get_linear("instruction"), s.get_gru("gru"),
          s.get_linear("head")};
}

Seq2SeqOutput seq2seq_step(const FeatureBundle& f, const Vec& h, const Seq2SeqWeights& w) {
  if (f.instruction.rows() == 0) throw DimensionMismatch("instruction has no tokens");
  const Vec pooled = f.instruction.colwise().mean().transpose();
  const Vec pv = w.visual(f.visual);
  const Vec pd = w.depth(f.depth);
  const Vec pi = w.instruction(pooled);
  Vec x(pv.size() + pd.size() + pi.size());
  x << pv, pd, pi;

  Seq2SeqOutput out;
  out.hidden = gru_step(x, h, w.gru);
  out.probs = softmax(w.head(out.hidden));
  out.action = action_from_index(argmax(out.probs));
  return out;
}

Seq2SeqPolicy::Seq2SeqPolicy(std::shared_ptr<const Seq2SeqWeights> weights, FeatureConfig cfg)
    : weights_(std::move(weights)), cfg_(cfg) {}

void Seq2SeqPolicy::reset(const Episode& episode, const GridMap&, std::uint64_t) {
  instruction_ = instruction_features(episode.instruction_text, cfg_);
  hidden_ = Vec::Zero(weights_->hidden_size());
  prev_.reset();
}

Decision Seq2SeqPolicy::decide(const StepContext& ctx) {
  const FeatureBundle f = featurize(ctx.observation, ctx.map, instruction_, prev_, cfg_);
  const Seq2SeqOutput out = seq2seq_step(f, hidden_, *weights_);
  hidden_ = out.hidden;
  prev_ = out.action.kind;
  return out.action.kind == ActionKind::Stop ? Decision::stop() : Decision::act(out.action);
}

}  // namespace physnav
