#include "physnav/policy/cma.hpp"

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/policy/seq2seq.hpp"

namespace physnav {

namespace {

// Row s holds the features of sector s.
Mat as_tokens(const Vec& flat, int sectors) {
  if (sectors <= 0 || flat.size() % sectors != 0) throw DimensionMismatch("feature size is not a multiple of sectors");
  const Eigen::Index width = flat.size() / sectors;
  Mat m(sectors, width);
  for (int s = 0; s < sectors; ++s) m.row(s) = flat.segment(s * width, width).transpose();
  return m;
}

}  // namespace

CmaWeights CmaWeights::random(std::uint64_t seed, const FeatureConfig& cfg, int hidden) {
  CmaWeights w;
  const int first_in = cfg.visual_size() + cfg.depth_size() + cfg.action_dim;
  w.first = random_gru(first_in, hidden, derive_seed(seed, {0}));
  w.query_instruction = random_linear(hidden, cfg.token_dim, derive_seed(seed, {1}));
  w.query_visual = random_linear(hidden, cfg.visual_slots, derive_seed(seed, {2}));
  w.query_depth = random_linear(hidden, 2, derive_seed(seed, {3}));
  const int second_in = cfg.token_dim + cfg.visual_slots + 2 + cfg.action_dim + hidden;
  w.second = random_gru(second_in, hidden, derive_seed(seed, {4}));
  w.head = random_linear(hidden, kActionCount, derive_seed(seed, {5}));
  return w;
}

WeightSet CmaWeights::to_weight_set() const {
  WeightSet s;
  s.put_gru("first", first);
  s.put_linear("query_instruction", query_instruction);
  s.put_linear("query_visual", query_visual);
  s.put_linear("query_depth", query_depth);
  s.put_gru("second", second);
  s.put_linear("head", head);
  return s;
}

CmaWeights CmaWeights::from_weight_set(const WeightSet& s) {
  return {s.get_gru("first"),        s.get_linear("query_instruction"), s.get_linear("query_visual"),
          s.get_linear("query_depth"), s.get_gru("second"),              s.get_linear("head")};
}

CmaState zero_state(const CmaWeights& w) {
  return {Vec::Zero(w.first.hidden_size()), Vec::Zero(w.second.hidden_size())};
}

CmaOutput cma_step(const FeatureBundle& f, const CmaState& state, const CmaWeights& w, const FeatureConfig& cfg) {
  Vec x1(f.visual.size() + f.depth.size() + f.prev_action.size());
  x1 << f.visual, f.depth, f.prev_action;
  CmaOutput out;
  out.state.first = gru_step(x1, state.first, w.first);
  const Vec& h1 = out.state.first;

  out.attended_instruction = scaled_dot_attention(w.query_instruction(h1), f.instruction, f.instruction).output;
  const Mat visual_tokens = as_tokens(f.visual, cfg.sectors);
  out.attended_visual = scaled_dot_attention(w.query_visual(h1), visual_tokens, visual_tokens).output;
  const Mat depth_tokens = as_tokens(f.depth, cfg.sectors);
  out.attended_depth = scaled_dot_attention(w.query_depth(h1), depth_tokens, depth_tokens).output;

  Vec x2(out.attended_instruction.size() + out.attended_visual.size() + out.attended_depth.size() +
         f.prev_action.size() + h1.size());
  x2 << out.attended_instruction, out.attended_visual, out.attended_depth, f.prev_action, h1;
  out.state.second = gru_step(x2, state.second, w.second);
  out.probs = softmax(w.head(out.state.second));
  out.action = action_from_index(argmax(out.probs));
  return out;
}

CmaPolicy::CmaPolicy(std::shared_ptr<const CmaWeights> weights, FeatureConfig cfg)
    : weights_(std::move(weights)), cfg_(cfg) {}

void CmaPolicy::reset(const Episode& episode, const GridMap&, std::uint64_t) {
  instruction_ = instruction_features(episode.instruction_text, cfg_);
  state_ = zero_state(*weights_);
  prev_.reset();
}

Decision CmaPolicy::decide(const StepContext& ctx) {
  const FeatureBundle f = featurize(ctx.observation, ctx.map, instruction_, prev_, cfg_);
  const CmaOutput out = cma_step(f, state_, *weights_, cfg_);
  state_ = out.state;
  prev_ = out.action.kind;
  return out.action.kind == ActionKind::Stop ? Decision::stop() : Decision::act(out.action);
}

}  // namespace physnav
