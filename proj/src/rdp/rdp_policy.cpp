#include "physnav/rdp/rdp_policy.hpp"

#include <cmath>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"

namespace physnav {

namespace {

constexpr int kStepEmbedding = 8;

Vec step_embedding(int k) {
  Vec e(kStepEmbedding);
  for (int j = 0; j < kStepEmbedding / 2; ++j) {
    const double freq = std::pow(10.0, -static_cast<double>(j) / 2.0);
    e(2 * j) = std::sin(k * freq);
    e(2 * j + 1) = std::cos(k * freq);
  }
  return e;
}

Vec concat(std::initializer_list<const Vec*> parts) {
  Eigen::Index n = 0;
  for (const Vec* p : parts) n += p->size();
  Vec out(n);
  Eigen::Index at = 0;
  for (const Vec* p : parts) {
    out.segment(at, p->size()) = *p;
    at += p->size();
  }
  return out;
}

}  // namespace

int RdpWeights::condition_size() const {
  return obs_query.out() + obs_token.out() + history.hidden_size() + 3 + 3 * kPreviousActions;
}

RdpWeights RdpWeights::random(std::uint64_t seed, const FeatureConfig& cfg, int hidden, int horizon) {
  RdpWeights w;
  const int token = cfg.token_dim;
  w.obs_query = random_linear(cfg.visual_size() + cfg.depth_size(), token, derive_seed(seed, {1}));
  w.instruction_query = random_linear(token, token, derive_seed(seed, {2}));
  w.obs_token = random_linear(cfg.visual_slots + 2, token, derive_seed(seed, {3}));
  w.history = random_gru(cfg.visual_size() + 3 + 3 * kPreviousActions, hidden, derive_seed(seed, {4}));
  const int cond = w.condition_size();
  w.denoise_hidden = random_linear(cond + 3 * horizon + kStepEmbedding, 128, derive_seed(seed, {5}));
  w.denoise_out = random_linear(128, 3 * horizon, derive_seed(seed, {6}));
  w.stop_hidden = random_linear(cond, 32, derive_seed(seed, {7}));
  w.stop_out = random_linear(32, 1, derive_seed(seed, {8}));
  return w;
}

WeightSet RdpWeights::to_weight_set() const {
  WeightSet s;
  s.put_linear("obs_query", obs_query);
  s.put_linear("instruction_query", instruction_query);
  s.put_linear("obs_token", obs_token);
  s.put_gru("history", history);
  s.put_linear("denoise_hidden", denoise_hidden);
  s.put_linear("denoise_out", denoise_out);
  s.put_linear("stop_hidden", stop_hidden);
  s.put_linear("stop_out", stop_out);
  return s;
}

RdpWeights RdpWeights::from_weight_set(const WeightSet& set) {
  RdpWeights w;
  w.obs_query = set.get_linear("obs_query");
  w.instruction_query = set.get_linear("instruction_query");
  w.obs_token = set.get_linear("obs_token");
  w.history = set.get_gru("history");
  w.denoise_hidden = set.get_linear("denoise_hidden");
  w.denoise_out = set.get_linear("denoise_out");
  w.stop_hidden = set.get_linear("stop_hidden");
  w.stop_out = set.get_linear("stop_out");
  if (w.denoise_hidden.in() <= w.condition_size() + kStepEmbedding ||
      (w.denoise_hidden.in() - w.condition_size() - kStepEmbedding) != w.denoise_out.out() ||
      w.stop_hidden.in() != w.condition_size() || w.stop_out.out() != 1) {
    throw ValidationError("rdp weights have inconsistent shapes");
  }
  return w;
}

Pose2 relative_pose(const Pose2& from, const Pose2& to) {
  const double c = std::cos(from.heading);
  const double s = std::sin(from.heading);
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  return {c * dx + s * dy, -s * dx + c * dy, normalize_angle(to.heading - from.heading)};
}

Vec relative_coordinates(const Pose2& start, const Pose2& current) {
  const Pose2 r = relative_pose(start, current);
  Vec out(3);
  out << r.x, r.y, r.heading;
  return out;
}

Vec previous_actions(const std::deque<Pose2>& history, const Pose2& current) {
  Vec out = Vec::Zero(3 * kPreviousActions);
  int i = 0;
  for (auto it = history.rbegin(); it != history.rend() && i < kPreviousActions; ++it, ++i) {
    const Pose2 r = relative_pose(current, *it);
    out.segment(3 * i, 3) << r.x, r.y, r.heading;
  }
  return out;
}

Vec update_history(const Vec& h_prev, const Vec& visual, const Vec& rc, const Vec& pa, const GruWeights& gru) {
  return gru_step(concat({&visual, &rc, &pa}), h_prev, gru);
}

Vec rdp_condition(const FeatureBundle& features, const Vec& h, const Vec& rc, const Vec& pa,
                  const RdpWeights& weights, const FeatureConfig& cfg) {
  const Vec obs = concat({&features.visual, &features.depth});
  const Vec g1 = scaled_dot_attention(weights.obs_query(obs), features.instruction, features.instruction).output;

  Mat tokens(cfg.sectors, weights.obs_token.out());
  for (int s = 0; s < cfg.sectors; ++s) {
    Vec raw(cfg.visual_slots + 2);
    raw.head(cfg.visual_slots) = features.visual.segment(s * cfg.visual_slots, cfg.visual_slots);
    raw.tail(2) = features.depth.segment(2 * s, 2);
    tokens.row(s) = weights.obs_token(raw).transpose();
  }
  const Vec mean_instruction = features.instruction.colwise().mean().transpose();
  const Vec g2 = scaled_dot_attention(weights.instruction_query(mean_instruction), tokens, tokens).output;
  return concat({&g1, &g2, &h, &rc, &pa});
}

NoisePredictor mlp_noise_predictor(std::shared_ptr<const RdpWeights> weights) {
  return [weights](const Vec& cond, const ActionChunk& a_k, int k) {
    const Eigen::Index n = a_k.size();
    if (weights->denoise_out.out() != n) throw ShapeMismatch("chunk size does not match the predictor");
    Vec flat(n);
    for (Eigen::Index r = 0; r < a_k.rows(); ++r) flat.segment(3 * r, 3) = a_k.row(r).transpose();
    const Vec step = step_embedding(k);
    const Vec hidden = weights->denoise_hidden(concat({&cond, &flat, &step})).array().tanh().matrix();
    const Vec out = weights->denoise_out(hidden);
    ActionChunk eps(a_k.rows(), 3);
    for (Eigen::Index r = 0; r < a_k.rows(); ++r) eps.row(r) = out.segment(3 * r, 3).transpose();
    return eps;
  };
}

double stop_head(const Vec& cond, const RdpWeights& weights) {
  const Vec hidden = weights.stop_hidden(cond).cwiseMax(0.0);
  return sigmoid(weights.stop_out(hidden)(0));
}

PoseState execute_chunk(const ActionChunk& chunk, int n_exec, AgentBody& body) {
  if (chunk.cols() != 3) throw ShapeMismatch("action chunks have three columns");
  if (n_exec < 1 || n_exec > chunk.rows()) {
    throw InvalidRange("n_exec must be in 1.." + std::to_string(chunk.rows()));
  }
  for (int r = 0; r < n_exec; ++r) {
    const MotionOutcome o = body.move_relative({chunk(r, 0), chunk(r, 1), chunk(r, 2)});
    if (o.fell || o.blocked) break;
  }
  return body.pose();
}

RdpPolicy::RdpPolicy(std::shared_ptr<const RdpWeights> weights, RdpConfig config, NoisePredictor predictor)
    : weights_(std::move(weights)),
      config_(config),
      predictor_(predictor ? std::move(predictor) : mlp_noise_predictor(weights_)),
      schedule_(make_schedule(config.denoise_steps)) {
  if (config_.exec_steps < 1 || config_.exec_steps > config_.horizon) {
    throw InvalidRange("exec_steps must be in 1..horizon");
  }
}

void RdpPolicy::reset(const Episode& episode, const GridMap&, std::uint64_t) {
  instruction_ = instruction_features(episode.instruction_text, config_.features);
  start_ = episode.start;
  hidden_ = Vec::Zero(weights_->history.hidden_size());
  history_.clear();
  last_progress_ = 0.0;
}

Decision RdpPolicy::decide(const StepContext& ctx) {
  const Pose2 current = ctx.pose.planar();
  const FeatureBundle f = featurize(ctx.observation, ctx.map, instruction_, std::nullopt, config_.features);
  const Vec rc = relative_coordinates(start_, current);
  const Vec pa = previous_actions(history_, current);
  hidden_ = update_history(hidden_, f.visual, rc, pa, weights_->history);
  const Vec cond = rdp_condition(f, hidden_, rc, pa, *weights_, config_.features);

  ActionChunk chunk = config_.action_scale * sample_chunk(cond, predictor_, schedule_, ctx.seed, config_.horizon);
  for (Eigen::Index r = 0; r < chunk.rows(); ++r) chunk(r, 2) = normalize_angle(chunk(r, 2));
  last_progress_ = stop_head(cond, *weights_);

  history_.push_back(current);
  if (history_.size() > kPreviousActions) history_.pop_front();

  if (stop_gate(chunk, last_progress_)) return Decision::stop();
  std::vector<Pose2> offsets;
  for (int r = 0; r < config_.exec_steps; ++r) offsets.push_back({chunk(r, 0), chunk(r, 1), chunk(r, 2)});
  return Decision::move_relative(std::move(offsets), "chunk");
}

}  // namespace physnav
