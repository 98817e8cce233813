#pragma once

#include <cstdint>
#include <deque>
#include <memory>

#include "physnav/control/agent_body.hpp"
#include "physnav/policy/features.hpp"
#include "physnav/policy/nn.hpp"
#include "physnav/policy/policy.hpp"
#include "physnav/policy/weights.hpp"
#include "physnav/rdp/diffusion.hpp"

namespace physnav {

inline constexpr int kPreviousActions = 4;
inline constexpr int kDefaultExecSteps = 4;

struct RdpWeights {
  /// [V, D] -> query over instruction tokens (g1).
  Linear obs_query;
  /// Mean instruction token -> query over per-sector observation tokens (g2).
  Linear instruction_query;
  /// Per-sector (visual slots, mean depth, min depth) -> token.
  Linear obs_token;
  /// h_t = GRU([V_c, RC, PA], h_{t-1}).
  GruWeights history;
  Linear denoise_hidden;
  Linear denoise_out;
  Linear stop_hidden;
  Linear stop_out;

  int condition_size() const;
  static RdpWeights random(std::uint64_t seed, const FeatureConfig& cfg = {}, int hidden = 32,
                           int horizon = kDefaultHorizon);
  WeightSet to_weight_set() const;
  static RdpWeights from_weight_set(const WeightSet& set);
};

/// `to` expressed in the frame of `from`.
Pose2 relative_pose(const Pose2& from, const Pose2& to);

/// RC: current pose relative to the start pose.
Vec relative_coordinates(const Pose2& start, const Pose2& current);
/// PA: up to four earlier poses (most recent first) relative to the current
/// pose, three entries each, zero-padded to 12.
Vec previous_actions(const std::deque<Pose2>& history, const Pose2& current);

/// One GRU step over [V_c, RC, PA]. Throws DimensionMismatch.
Vec update_history(const Vec& h_prev, const Vec& visual, const Vec& rc, const Vec& pa, const GruWeights& gru);

/// c_t = [g1, g2, h_t, RC, PA] with g1 = Attn(W_q [V, D], I, I) and
/// g2 = Attn(W_i mean(I), O, O), O the per-sector observation tokens.
Vec rdp_condition(const FeatureBundle& features, const Vec& h, const Vec& rc, const Vec& pa,
                  const RdpWeights& weights, const FeatureConfig& cfg = {});

/// Two-layer perceptron over [c_t, flattened a_k, sinusoidal embedding of k].
NoisePredictor mlp_noise_predictor(std::shared_ptr<const RdpWeights> weights);

/// Sigmoid-bounded stop progress estimate from c_t.
double stop_head(const Vec& cond, const RdpWeights& weights);

/// Executes the first n_exec rows of the chunk as body-frame moves
/// (rotate-then-translate per waypoint, then the yaw increment) and
/// discards the rest. Throws InvalidRange and AlreadyFallen.
PoseState execute_chunk(const ActionChunk& chunk, int n_exec, AgentBody& body);

struct RdpConfig {
  int horizon = kDefaultHorizon;
  int exec_steps = kDefaultExecSteps;
  int denoise_steps = kDefaultDenoiseSteps;
  /// Multiplies sampled chunks before execution and gating.
  double action_scale = 0.25;
  FeatureConfig features;
};

/// Recurrent diffusion policy: samples a waypoint chunk per decision,
/// executes its first rows and stops through stop_gate.
class RdpPolicy : public Policy {
 public:
  explicit RdpPolicy(std::shared_ptr<const RdpWeights> weights, RdpConfig config = {},
                     NoisePredictor predictor = {});

  std::string name() const override { return "rdp"; }
  void reset(const Episode& episode, const GridMap& map, std::uint64_t seed) override;
  Decision decide(const StepContext& ctx) override;

  double last_stop_progress() const { return last_progress_; }

 private:
  std::shared_ptr<const RdpWeights> weights_;
  RdpConfig config_;
  NoisePredictor predictor_;
  NoiseSchedule schedule_;
  Mat instruction_;
  Pose2 start_;
  Vec hidden_;
  std::deque<Pose2> history_;
  double last_progress_ = 0.0;
};

}  // namespace physnav
