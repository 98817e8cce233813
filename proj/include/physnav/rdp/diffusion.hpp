#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "physnav/core/geometry.hpp"
#include "physnav/policy/nn.hpp"

namespace physnav {

/// T x 3 rows of body-frame increments (dx m, dy m, dyaw rad).
using ActionChunk = Mat;

inline constexpr int kDefaultHorizon = 8;
inline constexpr int kDefaultDenoiseSteps = 10;
inline constexpr double kDefaultBetaMin = 1e-4;
inline constexpr double kDefaultBetaMax = 0.2;

/// DDPM schedule, 1-based in k (index 0 unused). The reverse update is
///   a_{k-1} = coef_scale_k * (a_k - coef_noise_k * eps_hat + N(0, mu_k^2))
/// with coef_scale = 1 / sqrt(alpha), coef_noise = beta / sqrt(1 - alpha_bar)
/// and mu = sqrt(alpha) * sigma, sigma^2 the posterior variance
/// beta * (1 - alpha_bar_{k-1}) / (1 - alpha_bar_k), so mu_1 = 0.
struct NoiseSchedule {
  int steps = 0;
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<double> alpha_bar;
  std::vector<double> coef_scale;
  std::vector<double> coef_noise;
  std::vector<double> mu;
};

/// Linear betas from beta_min to beta_max. Throws InvalidRange.
NoiseSchedule make_schedule(int steps = kDefaultDenoiseSteps, double beta_min = kDefaultBetaMin,
                            double beta_max = kDefaultBetaMax);

/// sqrt(alpha_bar_k) a0 + sqrt(1 - alpha_bar_k) eps. Throws ShapeMismatch
/// and InvalidRange.
ActionChunk add_noise(const ActionChunk& a0, int k, const ActionChunk& eps, const NoiseSchedule& sched);

/// One reverse step. The Gaussian term is drawn from rng_seed; pass
/// stochastic = false to drop it. Throws ShapeMismatch and InvalidRange.
ActionChunk denoise_step(const ActionChunk& a_k, int k, const ActionChunk& eps_hat, const NoiseSchedule& sched,
                         std::uint64_t rng_seed, bool stochastic = true);

/// Predicts the noise in a_k at step k under a condition vector.
using NoisePredictor = std::function<ActionChunk(const Vec& cond, const ActionChunk& a_k, int k)>;

/// Standard normal T x 3 draw.
ActionChunk gaussian_chunk(int horizon, std::uint64_t seed);

/// Starts from a unit Gaussian a_K and denoises for k = K..1.
ActionChunk sample_chunk(const Vec& cond, const NoisePredictor& predictor, const NoiseSchedule& sched,
                         std::uint64_t rng_seed, int horizon = kDefaultHorizon, bool stochastic = true);

inline constexpr double kStopLossWeight = 10.0;

struct RdpLoss {
  double value = 0.0;
  ActionChunk grad_eps_hat;
  Vec grad_stop_pred;
};

/// MSE(eps, eps_hat) + lambda MSE(stop_pred, stop_gt) with its analytic
/// gradient. Throws ShapeMismatch, InvalidRange for stop values outside [0, 1].
RdpLoss rdp_loss(const ActionChunk& eps, const ActionChunk& eps_hat, const Vec& stop_pred, const Vec& stop_gt,
                 double lambda = kStopLossWeight);

inline constexpr double kStopMotionThreshold = 0.1;
inline constexpr double kStopProgressThreshold = 0.8;

/// True when every entry of the chunk is below 0.1 in magnitude or the stop
/// progress exceeds 0.8.
bool stop_gate(const ActionChunk& chunk, double stop_progress);

/// Covered fraction of the polyline's length at each vertex: 0 at the first,
/// 1 at the last. A zero-length path yields all ones.
std::vector<double> stop_progress(std::span<const Vec2> path);
/// Covered fraction at the point's projection onto the polyline.
double stop_progress_at(std::span<const Vec2> path, Vec2 p);

}  // namespace physnav
