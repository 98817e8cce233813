#include "physnav/rdp/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"

namespace physnav {

namespace {

void require_step(int k, const NoiseSchedule& sched) {
  if (k < 1 || k > sched.steps) {
    throw InvalidRange("denoising step " + std::to_string(k) + " outside 1.." + std::to_string(sched.steps));
  }
}

void require_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch(what);
}

}  // namespace

NoiseSchedule make_schedule(int steps, double beta_min, double beta_max) {
  if (steps < 1) throw InvalidRange("schedule needs at least one step");
  if (!(beta_min > 0.0 && beta_min <= beta_max && beta_max < 1.0)) {
    throw InvalidRange("betas must satisfy 0 < beta_min <= beta_max < 1");
  }
  NoiseSchedule s;
  s.steps = steps;
  const auto n = static_cast<std::size_t>(steps) + 1;
  s.beta.assign(n, 0.0);
  s.alpha.assign(n, 1.0);
  s.alpha_bar.assign(n, 1.0);
  s.coef_scale.assign(n, 1.0);
  s.coef_noise.assign(n, 0.0);
  s.mu.assign(n, 0.0);
  for (int k = 1; k <= steps; ++k) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(k - 1) / (steps - 1);
    s.beta[k] = beta_min + t * (beta_max - beta_min);
    s.alpha[k] = 1.0 - s.beta[k];
    s.alpha_bar[k] = s.alpha_bar[k - 1] * s.alpha[k];
    s.coef_scale[k] = 1.0 / std::sqrt(s.alpha[k]);
    s.coef_noise[k] = s.beta[k] / std::sqrt(1.0 - s.alpha_bar[k]);
    const double sigma2 = s.beta[k] * (1.0 - s.alpha_bar[k - 1]) / (1.0 - s.alpha_bar[k]);
    s.mu[k] = std::sqrt(s.alpha[k] * sigma2);
  }
  return s;
}

ActionChunk add_noise(const ActionChunk& a0, int k, const ActionChunk& eps, const NoiseSchedule& sched) {
  require_step(k, sched);
  require_same_shape(a0, eps, "noise shape differs from the chunk");
  return std::sqrt(sched.alpha_bar[k]) * a0 + std::sqrt(1.0 - sched.alpha_bar[k]) * eps;
}

ActionChunk gaussian_chunk(int horizon, std::uint64_t seed) {
  Rng rng(seed);
  ActionChunk out(horizon, 3);
  for (int r = 0; r < horizon; ++r) {
    for (int c = 0; c < 3; ++c) out(r, c) = rng.normal();
  }
  return out;
}

ActionChunk denoise_step(const ActionChunk& a_k, int k, const ActionChunk& eps_hat, const NoiseSchedule& sched,
                         std::uint64_t rng_seed, bool stochastic) {
  require_step(k, sched);
  require_same_shape(a_k, eps_hat, "predicted noise shape differs from the chunk");
  ActionChunk inner = a_k - sched.coef_noise[k] * eps_hat;
  if (stochastic && sched.mu[k] > 0.0) {
    inner += sched.mu[k] * gaussian_chunk(static_cast<int>(a_k.rows()), rng_seed);
  }
  return sched.coef_scale[k] * inner;
}

ActionChunk sample_chunk(const Vec& cond, const NoisePredictor& predictor, const NoiseSchedule& sched,
                         std::uint64_t rng_seed, int horizon, bool stochastic) {
  ActionChunk a = gaussian_chunk(horizon, derive_seed(rng_seed, {0}));
  for (int k = sched.steps; k >= 1; --k) {
    const ActionChunk eps_hat = predictor(cond, a, k);
    a = denoise_step(a, k, eps_hat, sched, derive_seed(rng_seed, {static_cast<std::uint64_t>(k)}), stochastic);
  }
  return a;
}

RdpLoss rdp_loss(const ActionChunk& eps, const ActionChunk& eps_hat, const Vec& stop_pred, const Vec& stop_gt,
                 double lambda) {
  require_same_shape(eps, eps_hat, "eps_hat shape differs from eps");
  if (stop_pred.size() != stop_gt.size()) throw ShapeMismatch("stop prediction length differs from ground truth");
  if (eps.size() == 0) throw ShapeMismatch("empty noise chunk");
  for (const Vec* v : {&stop_pred, &stop_gt}) {
    for (double x : *v) {
      if (!(x >= 0.0 && x <= 1.0)) throw InvalidRange("stop values must lie in [0, 1]");
    }
  }
  const auto n = static_cast<double>(eps.size());
  const ActionChunk diff = eps_hat - eps;
  RdpLoss out;
  out.value = diff.squaredNorm() / n;
  out.grad_eps_hat = (2.0 / n) * diff;
  out.grad_stop_pred = Vec::Zero(stop_pred.size());
  if (stop_pred.size() > 0) {
    const auto m = static_cast<double>(stop_pred.size());
    const Vec sdiff = stop_pred - stop_gt;
    out.value += lambda * sdiff.squaredNorm() / m;
    out.grad_stop_pred = (2.0 * lambda / m) * sdiff;
  }
  return out;
}

bool stop_gate(const ActionChunk& chunk, double stop_progress) {
  if (stop_progress > kStopProgressThreshold) return true;
  return chunk.size() == 0 || chunk.cwiseAbs().maxCoeff() < kStopMotionThreshold;
}

std::vector<double> stop_progress(std::span<const Vec2> path) {
  std::vector<double> out(path.size(), 1.0);
  if (path.empty()) return out;
  std::vector<double> cumulative(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) cumulative[i] = cumulative[i - 1] + distance(path[i - 1], path[i]);
  const double total = cumulative.back();
  if (total <= 0.0) return out;
  for (std::size_t i = 0; i < path.size(); ++i) out[i] = cumulative[i] / total;
  out.back() = 1.0;
  return out;
}

double stop_progress_at(std::span<const Vec2> path, Vec2 p) {
  if (path.size() < 2) return 1.0;
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += distance(path[i - 1], path[i]);
  if (total <= 0.0) return 1.0;

  double best = std::numeric_limits<double>::infinity();
  double covered_at_best = 0.0;
  double covered = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Vec2 a = path[i - 1];
    const Vec2 seg = path[i] - a;
    const double len2 = seg.x * seg.x + seg.y * seg.y;
    const double len = std::sqrt(len2);
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * seg.x + (p.y - a.y) * seg.y) / len2, 0.0, 1.0);
    const double d = distance(p, a + t * seg);
    if (d < best) {
      best = d;
      covered_at_best = covered + t * len;
    }
    covered += len;
  }
  return std::clamp(covered_at_best / total, 0.0, 1.0);
}

}  // namespace physnav
