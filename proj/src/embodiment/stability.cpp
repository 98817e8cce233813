#include "physnav/embodiment/stability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"

namespace physnav {

PoseState apply_disturbance(const PoseState& pose, const RobotProfile& profile,
                            double commanded_speed, bool collided, bool on_hole,
                            std::uint64_t rng_seed) {
  if (pose.fallen) throw AlreadyFallen("apply_disturbance on a fallen pose");

  const double sigma = profile.disturbance_sigma * (1.0 + std::abs(commanded_speed));
  double roll_noise = 0.0;
  double pitch_noise = 0.0;
  if (sigma > 0.0) {
    Rng rng(rng_seed);
    roll_noise = sigma * rng.normal();
    pitch_noise = sigma * rng.normal();
  }
  const double kick = (collided ? profile.collision_impulse : 0.0) +
                      (on_hole ? profile.hole_impulse : 0.0);

  PoseState out = pose;
  out.roll = kAttitudeDecay * pose.roll;
  out.pitch = kAttitudeDecay * pose.pitch;
  if (sigma > 0.0 || kick != 0.0) {
    out.roll += roll_noise + kick;
    out.pitch += pitch_noise + kick;
  }
  return out;
}

bool check_fall(const PoseState& pose, const RobotProfile& profile) {
  return std::abs(pose.roll) > deg_to_rad(profile.fall_roll_deg) ||
         std::abs(pose.pitch) > deg_to_rad(profile.fall_pitch_deg);
}

double heading_span(const StuckWindow& window) {
  if (window.size() < 2) return 0.0;
  std::vector<double> h;
  h.reserve(window.size());
  for (const auto& p : window.poses()) h.push_back(normalize_angle(p.heading));
  std::sort(h.begin(), h.end());

  // The covering arc is the circle minus its largest empty gap. When the
  // wrap-around gap is the largest (ties included) the span is back - front,
  // which keeps boundary cases exact.
  const double wrap_gap = h.front() + 2.0 * kPi - h.back();
  double best_gap = wrap_gap;
  std::size_t best = h.size();
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const double gap = h[i + 1] - h[i];
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  if (best == h.size()) return h.back() - h.front();
  return h[best] + 2.0 * kPi - h[best + 1];
}

double max_displacement(const StuckWindow& window) {
  const auto& poses = window.poses();
  double worst = 0.0;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    for (std::size_t j = i + 1; j < poses.size(); ++j) {
      worst = std::max(worst, distance(poses[i].position(), poses[j].position()));
    }
  }
  return worst;
}

bool check_stuck(const StuckWindow& window) {
  if (!window.full()) return false;
  return max_displacement(window) < kStuckDisplacement &&
         heading_span(window) < deg_to_rad(kStuckHeadingDeg);
}

}  // namespace physnav
