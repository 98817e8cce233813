#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "physnav/plan/cost_grid.hpp"
#include "physnav/policy/policy.hpp"

namespace physnav {

inline constexpr double kRandomStopProbability = 0.02;

/// Stop with probability 0.02, otherwise uniform over forward / left / right.
DiscreteAction random_policy_step(std::uint64_t rng_seed);

class RandomPolicy : public Policy {
 public:
  std::string name() const override { return "random"; }
  void reset(const Episode&, const GridMap&, std::uint64_t) override {}
  Decision decide(const StepContext& ctx) override;
};

struct OracleConfig {
  double dilation_radius = 0.3;
  /// Steer toward the first path point at least this far away.
  double lookahead = 0.5;
  /// Turn instead of moving while the heading error exceeds this.
  double turn_threshold_deg = 7.5;
  /// Replan once the agent is this far from the cached path.
  double replan_deviation = 0.3;
};

/// Stateless shortest-path follower: Stop within `success_radius`
/// (geodesic) of the goal, otherwise turn toward or step along the A* path
/// on the dilated grid. Throws NoPath.
DiscreteAction oracle_policy_step(const Episode& episode, const PoseState& pose, const GridMap& map,
                                  double success_radius, const OracleConfig& cfg = {});

/// oracle_policy_step with the cost grid, goal distance field and path
/// cached per episode.
class OraclePolicy : public Policy {
 public:
  explicit OraclePolicy(OracleConfig cfg = {}) : cfg_(cfg) {}
  std::string name() const override { return "oracle"; }
  void reset(const Episode& episode, const GridMap& map, std::uint64_t seed) override;
  Decision decide(const StepContext& ctx) override;

 private:
  OracleConfig cfg_;
  std::optional<CostGrid> costs_;
  std::vector<double> goal_field_;
  std::vector<Vec2> path_;
  /// Set after a blocked forward; the agent descends the goal field until
  /// it can move again.
  bool recovering_ = false;
};

}  // namespace physnav
