#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "physnav/bench/runner.hpp"
#include "physnav/bench/trace.hpp"
#include "physnav/plan/cost_grid.hpp"
#include "physnav/policy/policy.hpp"
#include "physnav/semnav/affinity.hpp"
#include "physnav/semnav/program.hpp"
#include "physnav/semnav/semantic_map.hpp"

namespace physnav {

inline constexpr double kRoomFallbackThreshold = 0.3;
inline constexpr double kPeekRadius = 2.0;

/// Room whose mean affinity over the distinct visible labels is highest;
/// ties go to the earlier room. Returns "others" when nothing is visible or
/// the best score is below the fallback threshold. Throws ValidationError
/// for an empty room list.
std::string classify_room(const std::vector<std::string>& visible_labels, const std::vector<std::string>& rooms,
                          const AffinityTable& table);
std::string classify_room(const Observation& obs, const GridMap& map, const std::vector<std::string>& rooms,
                          const AffinityTable& table);

/// Mean affinity to `target` of the labels deposited within `peek_radius`
/// of the frontier cell; 0 when none are.
double frontier_score(const SemanticMap& smap, Cell frontier, std::string_view target, const AffinityTable& table,
                      double peek_radius = kPeekRadius);

/// Picks the next frontier to visit: reachable, not in `visited`, highest
/// frontier_score toward `next_landmark`; ties go to the geodesically
/// nearest, then to the earlier cell. Throws NoFrontiers.
Cell explore_step(const SemanticMap& smap, const GridMap& world, const PoseState& pose,
                  std::string_view next_landmark, const AffinityTable& table, std::span<const Cell> visited = {},
                  double peek_radius = kPeekRadius);

struct VlmapsConfig {
  double dilation_radius = 0.3;
  CostParams costs;
  /// A target counts as reached within this distance.
  double arrive_tolerance = 0.35;
  double detection_threshold = kDetectionThreshold;
  double peek_radius = kPeekRadius;
  /// MoveForward candidates lie within this distance of the nominal point.
  double reorient_window = 1.0;
  int scan_turns = 8;
  double scan_turn_degrees = 45.0;
  /// Plans toward one target before giving up on it.
  int max_attempts = 3;
};

struct SubgoalRecord {
  Subgoal subgoal;
  Vec2 target;
  Vec2 reached;
  int step = 0;
};

/// Map-based agent: builds a semantic map from its observations and runs
/// the episode's subgoal program. The first time a landmark is not indexed
/// it scans in place; after that it explores frontiers, scanning at each. Plans with A* on the true occupancy
/// grid, dilated and with unexplored cells penalized.
class VlmapsPolicy : public Policy {
 public:
  explicit VlmapsPolicy(AffinityTable table = default_affinity_table(), VlmapsConfig config = {});

  std::string name() const override { return "vlmaps"; }
  void reset(const Episode& episode, const GridMap& map, std::uint64_t seed) override;
  Decision decide(const StepContext& ctx) override;

  const SemanticMap& semantic_map() const { return *smap_; }
  const std::vector<SubgoalRecord>& records() const { return records_; }
  const std::vector<Cell>& visited_frontiers() const { return visited_; }

 private:
  std::optional<Vec2> resolve_target(const Subgoal& subgoal, const PoseState& pose);
  std::string search_label(const Subgoal& subgoal) const;
  Vec2 reachable_point(Vec2 p, const PoseState& pose) const;
  Decision plan_to(Vec2 target, const PoseState& pose, std::string label) const;
  Decision explore(const Subgoal& subgoal, const PoseState& pose);
  Decision scan();
  void finish_subgoal(const Subgoal& subgoal, Vec2 target, const StepContext& ctx);

  AffinityTable table_;
  VlmapsConfig config_;
  const GridMap* world_ = nullptr;
  SubgoalProgram program_;
  std::optional<SemanticMap> smap_;
  std::optional<CostGrid> base_costs_;
  std::vector<SubgoalRecord> records_;
  std::vector<Cell> visited_;
  std::size_t pc_ = 0;
  int scan_remaining_ = 0;
  bool scanned_ = false;
  std::optional<Vec2> target_;
  int attempts_ = 0;
  std::optional<Cell> frontier_;
  int frontier_attempts_ = 0;
};

struct ProgramRun {
  EpisodeTrace trace;
  std::vector<SubgoalRecord> records;
};

/// Runs a validated program from `start` with the map-based agent.
/// NoFrontiers and NoPath end the episode with a failure reason.
ProgramRun execute_program(const SubgoalProgram& program, const GridMap& world, Pose2 start,
                           const RunOptions& options, VlmapsConfig config = {},
                           const AffinityTable& table = default_affinity_table());

}  // namespace physnav
