#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "physnav/control/commands.hpp"
#include "physnav/policy/nn.hpp"
#include "physnav/world/grid_map.hpp"
#include "physnav/world/sensing.hpp"

namespace physnav {

struct FeatureConfig {
  int sectors = 8;
  int visual_slots = 8;
  int token_dim = 32;
  int action_dim = 32;
  int max_tokens = 64;

  int visual_size() const { return sectors * visual_slots; }
  int depth_size() const { return sectors * 2; }
};

/// Per-step policy inputs. V: sector x hashed-label slot, max semantic
/// score. D: per sector (mean, min) depth over max range. I: one row per
/// instruction token. a_prev: embedding of the previous action.
struct FeatureBundle {
  Vec visual;
  Vec depth;
  Mat instruction;
  Vec prev_action;
};

/// Lower-cased alphanumeric words.
std::vector<std::string> tokenize(std::string_view text);
/// Deterministic unit-scale embedding of a token.
Vec token_embedding(std::string_view token, int dim);
/// Rows are token embeddings, truncated to max_tokens; an empty
/// instruction yields one row for a placeholder token.
Mat instruction_features(std::string_view text, const FeatureConfig& cfg = {});

Vec visual_features(const Observation& obs, const GridMap& map, const FeatureConfig& cfg = {});
Vec depth_features(const Observation& obs, const FeatureConfig& cfg = {});
/// Fixed embedding table over {none, stop, forward, turn_left, turn_right}.
Vec action_embedding(std::optional<ActionKind> action, const FeatureConfig& cfg = {});

FeatureBundle featurize(const Observation& obs, const GridMap& map, const Mat& instruction,
                        std::optional<ActionKind> prev_action, const FeatureConfig& cfg = {});

}  // namespace physnav
