#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "physnav/core/geometry.hpp"
#include "physnav/semnav/program.hpp"

namespace physnav {

enum class Split { Train, ValSeen, ValUnseen };

std::string_view to_string(Split split);
/// "train", "val_seen", "val_unseen". Throws ParseError.
Split parse_split(std::string_view name);

struct Episode {
  std::string episode_id;
  std::string scene_id;
  Pose2 start;
  Vec2 goal;
  std::vector<Vec2> reference_path;
  std::string instruction_text;
  std::optional<SubgoalProgram> subgoals;
  Split split = Split::Train;
};

/// Dataset file: a JSON array of episode objects. Output is deterministic
/// for identical input.
std::string dataset_to_json(const std::vector<Episode>& episodes);
/// Throws ParseError on malformed JSON or missing fields.
std::vector<Episode> dataset_from_json(std::string_view text);

void save_dataset(const std::string& path, const std::vector<Episode>& episodes);
std::vector<Episode> load_dataset(const std::string& path);

}  // namespace physnav
