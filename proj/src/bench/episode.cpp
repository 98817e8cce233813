#include "physnav/bench/episode.hpp"

#include "json.hpp"
#include "physnav/core/errors.hpp"
#include "physnav/core/file_io.hpp"

namespace physnav {

using Json = nlohmann::ordered_json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::ValSeen: return "val_seen";
    case Split::ValUnseen: return "val_unseen";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "val_seen") return Split::ValSeen;
  if (name == "val_unseen") return Split::ValUnseen;
  throw ParseError("unknown split: " + std::string(name));
}

namespace {

Json episode_to_json(const Episode& e) {
  Json j;
  j["episode_id"] = e.episode_id;
  j["scene_id"] = e.scene_id;
  j["start"] = {{"x", e.start.x}, {"y", e.start.y}, {"heading", e.start.heading}};
  j["goal"] = {{"x", e.goal.x}, {"y", e.goal.y}};
  Json path = Json::array();
  for (const Vec2& p : e.reference_path) path.push_back({p.x, p.y});
  j["reference_path"] = std::move(path);
  j["instruction_text"] = e.instruction_text;
  if (e.subgoals) {
    Json program = Json::array();
    for (const Subgoal& g : *e.subgoals) program.push_back(to_string(g));
    j["subgoals"] = std::move(program);
  } else {
    j["subgoals"] = nullptr;
  }
  j["split"] = std::string(to_string(e.split));
  return j;
}

Episode episode_from_json(const Json& j) {
  Episode e;
  e.episode_id = j.at("episode_id").get<std::string>();
  e.scene_id = j.at("scene_id").get<std::string>();
  const Json& s = j.at("start");
  e.start = {s.at("x").get<double>(), s.at("y").get<double>(), s.at("heading").get<double>()};
  const Json& g = j.at("goal");
  e.goal = {g.at("x").get<double>(), g.at("y").get<double>()};
  for (const Json& p : j.at("reference_path")) {
    if (!p.is_array() || p.size() != 2) throw ParseError("reference_path points must be [x, y]");
    e.reference_path.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  e.instruction_text = j.at("instruction_text").get<std::string>();
  if (j.contains("subgoals") && !j.at("subgoals").is_null()) {
    SubgoalProgram program;
    for (const Json& item : j.at("subgoals")) program.push_back(parse_subgoal(item.get<std::string>()));
    e.subgoals = std::move(program);
  }
  e.split = parse_split(j.at("split").get<std::string>());
  return e;
}

}  // namespace

std::string dataset_to_json(const std::vector<Episode>& episodes) {
  Json arr = Json::array();
  for (const Episode& e : episodes) arr.push_back(episode_to_json(e));
  return arr.dump(2) + "\n";
}

std::vector<Episode> dataset_from_json(std::string_view text) {
  try {
    const Json arr = Json::parse(text);
    if (!arr.is_array()) throw ParseError("dataset must be a JSON array");
    std::vector<Episode> out;
    out.reserve(arr.size());
    for (const Json& j : arr) out.push_back(episode_from_json(j));
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("bad dataset: ") + ex.what());
  }
}

void save_dataset(const std::string& path, const std::vector<Episode>& episodes) {
  write_file_atomic(path, dataset_to_json(episodes));
}

std::vector<Episode> load_dataset(const std::string& path) { return dataset_from_json(read_file(path)); }

}  // namespace physnav
