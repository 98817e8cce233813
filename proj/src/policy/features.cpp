#include "physnav/policy/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "physnav/core/rng.hpp"
#include "physnav/core/text.hpp"

namespace physnav {

namespace {

constexpr std::uint64_t kActionTableSeed = 0x61637469'6f6e7331ull;

int sector_of(double bearing, double fov, int sectors) {
  const int s = static_cast<int>(std::floor((fov / 2 - bearing) / (fov / sectors)));
  return std::clamp(s, 0, sectors - 1);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!word.empty()) {
      out.push_back(std::move(word));
      word.clear();
    }
  }
  if (!word.empty()) out.push_back(std::move(word));
  return out;
}

Vec token_embedding(std::string_view token, int dim) {
  Rng rng(fnv1a64(token));
  Vec v(dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i) v[i] = rng.normal() * scale;
  return v;
}

Mat instruction_features(std::string_view text, const FeatureConfig& cfg) {
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) tokens.push_back("<empty>");
  if (static_cast<int>(tokens.size()) > cfg.max_tokens) tokens.resize(static_cast<std::size_t>(cfg.max_tokens));
  Mat m(static_cast<Eigen::Index>(tokens.size()), cfg.token_dim);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = token_embedding(tokens[i], cfg.token_dim).transpose();
  }
  return m;
}

Vec visual_features(const Observation& obs, const GridMap& map, const FeatureConfig& cfg) {
  Vec v = Vec::Zero(cfg.visual_size());
  for (const VisibleLabel& l : obs.visible_labels) {
    const int sector = sector_of(l.bearing, obs.sensor.field_of_view, cfg.sectors);
    const auto slot = static_cast<int>(fnv1a64(map.label_names()[l.label]) % static_cast<std::uint64_t>(cfg.visual_slots));
    double& cell = v[sector * cfg.visual_slots + slot];
    cell = std::max(cell, l.score);
  }
  return v;
}

Vec depth_features(const Observation& obs, const FeatureConfig& cfg) {
  Vec d = Vec::Zero(cfg.depth_size());
  std::vector<int> counts(static_cast<std::size_t>(cfg.sectors), 0);
  std::vector<double> mins(static_cast<std::size_t>(cfg.sectors), 1.0);
  const int n = static_cast<int>(obs.depth_rays.size());
  for (int i = 0; i < n; ++i) {
    const int s = std::min(cfg.sectors - 1, i * cfg.sectors / std::max(1, n));
    const double r = obs.depth_rays[static_cast<std::size_t>(i)] / obs.sensor.max_range;
    d[2 * s] += r;
    mins[static_cast<std::size_t>(s)] = std::min(mins[static_cast<std::size_t>(s)], r);
    ++counts[static_cast<std::size_t>(s)];
  }
  for (int s = 0; s < cfg.sectors; ++s) {
    const auto k = static_cast<std::size_t>(s);
    if (counts[k] > 0) d[2 * s] /= counts[k];
    d[2 * s + 1] = counts[k] > 0 ? mins[k] : 0.0;
  }
  return d;
}

Vec action_embedding(std::optional<ActionKind> action, const FeatureConfig& cfg) {
  const std::uint64_t row = action ? static_cast<std::uint64_t>(*action) + 1 : 0;
  Rng rng(derive_seed(kActionTableSeed, {row, static_cast<std::uint64_t>(cfg.action_dim)}));
  Vec v(cfg.action_dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.action_dim));
  for (int i = 0; i < cfg.action_dim; ++i) v[i] = rng.normal() * scale;
  return v;
}

FeatureBundle featurize(const Observation& obs, const GridMap& map, const Mat& instruction,
                        std::optional<ActionKind> prev_action, const FeatureConfig& cfg) {
  return {visual_features(obs, map, cfg), depth_features(obs, cfg), instruction,
          action_embedding(prev_action, cfg)};
}

}  // namespace physnav
