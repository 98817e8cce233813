#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "physnav/policy/nn.hpp"

namespace physnav {

/// Named tensors in insertion order. Vectors are stored as n x 1 matrices.
class WeightSet {
 public:
  void put(std::string name, Mat value);
  void put_vector(std::string name, const Vec& value) { put(std::move(name), Mat(value)); }
  void put_linear(const std::string& prefix, const Linear& layer);
  void put_gru(const std::string& prefix, const GruWeights& gru);

  /// Throws ValidationError for unknown names.
  const Mat& get(std::string_view name) const;
  Vec get_vector(std::string_view name) const;
  Linear get_linear(const std::string& prefix) const;
  GruWeights get_gru(const std::string& prefix) const;

  const std::vector<std::pair<std::string, Mat>>& tensors() const { return tensors_; }
  friend bool operator==(const WeightSet& a, const WeightSet& b);

 private:
  std::vector<std::pair<std::string, Mat>> tensors_;
};

/// Binary blob: "PNWB", u32 version (1), u32 tensor count, then per tensor
/// u32 name length, name bytes, u32 rows, u32 cols and rows*cols
/// little-endian float64 in row-major order. Round trips bit-exactly.
std::string serialize_weights(const WeightSet& weights);
/// Throws ParseError on bad magic, unsupported version or truncation.
WeightSet deserialize_weights(std::string_view bytes);

void save_weights(const std::string& path, const WeightSet& weights);
WeightSet load_weights(const std::string& path);

}  // namespace physnav
