#include "physnav/policy/weights.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

#include "physnav/core/errors.hpp"
#include "physnav/core/file_io.hpp"

namespace physnav {

namespace {

constexpr char kMagic[4] = {'P', 'N', 'W', 'B'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw ParseError("weight blob is truncated");
    const std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    const std::string_view s = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[static_cast<std::size_t>(i)]);
    return v;
  }
  double f64() {
    const std::string_view s = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[static_cast<std::size_t>(i)]);
    return std::bit_cast<double>(v);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void WeightSet::put(std::string name, Mat value) {
  for (auto& [n, m] : tensors_) {
    if (n == name) {
      m = std::move(value);
      return;
    }
  }
  tensors_.emplace_back(std::move(name), std::move(value));
}

void WeightSet::put_linear(const std::string& prefix, const Linear& layer) {
  put(prefix + ".weight", layer.weight);
  put_vector(prefix + ".bias", layer.bias);
}

void WeightSet::put_gru(const std::string& prefix, const GruWeights& gru) {
  put(prefix + ".w_input", gru.w_input);
  put(prefix + ".w_hidden", gru.w_hidden);
  put_vector(prefix + ".b_input", gru.b_input);
  put_vector(prefix + ".b_hidden", gru.b_hidden);
}

const Mat& WeightSet::get(std::string_view name) const {
  for (const auto& [n, m] : tensors_) {
    if (n == name) return m;
  }
  throw ValidationError("missing weight tensor: " + std::string(name));
}

Vec WeightSet::get_vector(std::string_view name) const {
  const Mat& m = get(name);
  if (m.cols() != 1) throw DimensionMismatch("weight tensor is not a vector: " + std::string(name));
  return m.col(0);
}

Linear WeightSet::get_linear(const std::string& prefix) const {
  Linear l{get(prefix + ".weight"), get_vector(prefix + ".bias")};
  if (l.bias.size() != l.weight.rows()) throw DimensionMismatch("bias size mismatch in " + prefix);
  return l;
}

GruWeights WeightSet::get_gru(const std::string& prefix) const {
  return {get(prefix + ".w_input"), get(prefix + ".w_hidden"), get_vector(prefix + ".b_input"),
          get_vector(prefix + ".b_hidden")};
}

bool operator==(const WeightSet& a, const WeightSet& b) {
  if (a.tensors_.size() != b.tensors_.size()) return false;
  for (std::size_t i = 0; i < a.tensors_.size(); ++i) {
    const auto& [na, ma] = a.tensors_[i];
    const auto& [nb, mb] = b.tensors_[i];
    if (na != nb || ma.rows() != mb.rows() || ma.cols() != mb.cols()) return false;
    if (ma.size() > 0 && std::memcmp(ma.data(), mb.data(), sizeof(double) * static_cast<std::size_t>(ma.size())) != 0) {
      return false;
    }
  }
  return true;
}

std::string serialize_weights(const WeightSet& weights) {
  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(weights.tensors().size()));
  for (const auto& [name, m] : weights.tensors()) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(out, m(r, c));
    }
  }
  return out;
}

WeightSet deserialize_weights(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(4) != std::string_view(kMagic, 4)) throw ParseError("not a weight blob (bad magic)");
  const std::uint32_t version = in.u32();
  if (version != kVersion) throw ParseError("unsupported weight blob version " + std::to_string(version));
  const std::uint32_t count = in.u32();
  WeightSet out;
  for (std::uint32_t t = 0; t < count; ++t) {
    std::string name(in.take(in.u32()));
    const std::uint32_t rows = in.u32();
    const std::uint32_t cols = in.u32();
    Mat m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = in.f64();
    }
    out.put(std::move(name), std::move(m));
  }
  if (!in.done()) throw ParseError("trailing bytes after weight blob");
  return out;
}

void save_weights(const std::string& path, const WeightSet& weights) {
  write_file_atomic(path, serialize_weights(weights));
}

WeightSet load_weights(const std::string& path) { return deserialize_weights(read_file(path)); }

}  // namespace physnav
