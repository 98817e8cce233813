#include "physnav/policy/nn.hpp"

#include <cmath>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"

namespace physnav {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Vec softmax(const Vec& logits) {
  if (logits.size() == 0) throw DimensionMismatch("softmax of an empty vector");
  const Vec shifted = (logits.array() - logits.maxCoeff()).exp();
  return shifted / shifted.sum();
}

Vec Linear::operator()(const Vec& x) const {
  if (x.size() != weight.cols()) {
    throw DimensionMismatch("linear layer expects " + std::to_string(weight.cols()) + " inputs, got " +
                            std::to_string(x.size()));
  }
  return weight * x + bias;
}

GruWeights GruWeights::zeros(int input_size, int hidden_size) {
  return {Mat::Zero(3 * hidden_size, input_size), Mat::Zero(3 * hidden_size, hidden_size),
          Vec::Zero(3 * hidden_size), Vec::Zero(3 * hidden_size)};
}

Vec gru_step(const Vec& x, const Vec& h, const GruWeights& w) {
  const Eigen::Index hs = w.w_hidden.cols();
  if (w.w_hidden.rows() != 3 * hs || w.w_input.rows() != 3 * hs || w.b_input.size() != 3 * hs ||
      w.b_hidden.size() != 3 * hs) {
    throw DimensionMismatch("inconsistent GRU weight shapes");
  }
  if (x.size() != w.w_input.cols()) throw DimensionMismatch("GRU input size mismatch");
  if (h.size() != hs) throw DimensionMismatch("GRU hidden size mismatch");

  const Vec gi = w.w_input * x + w.b_input;
  const Vec gh = w.w_hidden * h + w.b_hidden;
  Vec out(hs);
  for (Eigen::Index i = 0; i < hs; ++i) {
    const double r = sigmoid(gi[i] + gh[i]);
    const double z = sigmoid(gi[hs + i] + gh[hs + i]);
    const double n = std::tanh(gi[2 * hs + i] + r * gh[2 * hs + i]);
    out[i] = (1.0 - z) * n + z * h[i];
  }
  return out;
}

AttentionResult scaled_dot_attention(const Vec& q, const Mat& keys, const Mat& values) {
  if (keys.rows() == 0) throw DimensionMismatch("attention needs at least one key");
  if (keys.cols() != q.size()) throw DimensionMismatch("query and key dimensions differ");
  if (keys.rows() != values.rows()) throw DimensionMismatch("keys and values differ in count");
  const Vec scores = keys * q / std::sqrt(static_cast<double>(q.size()));
  AttentionResult r;
  r.weights = softmax(scores);
  r.output = values.transpose() * r.weights;
  return r;
}

Mat random_matrix(int rows, int cols, double stddev, std::uint64_t seed) {
  Rng rng(seed);
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.normal(0.0, stddev);
  }
  return m;
}

Linear random_linear(int in, int out, std::uint64_t seed) {
  return {random_matrix(out, in, 1.0 / std::sqrt(static_cast<double>(in)), seed), Vec::Zero(out)};
}

GruWeights random_gru(int input_size, int hidden_size, std::uint64_t seed) {
  GruWeights w;
  w.w_input = random_matrix(3 * hidden_size, input_size, 1.0 / std::sqrt(static_cast<double>(input_size)),
                            derive_seed(seed, {0}));
  w.w_hidden = random_matrix(3 * hidden_size, hidden_size, 1.0 / std::sqrt(static_cast<double>(hidden_size)),
                             derive_seed(seed, {1}));
  w.b_input = Vec::Zero(3 * hidden_size);
  w.b_hidden = Vec::Zero(3 * hidden_size);
  return w;
}

int argmax(const Vec& v) {
  if (v.size() == 0) throw DimensionMismatch("argmax of an empty vector");
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace physnav
