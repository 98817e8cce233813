#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace physnav {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

double sigmoid(double x);
/// Numerically stable softmax (max-shifted).
Vec softmax(const Vec& logits);

/// Affine map y = W x + b.
struct Linear {
  Mat weight;
  Vec bias;

  int in() const { return static_cast<int>(weight.cols()); }
  int out() const { return static_cast<int>(weight.rows()); }
  /// Throws DimensionMismatch.
  Vec operator()(const Vec& x) const;
};

/// GRU cell parameters with gates stacked as [reset; update; candidate]:
///   r = sig(W_ir x + b_ir + W_hr h + b_hr)
///   z = sig(W_iz x + b_iz + W_hz h + b_hz)
///   n = tanh(W_in x + b_in + r * (W_hn h + b_hn))
///   h' = (1 - z) * n + z * h
struct GruWeights {
  Mat w_input;   // 3H x in
  Mat w_hidden;  // 3H x H
  Vec b_input;   // 3H
  Vec b_hidden;  // 3H

  int input_size() const { return static_cast<int>(w_input.cols()); }
  int hidden_size() const { return static_cast<int>(w_hidden.cols()); }
  static GruWeights zeros(int input_size, int hidden_size);
};

/// Throws DimensionMismatch.
Vec gru_step(const Vec& x, const Vec& h, const GruWeights& weights);

struct AttentionResult {
  Vec output;
  Vec weights;
};

/// softmax(K q / sqrt(d)) over the rows of K, applied to the rows of V.
/// Throws DimensionMismatch (q vs K columns, K vs V rows, no keys).
AttentionResult scaled_dot_attention(const Vec& q, const Mat& keys, const Mat& values);

/// Seeded N(0, 1/fan_in) initialisation; biases start at zero.
Linear random_linear(int in, int out, std::uint64_t seed);
GruWeights random_gru(int input_size, int hidden_size, std::uint64_t seed);
Mat random_matrix(int rows, int cols, double stddev, std::uint64_t seed);

/// Index of the largest entry; the lowest index wins ties.
int argmax(const Vec& v);

}  // namespace physnav
