#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"
#include "physnav/core/text.hpp"
#include "physnav/policy/baselines.hpp"
#include "physnav/policy/cma.hpp"
#include "physnav/policy/features.hpp"
#include "physnav/policy/nn.hpp"
#include "physnav/policy/seq2seq.hpp"
#include "physnav/policy/weights.hpp"
#include "unit/test_maps.hpp"

using namespace physnav;
using physnav::testing::open_room;
using physnav::testing::pose_at;

namespace {

Vec random_vec(Rng& rng, int n, double scale = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(-scale, scale);
  return v;
}

Mat random_mat(Rng& rng, int r, int c, double scale = 1.0) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = rng.uniform(-scale, scale);
  }
  return m;
}

GruWeights random_gru_weights(Rng& rng, int in, int hidden) {
  return {random_mat(rng, 3 * hidden, in), random_mat(rng, 3 * hidden, hidden), random_vec(rng, 3 * hidden),
          random_vec(rng, 3 * hidden)};
}

// Scalar-loop GRU with explicit gate rows, no matrix products.
std::vector<double> scalar_gru(const std::vector<double>& x, const std::vector<double>& h, const GruWeights& w) {
  const std::size_t hs = h.size();
  auto row_dot = [](const Mat& m, std::size_t row, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) * v[j];
    return s;
  };
  auto sig = [](double a) { return 1.0 / (1.0 + std::exp(-a)); };
  std::vector<double> out(hs);
  for (std::size_t i = 0; i < hs; ++i) {
    const auto r_row = i, z_row = hs + i, n_row = 2 * hs + i;
    const double r = sig(row_dot(w.w_input, r_row, x) + w.b_input[static_cast<Eigen::Index>(r_row)] +
                         row_dot(w.w_hidden, r_row, h) + w.b_hidden[static_cast<Eigen::Index>(r_row)]);
    const double z = sig(row_dot(w.w_input, z_row, x) + w.b_input[static_cast<Eigen::Index>(z_row)] +
                         row_dot(w.w_hidden, z_row, h) + w.b_hidden[static_cast<Eigen::Index>(z_row)]);
    const double n = std::tanh(row_dot(w.w_input, n_row, x) + w.b_input[static_cast<Eigen::Index>(n_row)] +
                               r * (row_dot(w.w_hidden, n_row, h) + w.b_hidden[static_cast<Eigen::Index>(n_row)]));
    out[i] = (1.0 - z) * n + z * h[i];
  }
  return out;
}

FeatureBundle random_features(Rng& rng, const FeatureConfig& cfg, int tokens) {
  return {random_vec(rng, cfg.visual_size()).cwiseAbs(), random_vec(rng, cfg.depth_size()).cwiseAbs(),
          random_mat(rng, tokens, cfg.token_dim), random_vec(rng, cfg.action_dim)};
}

Episode episode_to(Vec2 goal, Pose2 start) {
  Episode e;
  e.episode_id = "t";
  e.scene_id = "room";
  e.start = start;
  e.goal = goal;
  return e;
}

}  // namespace

TEST_CASE("gru_step zero weights") {
  const GruWeights zero = GruWeights::zeros(5, 4);
  Vec h(4);
  h << 0.2, -0.6, 1.0, 0.0;
  Vec x(5);
  x << 3, -2, 1, 0, 9;
  const Vec out = gru_step(x, h, zero);
  for (int i = 0; i < 4; ++i) CHECK(out[i] == 0.5 * h[i]);
  CHECK(gru_step(Vec::Zero(5), Vec::Zero(4), zero).isZero(0.0));
  CHECK_THROWS_AS(gru_step(Vec::Zero(4), h, zero), DimensionMismatch);
  CHECK_THROWS_AS(gru_step(x, Vec::Zero(3), zero), DimensionMismatch);
}

TEST_CASE("gru_step matches a scalar evaluation") {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const GruWeights w = random_gru_weights(rng, 8, 8);
    const Vec x = random_vec(rng, 8, 2.0);
    const Vec h = random_vec(rng, 8);
    const Vec fast = gru_step(x, h, w);
    const auto slow = scalar_gru(std::vector<double>(x.data(), x.data() + 8), std::vector<double>(h.data(), h.data() + 8), w);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(fast[i] - slow[static_cast<std::size_t>(i)]) < 1e-12);
  }
}

TEST_CASE("gru hidden state stays bounded") {
  Rng rng(2);
  const GruWeights w = random_gru_weights(rng, 6, 10);
  Vec h = Vec::Zero(10);
  for (int t = 0; t < 10000; ++t) {
    h = gru_step(random_vec(rng, 6, 50.0), h, w);
    REQUIRE(h.cwiseAbs().maxCoeff() <= 1.0);
  }
}

TEST_CASE("scaled_dot_attention examples") {
  Vec q(3);
  q << 0.3, -1.0, 2.0;
  Mat k1(1, 3);
  k1 << 1, 2, 3;
  Mat v1(1, 2);
  v1 << 7, -4;
  const AttentionResult single = scaled_dot_attention(q, k1, v1);
  CHECK(single.weights[0] == 1.0);
  CHECK(single.output[0] == 7.0);
  CHECK(single.output[1] == -4.0);

  Mat k2(2, 3);
  k2 << 1, 2, 3, 1, 2, 3;
  Mat v2(2, 1);
  v2 << 1, 3;
  const AttentionResult same = scaled_dot_attention(q, k2, v2);
  CHECK(same.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(same.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(same.output[0] == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(scaled_dot_attention(Vec::Zero(2), k1, v1), DimensionMismatch);
  CHECK_THROWS_AS(scaled_dot_attention(q, k2, v1), DimensionMismatch);
}

TEST_CASE("scaled_dot_attention matches the direct formula") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + static_cast<int>(rng.index(6));
    const int n = 1 + static_cast<int>(rng.index(5));
    const Vec q = random_vec(rng, d, 3.0);
    const Mat k = random_mat(rng, n, d, 3.0);
    const Mat v = random_mat(rng, n, 4);
    const AttentionResult r = scaled_dot_attention(q, k, v);

    std::vector<double> e(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = 0; j < d; ++j) dot += q[j] * k(i, j);
      e[static_cast<std::size_t>(i)] = std::exp(dot / std::sqrt(static_cast<double>(d)));
      total += e[static_cast<std::size_t>(i)];
    }
    double weight_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(r.weights[i] - e[static_cast<std::size_t>(i)] / total) < 1e-12);
      CHECK(r.weights[i] >= 0.0);
      CHECK(r.weights[i] <= 1.0);
      weight_sum += r.weights[i];
    }
    CHECK(std::abs(weight_sum - 1.0) < 1e-9);
    for (int c = 0; c < 4; ++c) {
      double expected = 0.0;
      for (int i = 0; i < n; ++i) expected += e[static_cast<std::size_t>(i)] / total * v(i, c);
      CHECK(std::abs(r.output[c] - expected) < 1e-12);
    }
  }
}

TEST_CASE("seq2seq_step") {
  const FeatureConfig cfg;
  Rng rng(4);
  Seq2SeqWeights w = Seq2SeqWeights::random(10, cfg);
  const FeatureBundle f = random_features(rng, cfg, 5);
  const Vec h = Vec::Zero(w.hidden_size());

  const Seq2SeqOutput a = seq2seq_step(f, h, w);
  const Seq2SeqOutput b = seq2seq_step(f, h, w);
  CHECK(a.action == b.action);
  CHECK(a.hidden == b.hidden);
  CHECK(std::abs(a.probs.sum() - 1.0) < 1e-12);
  CHECK(a.probs.size() == 4);

  // Shifting every logit by a constant leaves the argmax alone.
  Seq2SeqWeights shifted = w;
  shifted.head.bias.array() += 123.0;
  CHECK(seq2seq_step(f, h, shifted).action == a.action);

  Seq2SeqWeights forced = w;
  forced.head.weight.setZero();
  forced.head.bias << 0.0, 5.0, 1.0, 1.0;
  CHECK(seq2seq_step(f, h, forced).action == DiscreteAction::forward());

  FeatureBundle bad = f;
  bad.visual = Vec::Zero(3);
  CHECK_THROWS_AS(seq2seq_step(bad, h, w), DimensionMismatch);
}

TEST_CASE("cma_step structure") {
  const FeatureConfig cfg;
  Rng rng(5);
  CmaWeights w = CmaWeights::random(11, cfg);

  FeatureBundle one_token = random_features(rng, cfg, 1);
  const CmaOutput single = cma_step(one_token, zero_state(w), w, cfg);
  for (int i = 0; i < cfg.token_dim; ++i) CHECK(single.attended_instruction[i] == one_token.instruction(0, i));

  CmaWeights frozen = w;
  frozen.second = GruWeights::zeros(w.second.input_size(), w.second.hidden_size());
  CmaState state = zero_state(w);
  state.second = random_vec(rng, w.second.hidden_size());
  const CmaOutput half = cma_step(random_features(rng, cfg, 4), state, frozen, cfg);
  for (int i = 0; i < state.second.size(); ++i) CHECK(half.state.second[i] == 0.5 * state.second[i]);

  const FeatureBundle f = random_features(rng, cfg, 6);
  const CmaOutput a = cma_step(f, state, w, cfg);
  const CmaOutput b = cma_step(f, state, w, cfg);
  CHECK(a.action == b.action);
  CHECK(a.state.first == b.state.first);
  CHECK(a.state.second == b.state.second);
  CHECK(std::abs(a.probs.sum() - 1.0) < 1e-12);
}

TEST_CASE("cma_step golden output") {
  const FeatureConfig cfg;
  Rng rng(2024);
  const CmaWeights w = CmaWeights::random(7, cfg);
  const FeatureBundle f = random_features(rng, cfg, 5);
  CmaState state = zero_state(w);
  std::vector<double> values;
  for (int t = 0; t < 3; ++t) {
    const CmaOutput out = cma_step(f, state, w, cfg);
    state = out.state;
    for (int i = 0; i < out.probs.size(); ++i) values.push_back(out.probs[i]);
  }
  for (int i = 0; i < state.second.size(); ++i) values.push_back(state.second[i]);

  const std::string path = std::string(PHYSNAV_GOLDEN_DIR) + "/cma_step.txt";
  if (std::getenv("PHYSNAV_UPDATE_GOLDEN")) {
    std::ofstream out(path);
    for (double v : values) out << format_double(v) << "\n";
  }
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << path);
  std::vector<double> golden;
  for (std::string line; std::getline(in, line);) {
    double v = 0.0;
    REQUIRE(parse_double(line, v));
    golden.push_back(v);
  }
  REQUIRE(golden.size() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(std::abs(values[i] - golden[i]) < 1e-12);
}

TEST_CASE("weight blobs round trip bit-exactly") {
  const Seq2SeqWeights s = Seq2SeqWeights::random(3);
  const WeightSet set = s.to_weight_set();
  const std::string blob = serialize_weights(set);
  CHECK(blob.substr(0, 4) == "PNWB");
  const WeightSet back = deserialize_weights(blob);
  CHECK(back == set);
  CHECK(serialize_weights(back) == blob);

  const CmaWeights c = CmaWeights::random(4);
  const CmaWeights c2 = CmaWeights::from_weight_set(deserialize_weights(serialize_weights(c.to_weight_set())));
  CHECK(c2.head.weight == c.head.weight);
  CHECK(c2.second.w_hidden == c.second.w_hidden);

  std::string bad = blob;
  bad[0] = 'X';
  CHECK_THROWS_AS(deserialize_weights(bad), ParseError);
  CHECK_THROWS_AS(deserialize_weights(blob.substr(0, blob.size() - 3)), ParseError);
  std::string future = blob;
  future[4] = 2;
  CHECK_THROWS_AS(deserialize_weights(future), ParseError);
  CHECK_THROWS_AS(set.get("nope"), ValidationError);
}

TEST_CASE("features are deterministic and shaped") {
  const FeatureConfig cfg;
  CHECK(tokenize("Walk past the Sofa, then stop.") ==
        std::vector<std::string>{"walk", "past", "the", "sofa", "then", "stop"});
  const Mat i = instruction_features("go to the sofa", cfg);
  CHECK(i.rows() == 4);
  CHECK(i.cols() == cfg.token_dim);
  CHECK(instruction_features("", cfg).rows() == 1);
  CHECK(token_embedding("sofa", 32) == token_embedding("sofa", 32));
  CHECK(action_embedding(ActionKind::Forward, cfg) == action_embedding(ActionKind::Forward, cfg));
  CHECK(action_embedding(ActionKind::Forward, cfg) != action_embedding(std::nullopt, cfg));

  const GridMap map = open_room(30, 30);
  const Observation obs = observe(map, pose_at(1.5, 1.5), default_profile(RobotKind::Flash),
                                  default_lighting(LightingKind::DL5000), 1);
  const Vec d = depth_features(obs, cfg);
  CHECK(d.size() == cfg.depth_size());
  CHECK(d.minCoeff() >= 0.0);
  CHECK(d.maxCoeff() <= 1.0);
}

TEST_CASE("random_policy_step") {
  CHECK(random_policy_step(5) == random_policy_step(5));
  int counts[4] = {0, 0, 0, 0};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(random_policy_step(derive_seed(77, {static_cast<std::uint64_t>(i)})).kind)];
  const double stop_rate = static_cast<double>(counts[0]) / n;
  CHECK(stop_rate == doctest::Approx(0.02).epsilon(0.25));
  const double moving = n - counts[0];
  double chi2 = 0.0;
  for (int k = 1; k < 4; ++k) chi2 += std::pow(counts[k] - moving / 3, 2) / (moving / 3);
  // 2 degrees of freedom; 13.8 is the 0.999 quantile.
  CHECK(chi2 < 13.8);
}

TEST_CASE("oracle_policy_step") {
  const GridMap map = open_room(60, 60);
  const Episode e = episode_to({3.0, 3.0}, {1.0, 3.0, 0.0});
  CHECK(oracle_policy_step(e, pose_at(2.9, 3.0), map, 0.5).kind == ActionKind::Stop);
  CHECK(oracle_policy_step(e, pose_at(2.0, 3.0, 0.0), map, 0.5) == DiscreteAction::forward());
  // Goal behind-left needs +135 degrees, behind-right -135 degrees.
  CHECK(oracle_policy_step(e, pose_at(4.05, 2.05, 0.0), map, 0.5).kind == ActionKind::TurnLeft);
  CHECK(oracle_policy_step(e, pose_at(4.05, 4.05, 0.0), map, 0.5).kind == ActionKind::TurnRight);

  const GridMap split = load_map(
      "cellsize 1\n"
      "#######\n"
      "#..#..#\n"
      "#..#..#\n"
      "#######\n");
  CHECK_THROWS_AS(oracle_policy_step(episode_to({5.5, 1.5}, {1.5, 1.5, 0}), pose_at(1.5, 1.5), split, 0.5), NoPath);
}
