#include <doctest.h>

#include <cmath>
#include <limits>

#include "gumorph/cli.hpp"
#include "gumorph/error.hpp"
#include "gumorph/nn.hpp"

using namespace gumorph;
using namespace gumorph::nn;

namespace {

LstmWeights scalar_cell(std::array<double, 4> w) {
  LstmWeights cell;
  for (std::size_t q = 0; q < 4; ++q) {
    cell.W[q] = Tensor::zeros({1, 1});
    cell.W[q].data[0] = w[q];
    cell.U[q] = Tensor::zeros({1, 1});
    cell.b[q] = Tensor::zeros({1});
  }
  return cell;
}

Hyperparams small(std::size_t d_e = 4, std::size_t d_h = 5) {
  Hyperparams h;
  h.embed_dim = d_e;
  h.hidden_dim = d_h;
  return h;
}

Vocab abc() {
  const std::vector<Units> words = {U"abc"};
  return Vocab::build(words);
}

}  // namespace

TEST_CASE("activations and losses match closed forms") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(800.0) <= 1.0);
  const std::vector<double> logits = {1.0, 2.0, 3.0};
  const auto p = softmax(logits);
  CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p[2] / p[1] == doctest::Approx(std::exp(1.0)));

  const std::vector<double> probs = {0.8, 0.3};
  const std::vector<std::uint8_t> y = {1, 0};
  CHECK(bce_loss(probs, y) == doctest::Approx(0.2899092476264711).epsilon(1e-14));
  const std::vector<double> dist = {0.25, 0.75};
  CHECK(cce_loss(dist, 1) == doctest::Approx(-std::log(0.75)).epsilon(1e-14));

  const std::vector<double> zero = {0.0};
  const std::vector<std::uint8_t> one = {1};
  CHECK(bce_loss(zero, one) == doctest::Approx(-std::log(kProbClamp)));
}

TEST_CASE("one LSTM step matches a hand-computed oracle") {
  const auto cell = scalar_cell({0.5, -0.5, 1.0, 2.0});
  const std::vector<double> x = {1.0}, h0 = {0.0}, c0 = {0.5};
  const auto out = lstm_cell_step(cell, x, h0, c0);
  CHECK(out.c[0] == doctest::Approx(0.662831723362539).epsilon(1e-14));
  CHECK(out.h[0] == doctest::Approx(0.5110779477813117).epsilon(1e-14));

  const std::vector<double> wide = {1.0, 2.0};
  CHECK_THROWS_AS(lstm_cell_step(cell, wide, h0, c0), ShapeMismatch);
}

TEST_CASE("initialization follows Glorot bounds and gate bias conventions") {
  const auto p = ModelParams::init(Head::Boundary, abc(), 1, small());
  p.validate();
  CHECK(p.weights.embedding.rows() == 5);
  const double limit = std::sqrt(6.0 / (4.0 + 5.0));
  for (const double v : p.weights.fwd.W[kInput].data) CHECK(std::abs(v) <= limit);
  for (const double v : p.weights.fwd.b[kForget].data) CHECK(v == 1.0);
  for (const double v : p.weights.bwd.b[kForget].data) CHECK(v == 1.0);
  for (const double v : p.weights.fwd.b[kInput].data) CHECK(v == 0.0);
  for (const double v : p.weights.out_b.data) CHECK(v == 0.0);
  CHECK(p == ModelParams::init(Head::Boundary, abc(), 1, small()));

  auto broken = p;
  broken.weights.out_w = Tensor::zeros({3, 1});
  CHECK_THROWS_AS(broken.validate(), ShapeMismatch);
}

TEST_CASE("bilstm states pair forward prefix and backward suffix") {
  const auto p = ModelParams::init(Head::Boundary, abc(), 1, small());
  const std::vector<int> ids = {2, 3, 4};
  const auto states = bilstm_forward(p, ids);
  REQUIRE(states.size() == 3);
  CHECK(states[0].size() == 10);
  const std::vector<int> prefix = {2, 3};
  const auto shorter = bilstm_forward(p, prefix);
  for (std::size_t j = 0; j < 5; ++j) CHECK(shorter[1][j] == states[1][j]);
}

TEST_CASE("padding contributes neither loss nor gradient") {
  auto p = ModelParams::init(Head::Boundary, abc(), 1, small());
  const std::vector<Example> both = {{{2, 3, 4}, {0, 1, 0}, -1}, {{4}, {0}, -1}};
  const std::vector<Example> first = {both[0]};
  const std::vector<Example> second = {both[1]};
  const double l_both = batch_loss(p, make_batch(both));
  const double l1 = batch_loss(p, make_batch(first));
  const double l2 = batch_loss(p, make_batch(second));
  CHECK(l_both == doctest::Approx((3.0 * l1 + 1.0 * l2) / 4.0).epsilon(1e-13));

  const auto batch = make_batch(both);
  CHECK(batch.max_len == 3);
  CHECK(batch.ids[3 + 1] == Vocab::kPad);
  ParamSet g = p.weights.zeros_like();
  loss_and_gradient(p, batch, g);
  for (std::size_t j = 0; j < 4; ++j) CHECK(g.embedding.at(Vocab::kPad, j) == 0.0);
}

TEST_CASE("analytic gradients agree with finite differences") {
  for (const auto head : {Head::Boundary, Head::Class}) {
    for (std::uint64_t seed : {0, 1, 2}) {
      const auto r = cli::toy_gradcheck(head, seed, 4, 6);
      CHECK(r.max_rel_error < cli::kGradCheckTolerance);
      CHECK(r.components > 0);
    }
    CHECK(cli::toy_gradcheck(head, 0, 4, 6, true).max_rel_error >= cli::kGradCheckTolerance);
  }
}

TEST_CASE("adam first step and global-norm clipping") {
  ParamSet params;
  params.out_b = Tensor::zeros({2});
  params.out_b.data = {1.0, -1.0};
  ParamSet grads = params.zeros_like();
  grads.out_b.data = {0.5, -2.0};
  auto state = AdamState::for_params(params, {});
  adam_step(params, grads, state);
  CHECK(params.out_b.data[0] == doctest::Approx(1.0 - 1e-3 * 0.5 / (0.5 + 1e-8)).epsilon(1e-14));
  CHECK(params.out_b.data[1] == doctest::Approx(-1.0 + 1e-3 * 2.0 / (2.0 + 1e-8)).epsilon(1e-14));
  CHECK(state.step == 1);

  ParamSet g = params.zeros_like();
  g.out_b.data = {6.0, 8.0};
  CHECK(clip_global_norm(g, 5.0) == doctest::Approx(10.0));
  CHECK(g.out_b.data[0] == doctest::Approx(3.0));
  CHECK(g.out_b.data[1] == doctest::Approx(4.0));
  CHECK(clip_global_norm(g, 5.0) == doctest::Approx(5.0));
  CHECK(g.out_b.data[0] == doctest::Approx(3.0));

  g.out_b.data[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(g));
}

TEST_CASE("training is deterministic and lowers the loss") {
  const std::vector<Units> words = {U"abcd", U"bcda", U"cdab"};
  auto hyper = small(6, 8);
  hyper.epochs = 40;
  hyper.batch = 2;
  hyper.lr = 1e-2;
  std::vector<Example> data;
  const auto vocab = Vocab::build(words);
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::vector<std::uint8_t> bits(4, 0);
    bits[i + 1 < 4 ? i : 0] = 1;
    data.push_back({vocab.encode(words[i]), bits, -1});
  }
  auto a = ModelParams::init(Head::Boundary, vocab, 1, hyper);
  auto b = a;
  const auto log_a = fit(a, data);
  const auto log_b = fit(b, data);
  CHECK(a == b);
  CHECK(log_a.epoch_loss == log_b.epoch_loss);
  CHECK(log_a.epoch_loss.back() < log_a.epoch_loss.front());

  auto c = ModelParams::init(Head::Boundary, vocab, 1, hyper);
  std::size_t seen = 0;
  fit(c, data, [&](std::size_t, const ModelParams&) { return ++seen < 3; });
  CHECK(seen == 3);

  auto bad = ModelParams::init(Head::Boundary, vocab, 1, hyper);
  bad.weights.out_b.data[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(fit(bad, data), NumericError);
  CHECK_THROWS_AS(fit(bad, std::span<const Example>{}), EmptyTrainingSet);
}
