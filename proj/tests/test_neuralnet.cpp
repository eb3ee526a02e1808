#include <doctest.h>

#include <cmath>

#include "crashwatch/common.hpp"
#include "crashwatch/neuralnet.hpp"

using namespace crashwatch;
using namespace crashwatch::neuralnet;

namespace {

MLPParams zero_mlp(const std::vector<std::size_t>& sizes) {
  auto p = init_mlp(sizes, 1, 0.0);
  return p;
}

bool grads_close(double analytic, double fd) {
  const double scale = std::max(std::fabs(analytic), std::fabs(fd));
  if (scale < 1e-8) return true;
  return std::fabs(analytic - fd) / scale < 1e-6;
}

// Central finite differences over every weight of the network.
void check_mlp_gradients(MLPParams params, const std::vector<double>& x,
                         const std::vector<double>& y) {
  const double h = 1e-5;
  auto grads = mlp_gradients(params, x, y);
  for (std::size_t l = 0; l < params.weights.size(); ++l)
    for (std::size_t k = 0; k < params.weights[l].data.size(); ++k) {
      const double saved = params.weights[l].data[k];
      params.weights[l].data[k] = saved + h;
      const double up = squared_error_loss(mlp_forward(params, x).activations.back(), y);
      params.weights[l].data[k] = saved - h;
      const double down = squared_error_loss(mlp_forward(params, x).activations.back(), y);
      params.weights[l].data[k] = saved;
      CHECK(grads_close(grads[l].data[k], (up - down) / (2 * h)));
    }
}

}  // namespace

TEST_CASE("mlp_forward with zero weights is maximally uncertain") {
  auto p = zero_mlp({3, 4, 2});
  auto out = mlp_predict_proba(p, {1.0, -2.0, 0.5});
  CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mlp_forward single identity layer evaluates softmax directly") {
  MLPParams p;
  p.layer_sizes = {2, 2};
  Mat w(2, 2);
  w.at(0, 0) = 1.0;
  w.at(1, 1) = 1.0;
  p.weights = {w};
  p.activations = {Activation::kSoftmax};
  auto out = mlp_predict_proba(p, {2.0, 0.0});
  const double e2 = std::exp(2.0);
  CHECK(out[0] == doctest::Approx(e2 / (e2 + 1)).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(1 / (e2 + 1)).epsilon(1e-12));
  CHECK(out[0] == doctest::Approx(0.8808).epsilon(1e-4));
  CHECK(out[1] == doctest::Approx(0.1192).epsilon(1e-4));
}

TEST_CASE("mlp_forward output is a probability pair") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = init_mlp({4, 6, 2}, rng.below(1u << 30), 0.8);
    std::vector<double> x(4);
    for (auto& v : x) v = rng.uniform(-3, 3);
    auto out = mlp_predict_proba(p, x);
    CHECK(out[0] > 0.0);
    CHECK(out[1] > 0.0);
    CHECK(out[0] < 1.0);
    CHECK(out[1] < 1.0);
    CHECK(out[0] + out[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("softmax is permutation equivariant") {
  MLPParams p;
  p.layer_sizes = {3, 2};
  Mat w(2, 3);
  w.at(0, 0) = 0.3;
  w.at(0, 1) = -1.2;
  w.at(0, 2) = 0.7;
  w.at(1, 0) = 0.9;
  w.at(1, 1) = 0.1;
  w.at(1, 2) = -0.4;
  p.weights = {w};
  p.activations = {Activation::kSoftmax};
  std::vector<double> x{1.0, 0.5, -2.0};
  auto out = mlp_predict_proba(p, x);

  MLPParams swapped = p;
  for (std::size_t j = 0; j < 3; ++j) {
    swapped.weights[0].at(0, j) = w.at(1, j);
    swapped.weights[0].at(1, j) = w.at(0, j);
  }
  auto out2 = mlp_predict_proba(swapped, x);
  CHECK(out2[0] == doctest::Approx(out[1]).epsilon(1e-12));
  CHECK(out2[1] == doctest::Approx(out[0]).epsilon(1e-12));
}

TEST_CASE("mlp_forward rejects wrong input width") {
  auto p = zero_mlp({3, 2});
  CHECK_THROWS_AS(mlp_forward(p, {1.0}), ValidationError);
}

TEST_CASE("squared_error_loss hand values") {
  CHECK(squared_error_loss({1.0, 0.0}, {1.0, 0.0}) == 0.0);
  CHECK(squared_error_loss({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("squared_error_loss is nonnegative") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a{rng.uniform(), rng.uniform()};
    std::vector<double> b{rng.uniform(), rng.uniform()};
    CHECK(squared_error_loss(a, b) >= 0.0);
  }
}

TEST_CASE("gradients vanish when output equals the label") {
  auto p = zero_mlp({3, 5, 2});
  // zero weights give exactly [0.5, 0.5]
  auto grads = mlp_gradients(p, {1.0, 2.0, 3.0}, {0.5, 0.5});
  for (const auto& g : grads)
    for (double v : g.data) CHECK(v == 0.0);
}

TEST_CASE("analytic gradients match finite differences") {
  Rng rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    auto p = init_mlp({5, 10, 5, 2}, 100 + trial, 0.5);
    std::vector<double> x(5);
    for (auto& v : x) v = rng.uniform(-1, 1);
    std::vector<double> y = rng.bernoulli(0.5) ? std::vector<double>{1.0, 0.0}
                                               : std::vector<double>{0.0, 1.0};
    check_mlp_gradients(p, x, y);
  }
}

TEST_CASE("duplicating every training example doubles the epoch step") {
  std::vector<std::vector<double>> xs{{0.0, 1.0}, {1.0, 0.0}};
  std::vector<int> ys{0, 1};
  TrainConfig cfg;
  cfg.alpha = 0.1;
  cfg.loss_threshold = 0.0;
  cfg.max_epochs = 1;
  cfg.seed = 11;
  cfg.init_scale = 0.3;

  auto before = init_mlp({2, 3, 2}, cfg.seed, cfg.init_scale);
  auto single = train_mlp(xs, ys, {2, 3, 2}, cfg);
  std::vector<std::vector<double>> xs2{xs[0], xs[1], xs[0], xs[1]};
  std::vector<int> ys2{0, 1, 0, 1};
  auto doubled = train_mlp(xs2, ys2, {2, 3, 2}, cfg);

  for (std::size_t l = 0; l < before.weights.size(); ++l)
    for (std::size_t k = 0; k < before.weights[l].data.size(); ++k) {
      const double d1 = single.params.weights[l].data[k] - before.weights[l].data[k];
      const double d2 = doubled.params.weights[l].data[k] - before.weights[l].data[k];
      CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-9));
    }
}

TEST_CASE("gradient_descent_step arithmetic") {
  MLPParams p;
  p.layer_sizes = {1, 2};
  p.weights = {Mat(1, 1)};
  p.weights[0].data[0] = 1.0;
  p.activations = {Activation::kSoftmax};
  std::vector<Mat> g{Mat(1, 1)};
  g[0].data[0] = 0.5;
  gradient_descent_step(p, g, 0.2);
  CHECK(p.weights[0].data[0] == doctest::Approx(0.9).epsilon(1e-12));
  gradient_descent_step(p, g, 0.0);
  CHECK(p.weights[0].data[0] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("one gradient step decreases the loss on a single layer") {
  auto p = init_mlp({2, 2}, 3, 0.4);
  std::vector<double> x{1.0, -0.5}, y{1.0, 0.0};
  const double before = squared_error_loss(mlp_forward(p, x).activations.back(), y);
  auto grads = mlp_gradients(p, x, y);
  gradient_descent_step(p, grads, 0.05);
  const double after = squared_error_loss(mlp_forward(p, x).activations.back(), y);
  CHECK(after < before);
}

TEST_CASE("train_mlp solves xor") {
  std::vector<std::vector<double>> xs{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::vector<int> ys{0, 1, 1, 0};
  TrainConfig cfg;
  cfg.alpha = 0.2;
  cfg.loss_threshold = 1e-3;
  cfg.max_epochs = 5000;
  cfg.seed = 42;
  cfg.init_scale = 0.5;
  auto trained = train_mlp(xs, ys, {2, 10, 5, 2}, cfg);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(mlp_predict(trained.params, xs[i]) == ys[i]);
  CHECK(trained.loss_trace.size() <= 5000);
}

TEST_CASE("train_mlp is deterministic in the seed") {
  std::vector<std::vector<double>> xs{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::vector<int> ys{0, 1, 1, 0};
  TrainConfig cfg;
  cfg.alpha = 0.1;
  cfg.max_epochs = 50;
  cfg.loss_threshold = 0.0;
  auto a = train_mlp(xs, ys, {2, 4, 2}, cfg);
  auto b = train_mlp(xs, ys, {2, 4, 2}, cfg);
  for (std::size_t l = 0; l < a.params.weights.size(); ++l)
    CHECK(a.params.weights[l].data == b.params.weights[l].data);
  CHECK(a.loss_trace == b.loss_trace);

  cfg.seed = 43;
  auto c = train_mlp(xs, ys, {2, 4, 2}, cfg);
  CHECK(a.params.weights[0].data != c.params.weights[0].data);
}

TEST_CASE("train_mlp loss trace is non-increasing at a small alpha") {
  // linearly separable toy problem
  std::vector<std::vector<double>> xs{{1, 0}, {0.9, 0.1}, {0, 1}, {0.1, 0.9}};
  std::vector<int> ys{1, 1, 0, 0};
  TrainConfig cfg;
  cfg.alpha = 0.02;
  cfg.max_epochs = 300;
  cfg.loss_threshold = 0.0;
  auto t = train_mlp(xs, ys, {2, 2}, cfg);
  for (std::size_t i = 1; i < t.loss_trace.size(); ++i)
    CHECK(t.loss_trace[i] <= t.loss_trace[i - 1] + 1e-15);
}

TEST_CASE("train_mlp rejects single-class data") {
  std::vector<std::vector<double>> xs{{0, 0}, {1, 1}};
  std::vector<int> ys{1, 1};
  TrainConfig cfg;
  CHECK_THROWS_WITH_AS(train_mlp(xs, ys, {2, 2}, cfg),
                       doctest::Contains("both classes"), ValidationError);
}

TEST_CASE("train_mlp reports divergence with the epoch") {
  // the first step overflows the column-0 weights to infinity; the second
  // example then multiplies them by its zero component, yielding NaN
  std::vector<std::vector<double>> xs{{30, 0}, {0, 30}};
  std::vector<int> ys{1, 0};
  TrainConfig cfg;
  cfg.alpha = 1e308;
  cfg.max_epochs = 50;
  CHECK_THROWS_WITH_AS(train_mlp(xs, ys, {2, 2}, cfg), doctest::Contains("epoch"),
                       DivergenceError);
}

TEST_CASE("train config validation") {
  std::vector<std::vector<double>> xs{{0, 0}, {1, 1}};
  std::vector<int> ys{0, 1};
  TrainConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(train_mlp(xs, ys, {2, 2}, cfg), ConfigError);
  cfg.alpha = 0.1;
  cfg.max_epochs = 0;
  CHECK_THROWS_AS(train_mlp(xs, ys, {2, 2}, cfg), ConfigError);
}

TEST_CASE("lstm cell with zero parameters halves the carried state") {
  auto p = init_lstm(2, 3, 1, 0.0);
  std::vector<double> x{0.7, -0.3};
  std::vector<double> h0{0.1, 0.2, 0.3}, c0{1.0, -2.0, 0.5};
  std::vector<double> h1, c1;
  lstm_cell_step(p, x, h0, c0, h1, c1);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(c1[i] == doctest::Approx(0.5 * c0[i]).epsilon(1e-12));
    CHECK(h1[i] == doctest::Approx(0.5 * std::tanh(0.5 * c0[i])).epsilon(1e-12));
  }
}

TEST_CASE("lstm cell from zero state and zero parameters stays at zero") {
  auto p = init_lstm(2, 3, 1, 0.0);
  std::vector<double> h1, c1;
  lstm_cell_step(p, {1.0, 1.0}, {0, 0, 0}, {0, 0, 0}, h1, c1);
  for (double v : h1) CHECK(v == 0.0);
  for (double v : c1) CHECK(v == 0.0);
}

TEST_CASE("saturated forget gate preserves the cell state") {
  auto p = init_lstm(2, 3, 1, 0.0);
  for (auto& b : p.bf) b = 20.0;
  std::vector<double> c0{1.0, -0.8, 0.4};
  std::vector<double> h1, c1;
  lstm_cell_step(p, {0.5, 0.5}, {0, 0, 0}, c0, h1, c1);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::fabs(c1[i] - c0[i]) < 1e-6);
}

TEST_CASE("lstm_classify on one zero step is maximally uncertain") {
  auto p = init_lstm(4, 3, 1, 0.0);
  auto out = lstm_classify(p, std::vector<std::size_t>{2});
  CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("lstm_classify is order sensitive") {
  auto p = init_lstm(4, 5, 77, 0.6);
  auto fwd = lstm_classify(p, std::vector<std::size_t>{0, 1});
  auto rev = lstm_classify(p, std::vector<std::size_t>{1, 0});
  CHECK(std::fabs(fwd[0] - rev[0]) > 1e-9);
}

TEST_CASE("lstm_classify output sums to one") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = init_lstm(5, 4, rng.below(1u << 30), 0.7);
    std::vector<std::size_t> seq(1 + rng.below(8));
    for (auto& t : seq) t = rng.below(5);
    auto out = lstm_classify(p, seq);
    CHECK(out[0] + out[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out[0] > 0.0);
    CHECK(out[1] > 0.0);
  }
}

TEST_CASE("lstm_classify rejects empty sequences") {
  auto p = init_lstm(4, 3, 1, 0.1);
  CHECK_THROWS_WITH_AS(lstm_classify(p, std::vector<std::size_t>{}),
                       doctest::Contains("no selected tokens"), ValidationError);
}

TEST_CASE("bptt gradients match finite differences") {
  const double h = 1e-5;
  auto p = init_lstm(3, 3, 2024, 0.5);
  auto seq = one_hot_sequence({0, 2, 1, 0}, 3);
  std::vector<double> y{1.0, 0.0};
  auto grads = lstm_gradients(p, seq, y);

  auto loss_at = [&](const LSTMParams& q) {
    auto out = lstm_classify(q, seq);
    return squared_error_loss({out[0], out[1]}, y);
  };
  auto check_block = [&](Mat LSTMParams::* wp, Mat LSTMGradients::* gp) {
    for (std::size_t k = 0; k < (p.*wp).data.size(); ++k) {
      LSTMParams q = p;
      (q.*wp).data[k] += h;
      const double up = loss_at(q);
      (q.*wp).data[k] -= 2 * h;
      const double down = loss_at(q);
      CHECK(grads_close((grads.*gp).data[k], (up - down) / (2 * h)));
    }
  };
  auto check_bias = [&](std::vector<double> LSTMParams::* bp,
                        std::vector<double> LSTMGradients::* gp) {
    for (std::size_t k = 0; k < (p.*bp).size(); ++k) {
      LSTMParams q = p;
      (q.*bp)[k] += h;
      const double up = loss_at(q);
      (q.*bp)[k] -= 2 * h;
      const double down = loss_at(q);
      CHECK(grads_close((grads.*gp)[k], (up - down) / (2 * h)));
    }
  };
  check_block(&LSTMParams::wf, &LSTMGradients::wf);
  check_block(&LSTMParams::wi, &LSTMGradients::wi);
  check_block(&LSTMParams::wc, &LSTMGradients::wc);
  check_block(&LSTMParams::wo, &LSTMGradients::wo);
  check_block(&LSTMParams::head, &LSTMGradients::head);
  check_bias(&LSTMParams::bf, &LSTMGradients::bf);
  check_bias(&LSTMParams::bi, &LSTMGradients::bi);
  check_bias(&LSTMParams::bc, &LSTMGradients::bc);
  check_bias(&LSTMParams::bo, &LSTMGradients::bo);
}

TEST_CASE("train_lstm learns token order") {
  // label 1 when token 0 appears before token 1; fillers 2 and 3
  Rng rng(2014);
  std::vector<std::vector<std::size_t>> seqs;
  std::vector<int> labels;
  for (int n = 0; n < 500; ++n) {
    std::size_t len = 4 + rng.below(4);
    std::vector<std::size_t> s(len);
    for (auto& t : s) t = 2 + rng.below(2);
    std::size_t pa = rng.below(len), pb = rng.below(len);
    while (pb == pa) pb = rng.below(len);
    s[pa] = 0;
    s[pb] = 1;
    seqs.push_back(s);
    labels.push_back(pa < pb ? 1 : 0);
  }
  TrainConfig cfg;
  cfg.alpha = 0.002;
  cfg.loss_threshold = 0.02;
  cfg.max_epochs = 400;
  cfg.seed = 7;
  cfg.init_scale = 0.4;
  auto trained = train_lstm(seqs, labels, 4, 8, cfg);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i)
    if (lstm_predict(trained.params, seqs[i]) == labels[i]) ++correct;
  CHECK(static_cast<double>(correct) / seqs.size() >= 0.95);
}

TEST_CASE("train_lstm is deterministic in the seed") {
  std::vector<std::vector<std::size_t>> seqs{{0, 1}, {1, 0}, {0, 1, 0}, {1, 1, 0}};
  std::vector<int> labels{1, 0, 1, 0};
  TrainConfig cfg;
  cfg.alpha = 0.05;
  cfg.max_epochs = 30;
  cfg.loss_threshold = 0.0;
  auto a = train_lstm(seqs, labels, 2, 3, cfg);
  auto b = train_lstm(seqs, labels, 2, 3, cfg);
  CHECK(a.params.wf.data == b.params.wf.data);
  CHECK(a.params.head.data == b.params.head.data);
  CHECK(a.loss_trace == b.loss_trace);
}

TEST_CASE("train_lstm drops empty sequences and rejects an empty remainder") {
  std::vector<std::vector<std::size_t>> seqs{{0, 1}, {}, {1}, {}};
  std::vector<int> labels{1, 1, 0, 0};
  TrainConfig cfg;
  cfg.alpha = 0.05;
  cfg.max_epochs = 5;
  CHECK_NOTHROW(train_lstm(seqs, labels, 2, 3, cfg));

  std::vector<std::vector<std::size_t>> all_empty{{}, {}};
  CHECK_THROWS_AS(train_lstm(all_empty, {1, 0}, 2, 3, cfg), ValidationError);
}

TEST_CASE("one_hot_sequence encodes indices") {
  auto seq = one_hot_sequence({2, 0}, 3);
  REQUIRE(seq.size() == 2);
  CHECK(seq[0] == std::vector<double>{0, 0, 1});
  CHECK(seq[1] == std::vector<double>{1, 0, 0});
  CHECK_THROWS_AS(one_hot_sequence({3}, 3), ValidationError);
}

TEST_CASE("mlp params json round trips") {
  auto p = init_mlp({3, 4, 2}, 9, 0.3);
  auto q = parse_mlp_params_json(mlp_params_json(p));
  CHECK(q.layer_sizes == p.layer_sizes);
  for (std::size_t l = 0; l < p.weights.size(); ++l)
    CHECK(q.weights[l].data == p.weights[l].data);
  CHECK_THROWS_AS(parse_mlp_params_json("{\"kind\":\"lstm\"}"), ValidationError);
}

TEST_CASE("lstm params json round trips") {
  auto p = init_lstm(3, 4, 9, 0.3);
  auto q = parse_lstm_params_json(lstm_params_json(p));
  CHECK(q.input_dim == p.input_dim);
  CHECK(q.hidden_dim == p.hidden_dim);
  CHECK(q.wf.data == p.wf.data);
  CHECK(q.bo == p.bo);
  CHECK(q.head.data == p.head.data);
  CHECK_THROWS_AS(parse_lstm_params_json("not json"), ValidationError);
}
