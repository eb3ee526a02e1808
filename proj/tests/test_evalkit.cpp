#include <doctest.h>

#include <algorithm>
#include <set>

#include "crashwatch/common.hpp"
#include "crashwatch/evalkit.hpp"

using namespace crashwatch;
using namespace crashwatch::evalkit;

TEST_CASE("kfold_split partitions evenly when k divides n") {
  auto plan = kfold_split(10, 5, 42);
  CHECK(plan.k == 5);
  REQUIRE(plan.assignments.size() == 10);
  std::vector<std::size_t> sizes(5, 0);
  for (auto f : plan.assignments) {
    REQUIRE(f < 5);
    ++sizes[f];
  }
  for (auto s : sizes) CHECK(s == 2);
}

TEST_CASE("kfold_split spreads the remainder one per fold") {
  auto plan = kfold_split(11, 5, 42);
  std::vector<std::size_t> sizes(5, 0);
  for (auto f : plan.assignments) ++sizes[f];
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{2, 2, 2, 2, 3});
}

TEST_CASE("kfold_split is deterministic per seed") {
  auto a = kfold_split(50, 5, 7);
  auto b = kfold_split(50, 5, 7);
  CHECK(a.assignments == b.assignments);
  auto c = kfold_split(50, 5, 8);
  CHECK(a.assignments != c.assignments);
}

TEST_CASE("kfold_split fold sizes never differ by more than one") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t k = 2 + rng.below(6);
    std::size_t n = k + rng.below(80);
    auto plan = kfold_split(n, k, rng.below(1000));
    std::vector<std::size_t> sizes(k, 0);
    for (auto f : plan.assignments) ++sizes[f];
    auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("kfold_split rejects bad fold counts") {
  CHECK_THROWS_AS(kfold_split(3, 5, 1), ValidationError);
  CHECK_THROWS_AS(kfold_split(10, 1, 1), ConfigError);
}

TEST_CASE("metrics worked example") {
  Metrics m = metrics_from_counts({8, 2, 3, 7});
  CHECK(m.accuracy == 0.75);
  REQUIRE(m.precision_accident.has_value());
  REQUIRE(m.precision_nonaccident.has_value());
  CHECK(*m.precision_accident == 0.8);
  CHECK(*m.precision_nonaccident == 0.7);
}

TEST_CASE("classification_metrics fills the standard cells") {
  // truth/pred: (1,1)=tp, (1,0)=fn, (0,1)=fp, (0,0)=tn
  std::vector<int> truth{1, 1, 0, 0, 1};
  std::vector<int> pred{1, 0, 1, 0, 1};
  auto m = classification_metrics(truth, pred);
  CHECK(m.confusion.tp == 2);
  CHECK(m.confusion.fn == 1);
  CHECK(m.confusion.fp == 1);
  CHECK(m.confusion.tn == 1);
  CHECK(m.confusion.total() == 5);
}

TEST_CASE("perfect prediction scores one across the board") {
  std::vector<int> truth{1, 0, 1, 0};
  auto m = classification_metrics(truth, truth);
  CHECK(m.accuracy == 1.0);
  CHECK(*m.precision_accident == 1.0);
  CHECK(*m.precision_nonaccident == 1.0);
}

TEST_CASE("never predicting a class leaves its precision undefined") {
  std::vector<int> truth{1, 0, 1, 0};
  std::vector<int> zeros{0, 0, 0, 0};
  auto m = classification_metrics(truth, zeros);
  CHECK(!m.precision_accident.has_value());
  CHECK(m.precision_nonaccident.has_value());
  auto m2 = classification_metrics(truth, {1, 1, 1, 1});
  CHECK(m2.precision_accident.has_value());
  CHECK(!m2.precision_nonaccident.has_value());
}

TEST_CASE("accuracy is invariant under a joint label swap") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng.below(40);
    std::vector<int> truth(n), pred(n);
    for (auto& v : truth) v = rng.bernoulli(0.5) ? 1 : 0;
    for (auto& v : pred) v = rng.bernoulli(0.5) ? 1 : 0;
    auto m = classification_metrics(truth, pred);
    std::vector<int> truth2 = truth, pred2 = pred;
    for (auto& v : truth2) v = 1 - v;
    for (auto& v : pred2) v = 1 - v;
    auto m2 = classification_metrics(truth2, pred2);
    CHECK(m.accuracy == m2.accuracy);
    CHECK(m.confusion.total() == static_cast<long long>(n));
  }
}

TEST_CASE("metrics reject mismatched or empty input") {
  CHECK_THROWS_AS(classification_metrics({1, 0}, {1}), ValidationError);
  CHECK_THROWS_AS(classification_metrics({}, {}), ValidationError);
}

TEST_CASE("cross_validate majority classifier lands at the base rate") {
  // 100 accident, 200 non-accident; predicting all 0 is right 2/3 of the time
  std::vector<int> labels;
  for (int i = 0; i < 100; ++i) labels.push_back(1);
  for (int i = 0; i < 200; ++i) labels.push_back(0);
  std::size_t calls = 0;
  FoldTrainer majority = [&](const std::vector<std::size_t>&,
                             const std::vector<std::size_t>& test) {
    ++calls;
    CHECK(test.size() == 60);
    return std::vector<int>(test.size(), 0);
  };
  auto report = cross_validate(labels, majority, 5, 42);
  CHECK(calls == 5);
  CHECK(report.per_fold.size() == 5);
  // folds are equal size, so the unweighted fold mean is the base rate
  CHECK(report.mean_accuracy == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // never predicts accident, so that precision is undefined in every fold
  CHECK(!report.mean_precision_accident.has_value());
  CHECK(report.excluded_undefined == 5);
}

TEST_CASE("cross_validate uses every index exactly once as test") {
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) labels.push_back(i % 2);
  std::vector<std::size_t> seen;
  FoldTrainer echo = [&](const std::vector<std::size_t>& train,
                         const std::vector<std::size_t>& test) {
    for (auto i : test) seen.push_back(i);
    std::set<std::size_t> tr(train.begin(), train.end());
    for (auto i : test) CHECK(!tr.count(i));
    std::vector<int> pred;
    for (auto i : test) pred.push_back(labels[i]);
    return pred;
  };
  auto report = cross_validate(labels, echo, 5, 9);
  std::sort(seen.begin(), seen.end());
  REQUIRE(seen.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) CHECK(seen[i] == i);
  CHECK(report.mean_accuracy == 1.0);
}

TEST_CASE("cross_validate refuses permanently degenerate splits") {
  // a lone positive example makes some training split single-class no
  // matter how the folds fall
  std::vector<int> labels{1, 0, 0, 0};
  FoldTrainer dummy = [](const std::vector<std::size_t>&,
                         const std::vector<std::size_t>& test) {
    return std::vector<int>(test.size(), 0);
  };
  CHECK_THROWS_WITH_AS(cross_validate(labels, dummy, 2, 1),
                       doctest::Contains("class-degenerate"), ValidationError);
}

TEST_CASE("metrics report json shape") {
  std::vector<int> labels{1, 0, 1, 0, 1, 0};
  FoldTrainer echo = [&](const std::vector<std::size_t>&,
                         const std::vector<std::size_t>& test) {
    std::vector<int> pred;
    for (auto i : test) pred.push_back(labels[i]);
    return pred;
  };
  auto report = cross_validate(labels, echo, 2, 5);
  auto json = metrics_report_json(report);
  CHECK(json.find("\"per_fold\"") != std::string::npos);
  CHECK(json.find("\"mean\"") != std::string::npos);
  CHECK(json.find("\"excluded_undefined\"") != std::string::npos);
}
