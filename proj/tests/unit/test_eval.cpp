#include <random>

#include "doctest.h"
#include "fracline/eval.hpp"
#include "support/oracles.hpp"

using namespace fracline;
using doctest::Approx;

TEST_CASE("metrics from a confusion table") {
  ConfusionCounts c;
  c.tp = 3, c.tn = 5, c.fp = 2, c.fn = 1;
  const auto m = metrics(c);
  CHECK(*m.accuracy == Approx(8.0 / 11));
  CHECK(*m.sensitivity == Approx(3.0 / 4));
  CHECK(*m.fpr == Approx(2.0 / 7));
  CHECK(*m.specificity == Approx(5.0 / 7));

  ConfusionCounts d;
  d.add(true, true);
  d.add(false, true);
  d.add(true, false);
  d.add(false, false);
  d += c;
  CHECK(d.tp == 4);
  CHECK(d.fn == 2);
  CHECK(d.fp == 3);
  CHECK(d.tn == 6);
}

TEST_CASE("undefined metrics stay empty") {
  CHECK_FALSE(metrics({}).accuracy);
  ConfusionCounts only_neg;
  only_neg.tn = 4;
  const auto m = metrics(only_neg);
  CHECK(*m.accuracy == 1.0);
  CHECK_FALSE(m.sensitivity);
  CHECK(*m.fpr == 0.0);
}

TEST_CASE("ROC area equals the Mann-Whitney statistic, ties included") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    ScoredLabels s;
    for (int i = 0; i < 60; ++i) {
      const bool pos = i % 3 == 0;
      s.push_back({std::round((g(rng) + (pos ? 0.8 : 0.0)) * 4) / 4, pos});  // coarse grid forces ties
    }
    const auto r = roc(s);
    CHECK(r.auc == Approx(oracle::mann_whitney_auc(s)).epsilon(1e-12));
    CHECK(r.points.front().fpr == 0.0);
    CHECK(r.points.front().tpr == 0.0);
    CHECK(r.points.back().fpr == 1.0);
    CHECK(r.points.back().tpr == 1.0);
    for (std::size_t i = 1; i < r.points.size(); ++i) {
      CHECK(r.points[i].fpr >= r.points[i - 1].fpr);
      CHECK(r.points[i].tpr >= r.points[i - 1].tpr);
    }
  }
}

TEST_CASE("perfect, inverted and constant scores") {
  const ScoredLabels perfect{{0.9, true}, {0.8, true}, {0.1, false}, {-0.5, false}};
  CHECK(roc(perfect).auc == 1.0);
  ScoredLabels inverted = perfect;
  for (auto& [s, t] : inverted) t = !t;
  CHECK(roc(inverted).auc == 0.0);
  CHECK(roc({{0.3, true}, {0.3, false}}).auc == 0.5);
  CHECK_THROWS_AS(roc({{0.1, true}, {0.2, true}}), Error);
  CHECK_THROWS_AS(roc({}), Error);
}

TEST_CASE("ROC hull is concave and dominates the staircase") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u;
  ScoredLabels s;
  for (int i = 0; i < 80; ++i) s.push_back({u(rng) + (i % 2 ? 0.3 : 0.0), i % 2 == 1});
  const auto r = roc(s);
  const auto h = roc_hull(r);
  REQUIRE(h.size() >= 2);
  CHECK(h.front().fpr == 0.0);
  CHECK(h.back().tpr == 1.0);
  for (std::size_t i = 2; i < h.size(); ++i) {
    const double s1 = (h[i - 1].tpr - h[i - 2].tpr) * (h[i].fpr - h[i - 1].fpr);
    const double s2 = (h[i].tpr - h[i - 1].tpr) * (h[i - 1].fpr - h[i - 2].fpr);
    CHECK(s2 <= s1 + 1e-12);
  }
  for (const auto& p : r.points) {
    for (std::size_t i = 1; i < h.size(); ++i)
      if (p.fpr >= h[i - 1].fpr && p.fpr <= h[i].fpr && h[i].fpr > h[i - 1].fpr) {
        const double t = (p.fpr - h[i - 1].fpr) / (h[i].fpr - h[i - 1].fpr);
        CHECK(p.tpr <= h[i - 1].tpr + t * (h[i].tpr - h[i - 1].tpr) + 1e-12);
      }
  }
}

namespace {

LabeledDataset separable(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  LabeledDataset d;
  for (int i = 0; i < n; ++i) {
    LabeledRow r;
    for (auto& v : r.inputs) v = g(rng);
    r.target = i % 2 ? 1.0 : -1.0;
    r.inputs[1] += 3 * r.target;
    d.push_back(r);
  }
  return d;
}

}  // namespace

TEST_CASE("image case sweep shape") {
  std::vector<ImageSample> train_pool, test_pool;
  for (int i = 0; i < 6; ++i) train_pool.push_back({"tr" + std::to_string(i), separable(10, i), {}});
  for (int i = 0; i < 2; ++i) test_pool.push_back({"te" + std::to_string(i), separable(10, 50 + i), separable(3, 90 + i)});
  ImageSweepConfig cfg;
  cfg.cases = 4;
  cfg.sims = 3;
  cfg.training.max_epochs = 30;
  const auto a = image_case_sweep(train_pool, test_pool, cfg);
  REQUIRE(a.cases.size() == 4);
  for (int c = 0; c < 4; ++c) {
    const auto& r = a.cases[c];
    CHECK(r.case_id == c + 1);
    CHECK(r.trained == static_cast<std::size_t>(c + 1));
    CHECK(r.accuracies.size() == 3);
    CHECK(r.min <= r.avg);
    CHECK(r.avg <= r.max);
    for (const auto& cc : r.confusion) CHECK(cc.total() == 26);  // screened rows count as non-fracture predictions
  }
  CHECK(a.scores.size() == 4u * 3u * 26u);
  const auto b = image_case_sweep(train_pool, test_pool, cfg);
  CHECK(a.scores == b.scores);
  CHECK(cases_to_csv(a.cases).find("case") == 0);
}

TEST_CASE("line case sweep shape") {
  const auto lines = separable(60, 1), test = separable(20, 2);
  LineSweepConfig cfg;
  cfg.group = 3;
  cfg.max_lines = 30;
  cfg.sims = 2;
  cfg.training.max_epochs = 20;
  const auto r = line_case_sweep(lines, test, cfg);
  REQUIRE(r.cases.size() == 5);
  for (int c = 0; c < 5; ++c) CHECK(r.cases[c].trained == static_cast<std::size_t>(6 * (c + 1)));
  cfg.max_lines = 200;  // needs 99 of each class
  CHECK_THROWS_AS(line_case_sweep(lines, test, cfg), Error);
}

TEST_CASE("score CSV round trip") {
  const ScoredLabels s{{0.25, true}, {-0.125, false}, {1.0, true}};
  CHECK(scores_from_csv(scores_to_csv(s)) == s);
  CHECK_THROWS_AS(scores_from_csv("score,fracture\n0.1,2\n"), Error);
}
