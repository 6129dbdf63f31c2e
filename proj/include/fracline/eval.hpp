#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracline/ann.hpp"

namespace fracline {

struct ConfusionCounts {
  long long tp = 0, tn = 0, fp = 0, fn = 0;

  long long total() const { return tp + tn + fp + fn; }
  void add(bool predicted, bool truth);
  ConfusionCounts& operator+=(const ConfusionCounts& o);
};

/// Undefined metrics (zero denominator) are empty, never NaN.
struct Metrics {
  std::optional<double> accuracy;     // (TP + TN) / total
  std::optional<double> sensitivity;  // TP / (TP + FN)
  std::optional<double> fpr;          // FP / (FP + TN)
  std::optional<double> specificity;  // TN / (TN + FP)

};

Metrics metrics(const ConfusionCounts& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) ... (1,1), non-decreasing in both axes
  double auc = 0.0;              // trapezoidal area under the staircase
};

/// One (score, is_fracture) pair per classified line.
using ScoredLabels = std::vector<std::pair<double, bool>>;

/// Sweeps a threshold over the unique scores (predict fracture when
/// score >= threshold). Throws InvalidInput when a class is missing.
RocCurve roc(const ScoredLabels& scored);

/// Upper convex hull of the ROC points: a monotone piecewise-linear curve
/// for plotting. The AUC of record stays on the staircase.
std::vector<RocPoint> roc_hull(const RocCurve& curve);

struct CaseResult {
  int case_id = 0;
  std::size_t trained = 0;  // images or lines used for training
  std::vector<double> accuracies;
  std::vector<ConfusionCounts> confusion;
  double min = 0.0, avg = 0.0, max = 0.0;

  void summarize();
};

/// Lines of one image. `screened_out` lines were removed by region filtering:
/// they are never trained on and are always predicted non-fracture.
struct ImageSample {
  std::string image_id;
  LabeledDataset rows;
  LabeledDataset screened_out;
};

struct EvaluationResult {
  ConfusionCounts counts;
  ScoredLabels scores;
};

/// Classifies every row of every test image with the model.
EvaluationResult evaluate(const NetworkModel& model, const std::vector<ImageSample>& test);
EvaluationResult evaluate(const NetworkModel& model, const LabeledDataset& test);

struct ImageSweepConfig {
  int cases = 20;
  int sims = 10;
  std::uint64_t seed = 1;
  TrainingConfig training;
  long update_budget = 0;  // > 0: every run takes about this many mini-batch steps
};

struct SweepReport {
  std::vector<CaseResult> cases;
  ScoredLabels scores;  // pooled test scores of every run
};

/// Case c trains on c images drawn at random from the training pool and
/// tests on the fixed held-out pool; each simulation draws fresh images and
/// a fresh weight seed derived from (seed, case, sim).
SweepReport image_case_sweep(const std::vector<ImageSample>& train_pool, const std::vector<ImageSample>& test_pool,
                             const ImageSweepConfig& cfg);

struct LineSweepConfig {
  int group = 5;
  int max_lines = 1500;
  int sims = 1;
  std::uint64_t seed = 1;
  TrainingConfig training;
  long update_budget = 0;

  int num_cases() const { return max_lines / (2 * group); }
};

/// Case k trains on k * group fractured plus k * group non-fractured lines
/// (nested prefixes of a per-simulation shuffle) and tests on `test`.
SweepReport line_case_sweep(const LabeledDataset& lines, const LabeledDataset& test, const LineSweepConfig& cfg);

std::string cases_to_csv(const std::vector<CaseResult>& cases);
std::string cases_to_json(const std::vector<CaseResult>& cases);
std::string roc_to_csv(const std::vector<RocPoint>& points);
// Score CSV: `score,fracture` with fracture 1 or 0.
std::string scores_to_csv(const ScoredLabels& scores);
ScoredLabels scores_from_csv(const std::string& text);

}  // namespace fracline
