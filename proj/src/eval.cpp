#include "fracline/eval.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <random>

#include "json.hpp"
#include "fracline/csv.hpp"
#include "fracline/parallel.hpp"

namespace fracline {

void ConfusionCounts::add(bool predicted, bool truth) {
  if (predicted) (truth ? tp : fp) += 1;
  else (truth ? fn : tn) += 1;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

Metrics metrics(const ConfusionCounts& c) {
  if (c.tp < 0 || c.tn < 0 || c.fp < 0 || c.fn < 0) fail(ErrorCode::InvalidInput, "negative confusion count");
  const auto ratio = [](long long num, long long den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  Metrics m;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.sensitivity = ratio(c.tp, c.tp + c.fn);
  m.fpr = ratio(c.fp, c.fp + c.tn);
  m.specificity = ratio(c.tn, c.tn + c.fp);
  return m;
}

RocCurve roc(const ScoredLabels& scored) {
  if (scored.empty()) fail(ErrorCode::InvalidInput, "ROC needs scored examples");
  std::size_t pos = 0;
  for (const auto& [s, t] : scored) {
    if (!std::isfinite(s)) fail(ErrorCode::InvalidInput, "ROC score is not finite");
    pos += t;
  }
  const std::size_t neg = scored.size() - pos;
  if (pos == 0 || neg == 0) fail(ErrorCode::InvalidInput, "degenerate ROC: only one class present");

  ScoredLabels sorted = scored;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve c;
  c.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double s = sorted[i].first;
    for (; i < sorted.size() && sorted[i].first == s; ++i) (sorted[i].second ? tp : fp) += 1;
    c.points.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
  }
  for (std::size_t k = 1; k < c.points.size(); ++k) {
    const auto& a = c.points[k - 1];
    const auto& b = c.points[k];
    c.auc += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  return c;
}

std::vector<RocPoint> roc_hull(const RocCurve& curve) {
  std::vector<RocPoint> pts = curve.points;
  std::sort(pts.begin(), pts.end(),
            [](const RocPoint& a, const RocPoint& b) { return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr < b.tpr); });
  std::vector<RocPoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.fpr - a.fpr) * (p.tpr - a.tpr) - (b.tpr - a.tpr) * (p.fpr - a.fpr);
      if (cross < 0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return hull;
}

void CaseResult::summarize() {
  if (accuracies.empty()) fail(ErrorCode::InvalidInput, "case has no simulations");
  min = *std::min_element(accuracies.begin(), accuracies.end());
  max = *std::max_element(accuracies.begin(), accuracies.end());
  avg = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / static_cast<double>(accuracies.size());
  avg = std::clamp(avg, min, max);
}

EvaluationResult evaluate(const NetworkModel& model, const LabeledDataset& test) {
  EvaluationResult r;
  for (const auto& row : test) {
    const double o = infer(model, row.inputs);
    const bool truth = row.target > 0;
    r.counts.add(classify(o), truth);
    r.scores.emplace_back(o, truth);
  }
  return r;
}

EvaluationResult evaluate(const NetworkModel& model, const std::vector<ImageSample>& test) {
  EvaluationResult r;
  for (const auto& img : test) {
    auto part = evaluate(model, img.rows);
    r.counts += part.counts;
    r.scores.insert(r.scores.end(), part.scores.begin(), part.scores.end());
    for (const auto& row : img.screened_out) {
      const bool truth = row.target > 0;
      r.counts.add(false, truth);
      r.scores.emplace_back(-1.0, truth);
    }
  }
  return r;
}

namespace {

struct Run {
  double accuracy = 0.0;
  ConfusionCounts counts;
  ScoredLabels scores;
};

SweepReport collect(int cases, int sims, const std::vector<std::size_t>& trained, std::vector<Run>& runs) {
  SweepReport rep;
  for (int c = 0; c < cases; ++c) {
    CaseResult cr;
    cr.case_id = c + 1;
    cr.trained = trained[static_cast<std::size_t>(c)];
    for (int s = 0; s < sims; ++s) {
      auto& run = runs[static_cast<std::size_t>(c * sims + s)];
      cr.accuracies.push_back(run.accuracy);
      cr.confusion.push_back(run.counts);
      rep.scores.insert(rep.scores.end(), run.scores.begin(), run.scores.end());
    }
    cr.summarize();
    rep.cases.push_back(std::move(cr));
  }
  return rep;
}

Run score_run(const EvaluationResult& ev) {
  Run run;
  run.counts = ev.counts;
  run.scores = ev.scores;
  run.accuracy = metrics(ev.counts).accuracy.value_or(0.0);
  return run;
}

}  // namespace

SweepReport image_case_sweep(const std::vector<ImageSample>& train_pool, const std::vector<ImageSample>& test_pool,
                             const ImageSweepConfig& cfg) {
  cfg.training.validate();
  if (cfg.cases < 1 || cfg.sims < 1) fail(ErrorCode::InvalidConfig, "image sweep needs cases >= 1 and sims >= 1");
  if (train_pool.size() < static_cast<std::size_t>(cfg.cases))
    fail(ErrorCode::InvalidConfig, "training pool has " + std::to_string(train_pool.size()) + " images, need " +
                                       std::to_string(cfg.cases));
  if (test_pool.empty()) fail(ErrorCode::InvalidConfig, "test pool is empty");
  for (const auto& t : test_pool)
    for (const auto& tr : train_pool)
      if (t.image_id == tr.image_id) fail(ErrorCode::InvalidConfig, "image " + t.image_id + " is in both pools");

  const std::size_t total = static_cast<std::size_t>(cfg.cases) * cfg.sims;
  std::vector<Run> runs(total);
  parallel_for(total, [&](std::size_t k) {
    const int c = static_cast<int>(k) / cfg.sims + 1;
    const int s = static_cast<int>(k) % cfg.sims;
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(s));
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx(train_pool.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(c); ++i)
      std::swap(idx[i], idx[i + rng() % (idx.size() - i)]);

    LabeledDataset data;
    for (int i = 0; i < c; ++i) {
      const auto& rows = train_pool[idx[static_cast<std::size_t>(i)]].rows;
      data.insert(data.end(), rows.begin(), rows.end());
    }
    if (data.empty()) fail(ErrorCode::InvalidConfig, "drawn training images contain no lines");
    const auto trained = train(data, with_update_budget(cfg.training, data.size(), cfg.update_budget), mix_seed(seed));
    runs[k] = score_run(evaluate(trained.model, test_pool));
  });

  std::vector<std::size_t> trained(static_cast<std::size_t>(cfg.cases));
  std::iota(trained.begin(), trained.end(), 1);
  return collect(cfg.cases, cfg.sims, trained, runs);
}

SweepReport line_case_sweep(const LabeledDataset& lines, const LabeledDataset& test, const LineSweepConfig& cfg) {
  cfg.training.validate();
  if (cfg.group < 1 || cfg.max_lines < 2 * cfg.group || cfg.sims < 1)
    fail(ErrorCode::InvalidConfig, "line sweep needs group >= 1, max_lines >= 2 * group and sims >= 1");
  if (test.empty()) fail(ErrorCode::InvalidConfig, "line sweep test set is empty");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < lines.size(); ++i) (lines[i].target > 0 ? pos : neg).push_back(i);
  const int cases = cfg.num_cases();
  const auto per_class = static_cast<std::size_t>(cases) * cfg.group;
  if (pos.size() < per_class || neg.size() < per_class)
    fail(ErrorCode::InvalidConfig, "line sweep needs " + std::to_string(per_class) +
                                       " lines of each class, have " + std::to_string(pos.size()) + " fractured and " +
                                       std::to_string(neg.size()) + " non-fractured");

  // one balanced ordering per simulation; cases use nested prefixes
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> orders;
  for (int s = 0; s < cfg.sims; ++s) {
    std::mt19937_64 rng(derive_seed(cfg.seed, 0, static_cast<std::uint64_t>(s)));
    auto p = pos, n = neg;
    for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
    for (std::size_t i = n.size(); i > 1; --i) std::swap(n[i - 1], n[rng() % i]);
    orders.emplace_back(std::move(p), std::move(n));
  }

  const std::size_t total = static_cast<std::size_t>(cases) * cfg.sims;
  std::vector<Run> runs(total);
  parallel_for(total, [&](std::size_t k) {
    const int c = static_cast<int>(k) / cfg.sims + 1;
    const int s = static_cast<int>(k) % cfg.sims;
    const auto& [p, n] = orders[static_cast<std::size_t>(s)];
    const auto take = static_cast<std::size_t>(c) * cfg.group;
    LabeledDataset data;
    for (std::size_t i = 0; i < take; ++i) {
      data.push_back(lines[p[i]]);
      data.push_back(lines[n[i]]);
    }
    const auto trained =
        train(data, with_update_budget(cfg.training, data.size(), cfg.update_budget), derive_seed(cfg.seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(s) + 1));
    runs[k] = score_run(evaluate(trained.model, test));
  });

  std::vector<std::size_t> trained;
  for (int c = 1; c <= cases; ++c) trained.push_back(static_cast<std::size_t>(2 * c * cfg.group));
  return collect(cases, cfg.sims, trained, runs);
}

std::string cases_to_csv(const std::vector<CaseResult>& cases) {
  std::string out = "case,min,avg,max\n";
  for (const auto& c : cases)
    out += std::to_string(c.case_id) + ',' + csv::num(c.min) + ',' + csv::num(c.avg) + ',' + csv::num(c.max) + '\n';
  return out;
}

std::string cases_to_json(const std::vector<CaseResult>& cases) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : cases) {
    nlohmann::json conf = nlohmann::json::array();
    for (const auto& k : c.confusion) conf.push_back({{"tp", k.tp}, {"tn", k.tn}, {"fp", k.fp}, {"fn", k.fn}});
    j.push_back({{"case", c.case_id},
                 {"trained", c.trained},
                 {"accuracies", c.accuracies},
                 {"min", c.min},
                 {"avg", c.avg},
                 {"max", c.max},
                 {"confusion", conf}});
  }
  return j.dump(1);
}

std::string roc_to_csv(const std::vector<RocPoint>& points) {
  std::string out = "fpr,tpr\n";
  for (const auto& p : points) out += csv::num(p.fpr) + ',' + csv::num(p.tpr) + '\n';
  return out;
}

std::string scores_to_csv(const ScoredLabels& scores) {
  std::string out = "score,fracture\n";
  for (const auto& [score, truth] : scores) out += csv::num(score) + ',' + (truth ? "1\n" : "0\n");
  return out;
}

ScoredLabels scores_from_csv(const std::string& text) {
  const auto t = csv::parse(text);
  csv::expect_header(t, {"score", "fracture"});
  ScoredLabels out;
  for (const auto& r : t.rows) {
    const auto truth = csv::to_int(r.at(1));
    if (truth != 0 && truth != 1) fail(ErrorCode::InvalidInput, "fracture column must be 0 or 1");
    out.emplace_back(csv::to_double(r.at(0)), truth == 1);
  }
  return out;
}

}  // namespace fracline
