// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Usage: fracline_acceptance [name-filter]
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "fracline/adpo.hpp"
#include "fracline/analysis.hpp"
#include "fracline/ann.hpp"
#include "fracline/eval.hpp"
#include "fracline/features.hpp"
#include "fracline/pipeline.hpp"
#include "fracline/region_filter.hpp"
#include "fracline/synth.hpp"

using namespace fracline;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

LineSegment random_segment(std::mt19937_64& rng, int size) {
  std::uniform_int_distribution<int> u(0, size - 1);
  LineSegment s{u(rng), u(rng), u(rng), u(rng)};
  return s.normalized();
}

// ---- criteria

Outcome features() {
  Outcome o;
  std::mt19937_64 rng(11);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_segment(rng, 1000);
    const auto f = extract(s, {0.0, 1.0}, Region::Leg);
    const double dx = s.x2 - s.x1, dy = s.y2 - s.y1;
    worst = std::max({worst, std::fabs(f.dist * f.dist - (dx * dx + dy * dy)), std::fabs(f.dist_x - std::fabs(dy)),
                      std::fabs(f.dist_y - std::fabs(dx))});
  }
  const double t = seconds_since(t0);
  o.check(worst <= 1e-6, fmt("max deviation %.3g over 1000 segments (tol 1e-6)", worst));
  o.check(t < 1.0, fmt("runtime %.3f s (< 1 s)", t));
  return o;
}

Outcome hough_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto p = HoughParams::standard();
  int agree = 0;
  for (int seed = 1; seed <= 20; ++seed) {
    const auto img = synth::separated_lines(static_cast<std::uint64_t>(seed), 64);
    const auto found = detect_lines(img.edges, p, static_cast<std::uint64_t>(seed));
    const auto ref = oracle::exhaustive_lines(img.edges, p);
    if (oracle::same_lines(found, ref, 1)) ++agree;
    else o.notes.push_back(fmt("     image %g: detector %g lines, oracle %g lines", seed, found.size(), ref.size()));
  }
  const double t = seconds_since(t0);
  o.check(agree == 20, fmt("%g/20 images match the exhaustive oracle within 1 px", agree));
  o.check(t < 30.0, fmt("runtime %.2f s (< 30 s)", t));
  return o;
}

Outcome pca() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  double worst_sum = 0.0;
  for (int run = 0; run < 50; ++run) {
    FeatureMatrix x;
    const std::size_t n = 3 + run % 11, m = 40 + run;
    x.values = Matrix(m, n);
    for (std::size_t j = 0; j < n; ++j) x.names.push_back("f" + std::to_string(j));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) x.values(i, j) = g(rng) + (j ? 0.5 * x.values(i, j - 1) : 0.0);
    const auto rep = pca_contribution(x);
    double s = 0.0;
    for (double c : rep.contributions) s += c;
    worst_sum = std::max(worst_sum, std::fabs(s - 1.0));
  }
  o.check(worst_sum <= 1e-9, fmt("contributions sum to 1 within %.3g over 50 runs (tol 1e-9)", worst_sum));

  // correlation [[1, a, b], [a, 1, 0], [b, 0, 1]] has eigenvalues 1 and 1 +- sqrt(a^2 + b^2)
  const double a = 0.6, b = 0.3, r = std::sqrt(a * a + b * b);
  Matrix target(3, 3);
  for (int i = 0; i < 3; ++i) target(i, i) = 1.0;
  target(0, 1) = target(1, 0) = a;
  target(0, 2) = target(2, 0) = b;
  FeatureMatrix planted{oracle::planted_covariance_data(target, 500, 3), {"a", "b", "c"}};
  const auto rep = pca_contribution(planted);
  const double expect[3] = {1 + r, 1.0, 1 - r};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(rep.eigenvalues[i] - expect[i]));
  o.check(worst <= 1e-8, fmt("planted 3-feature eigenvalues within %.3g of 1+-sqrt(a^2+b^2), 1 (tol 1e-8)", worst));
  return o;
}

Outcome correlation() {
  Outcome o;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  double worst = 0.0, asym = 0.0, diag = 0.0;
  for (int run = 0; run < 100; ++run) {
    const std::size_t n = 2 + run % 13, m = 3 + (run * 7) % 60;
    FeatureMatrix x;
    x.values = Matrix(m, n);
    for (std::size_t j = 0; j < n; ++j) x.names.push_back("f" + std::to_string(j));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) x.values(i, j) = 100.0 * g(rng) + (j ? x.values(i, j - 1) : 0.0);
    const auto c = correlation_matrix(x);
    for (std::size_t i = 0; i < n; ++i) {
      diag = std::max(diag, std::fabs(*c.at(i, i) - 1.0));
      for (std::size_t j = 0; j < n; ++j) {
        asym = std::max(asym, std::fabs(*c.at(i, j) - *c.at(j, i)));
        if (i != j)
          worst = std::max(worst, std::fabs(*c.at(i, j) - oracle::pearson(x.values.column(i), x.values.column(j))));
      }
    }
  }
  o.check(asym == 0.0, fmt("symmetric (max |r_ij - r_ji| = %.3g)", asym));
  o.check(diag == 0.0, fmt("unit diagonal (max deviation %.3g)", diag));
  o.check(worst <= 1e-12, fmt("matches the brute-force oracle within %.3g on 100 matrices (tol 1e-12)", worst));
  return o;
}

Outcome ann() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    auto model = make_network(kFractureLayers, 100 + static_cast<std::uint64_t>(k));
    for (auto& b : model.biases)
      for (auto& v : b) v = 0.1 * g(rng);
    std::vector<double> x(kInputCount);
    for (auto& v : x) v = g(rng);
    const double target = k % 2 ? 1.0 : -1.0;
    const auto analytic = analytic_gradient(model, x, target);
    auto params = flatten_parameters(model);
    auto probe = model;
    const auto loss = [&] {
      assign_parameters(probe, params);
      const double out = infer(probe, x);
      return (out - target) * (out - target);
    };
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double keep = params[i], h = 1e-5;
      params[i] = keep + h;
      const double up = loss();
      params[i] = keep - h;
      const double down = loss();
      params[i] = keep;
      const double numeric = (up - down) / (2 * h);
      const double scale = std::max({std::fabs(analytic[i]), std::fabs(numeric), 1e-6});
      worst = std::max(worst, std::fabs(analytic[i] - numeric) / scale);
    }
  }
  o.check(worst <= 1e-4, fmt("max relative gradient deviation %.3g over 50 (model, row) pairs (tol 1e-4)", worst));

  // linearly separable: target = sign(w . x) with a margin
  LabeledDataset data;
  std::vector<double> w(kInputCount);
  for (auto& v : w) v = g(rng);
  while (data.size() < 400) {
    LabeledRow row;
    double s = 0.0;
    for (std::size_t i = 0; i < kInputCount; ++i) s += w[i] * (row.inputs[i] = g(rng));
    if (std::fabs(s) < 0.5) continue;
    row.target = s > 0 ? 1.0 : -1.0;
    data.push_back(row);
  }
  TrainingConfig cfg;
  cfg.max_epochs = 5000;
  const auto res = train(data, cfg, 9);
  const double acc = *metrics(evaluate(res.model, data).counts).accuracy;
  o.check(acc >= 0.99, fmt("separable set: training accuracy %.4f after %g epochs (>= 0.99 within 5000)", acc,
                           res.mse_trace.size()));
  const double t = seconds_since(t0);
  o.check(t < 60.0, fmt("runtime %.2f s (< 60 s)", t));
  return o;
}

Outcome adpo() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto img = synth::clutter_image(1);
  for (bool absolute : {false, true}) {
    AdpoOptions opt;
    opt.absolute_delta = absolute;
    const auto sweep = optimize_min_line_length(img.edges, HoughParams::adpo(), 1, opt);
    o.check(sweep.chosen == 7, fmt(absolute ? "absolute argmax picks %g (planted 7)" : "signed argmax picks %g (planted 7)",
                                   sweep.chosen));
    const auto borrowed = borrow_lines(sweep);
    const std::set<LineSegment> unique(borrowed.begin(), borrowed.end());
    bool superset = true;
    for (const auto& l : sweep.lines_at(sweep.chosen)) superset = superset && unique.count(l);
    o.check(unique.size() == borrowed.size(), fmt("borrowed %g lines, %g distinct", borrowed.size(), unique.size()));
    o.check(superset, "borrowed lines contain every line at the chosen length");
  }
  const double t = seconds_since(t0);
  o.check(t < 60.0, fmt("runtime %.2f s (< 60 s)", t));
  return o;
}

Outcome bone_bounds_criterion() {
  Outcome o;
  std::mt19937_64 rng(31);
  int exact = 0;
  for (int run = 0; run < 100; ++run) {
    const int width = 20 + run * 3, window = 1 + run % 9;
    std::vector<LineSegment> lines(static_cast<std::size_t>(run % 40));
    for (auto& l : lines) l = random_segment(rng, width);
    if (density_profile_with_window(lines, width, window).totals == oracle::density(lines, width, window)) ++exact;
  }
  o.check(exact == 100, fmt("density profile equals the brute-force double loop on %g/100 line sets", exact));

  double worst_bone = 1.0, worst_flesh = 0.0;
  for (int seed = 1; seed <= 20; ++seed) {
    const auto c = synth::two_cluster_lines(static_cast<std::uint64_t>(seed));
    std::vector<LineSegment> all = c.bone;
    all.insert(all.end(), c.flesh.begin(), c.flesh.end());
    const auto b = bone_bounds(density_profile(all, c.width));
    const auto share = [&](const std::vector<LineSegment>& ls) {
      int in = 0;
      for (const auto& l : ls)
        for (int x : {l.x1, l.x2}) in += x >= b.lower && x <= b.upper;
      return in / (2.0 * static_cast<double>(ls.size()));
    };
    worst_bone = std::min(worst_bone, share(c.bone));
    worst_flesh = std::max(worst_flesh, share(c.flesh));
  }
  o.check(worst_bone >= 0.95, fmt("bounds capture >= %.4f of bone x-values in every seed (>= 0.95)", worst_bone));
  o.check(worst_flesh <= 0.10, fmt("bounds capture <= %.4f of flesh x-values in every seed (<= 0.10)", worst_flesh));
  return o;
}

Outcome metrics_roc() {
  Outcome o;
  std::mt19937_64 rng(41);
  double worst = 0.0;
  for (int run = 0; run < 100; ++run) {
    ScoredLabels s;
    std::uniform_int_distribution<int> level(0, 20);  // coarse scores force ties
    for (int i = 0; i < 30 + run; ++i) s.emplace_back(level(rng) / 10.0 - 1.0, i % 3 == 0);
    worst = std::max(worst, std::fabs(roc(s).auc - oracle::mann_whitney_auc(s)));
  }
  o.check(worst <= 1e-9, fmt("staircase AUC vs rank statistic: max deviation %.3g (tol 1e-9)", worst));

  bool exact = true;
  std::uniform_int_distribution<long long> count(1, 100000);
  for (int run = 0; run < 1000; ++run) {
    ConfusionCounts c{count(rng), count(rng), count(rng), count(rng)};
    const auto m = metrics(c);
    exact = exact && *m.accuracy == static_cast<double>(c.tp + c.tn) / static_cast<double>(c.tp + c.tn + c.fp + c.fn) &&
            *m.sensitivity == static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) &&
            *m.fpr == static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
  }
  o.check(exact, "accuracy, sensitivity and FPR exact on 1000 random confusion counts");

  ScoredLabels perfect, inverted;
  for (int i = 0; i < 50; ++i) {
    perfect.emplace_back(i < 20 ? 0.9 - 0.01 * i : -0.9 + 0.01 * i, i < 20);
    inverted.emplace_back(i < 20 ? -0.9 + 0.01 * i : 0.9 - 0.01 * i, i < 20);
  }
  o.check(roc(perfect).auc == 1.0 && roc(inverted).auc == 0.0,
          fmt("perfect AUC %g, inverted AUC %g", roc(perfect).auc, roc(inverted).auc));
  return o;
}

double slope(const std::vector<CaseResult>& cases, std::size_t from) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t i = from; i < cases.size(); ++i) {
    const double x = cases[i].case_id, y = cases[i].avg;
    sx += x, sy += y, sxx += x * x, sxy += x * y, n += 1;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome end_to_end() {
  Outcome o;
  const auto t0 = Clock::now();
  const PipelineConfig cfg;
  std::vector<AnnotatedImage> images;
  for (auto& x : synth::corpus({})) images.push_back({x.id, std::move(x.image), x.fractures});
  o.notes.push_back(fmt("     corpus: %g images (%g train / %g test)", images.size(),
                        images.size() - cfg.eval.test_images, cfg.eval.test_images));

  double mean[2] = {0, 0};
  SampleSplit adpo_split;
  for (Scheme scheme : {Scheme::Standard, Scheme::Adpo}) {
    const auto ts = Clock::now();
    auto split = split_samples(prepare_samples(images, scheme, cfg), cfg.eval.test_images);
    const auto rep = image_case_sweep(split.train, split.test, image_sweep_config(cfg));
    const int k = scheme == Scheme::Adpo;
    double lo = 1, hi = 0;
    for (const auto& c : rep.cases) mean[k] += c.avg / static_cast<double>(rep.cases.size());
    double spread = 0.0;
    for (const auto& c : rep.cases) {
      lo = std::min(lo, c.avg), hi = std::max(hi, c.avg);
      spread = std::max(spread, std::fabs(c.avg - mean[k]));
    }
    o.notes.push_back(std::string("     ") + scheme_name(scheme) +
                      fmt(": mean accuracy %.4f, case range [%.4f, %.4f]", mean[k], lo, hi));
    o.notes.push_back(fmt("     AUC %.4f, %.1f s", roc(rep.scores).auc, seconds_since(ts)));
    o.check(spread <= 0.05, std::string("(a) ") + scheme_name(scheme) +
                                fmt(" image cases within +-%.2f points of their mean (tol 5)", 100 * spread));
    if (scheme == Scheme::Adpo) adpo_split = std::move(split);
  }

  const auto ts = Clock::now();
  const auto lines = line_case_sweep(pooled_rows(adpo_split.train), pooled_rows(adpo_split.test), line_sweep_config(cfg));
  const std::size_t tail = std::min<std::size_t>(50, lines.cases.size());
  const double s = slope(lines.cases, lines.cases.size() - tail);
  const auto at = [&](std::size_t trained) {
    for (const auto& c : lines.cases)
      if (c.trained >= trained) return c.avg;
    return lines.cases.back().avg;
  };
  o.notes.push_back(fmt("     line cases: accuracy %.4f at 10 lines, %.4f at 300, %.4f at the end", at(10), at(300),
                        lines.cases.back().avg));
  o.notes.push_back(fmt("     %.1f s", seconds_since(ts)));
  o.check(std::fabs(s) <= 5e-4, fmt("(b) line cases plateau: slope over the last 50 cases %.6f per case (|.| <= 0.0005)", s));

  o.check(mean[1] >= mean[0] - 0.01,
          fmt("(c) adpo mean %.4f >= standard mean %.4f - 0.01", mean[1], mean[0]));
  const double t = seconds_since(t0);
  o.check(t < 900.0, fmt("runtime %.1f s (< 900 s)", t));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"features", features},       {"hough-oracle", hough_oracle}, {"pca", pca},
      {"correlation", correlation}, {"ann", ann},                   {"adpo", adpo},
      {"bone-bounds", bone_bounds_criterion},  {"metrics-roc", metrics_roc},   {"end-to-end", end_to_end},
  };
  int failed = 0, run = 0;
  for (const auto& [name, fn] : criteria) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    ++run;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.check(false, std::string("threw: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s  %s\n", o.pass ? "PASS" : "FAIL", name.c_str());
    for (const auto& n : o.notes) std::printf("      %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", run - failed, run);
  return failed;
}
