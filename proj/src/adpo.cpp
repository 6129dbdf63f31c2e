#include "fracline/adpo.hpp"

#include <cmath>
#include <future>
#include <set>

#include "fracline/csv.hpp"
#include "fracline/features.hpp"

namespace fracline {

double average_gradient(const std::vector<LineSegment>& lines) {
  if (lines.empty()) fail(ErrorCode::EmptyInput, "average gradient of an empty line set is undefined");
  double sum = 0.0;
  for (const auto& l : lines) sum += line_gradient_deg(l);
  return sum / static_cast<double>(lines.size());
}

AdpoSweep optimize_min_line_length(const EdgeImage& edges, const HoughParams& base, std::uint64_t seed,
                                   const AdpoOptions& opt) {
  base.validate();
  edges.validate();
  if (base.threshold != 1) fail(ErrorCode::InvalidConfig, "the min-length sweep requires threshold 1");

  if (opt.min_length_lo < 1 || opt.min_length_hi <= opt.min_length_lo)
    fail(ErrorCode::InvalidConfig, "min-length sweep needs 1 <= lo < hi");

  AdpoSweep sweep;
  for (int l = opt.min_length_lo; l <= opt.min_length_hi; ++l) sweep.min_lengths.push_back(l);

  if (opt.mode == HoughMode::Exhaustive) {
    const auto runs = exhaustive_runs(edges, base);
    for (int l : sweep.min_lengths) sweep.lines.push_back(filter_runs(runs, l));
  } else {
    std::vector<std::future<std::vector<LineSegment>>> jobs;
    for (int l : sweep.min_lengths) {
      HoughParams p = base;
      p.min_line_length = l;
      jobs.push_back(std::async(std::launch::async, [&edges, p, seed] { return detect_lines(edges, p, seed); }));
    }
    for (auto& j : jobs) sweep.lines.push_back(j.get());
  }

  double prev = 0.0;
  for (std::size_t k = 0; k < sweep.lines.size(); ++k) {
    double avg = prev;
    if (sweep.lines[k].empty())
      sweep.warnings.push_back("no lines at min length " + std::to_string(sweep.min_lengths[k]) +
                               "; carrying the previous average gradient forward");
    else
      avg = average_gradient(sweep.lines[k]);
    sweep.avg_gradient.push_back(avg);
    prev = avg;
  }

  double best = -INFINITY;
  for (std::size_t k = 1; k < sweep.avg_gradient.size(); ++k) {
    const double d = sweep.avg_gradient[k] - sweep.avg_gradient[k - 1];
    sweep.delta_avg_gradient.push_back(d);
    const double score = opt.absolute_delta ? std::fabs(d) : d;
    if (score > best) {
      best = score;
      sweep.chosen = sweep.min_lengths[k];
    }
  }
  return sweep;
}

std::vector<LineSegment> borrow_lines(const AdpoSweep& sweep) {
  std::vector<LineSegment> out;
  std::set<LineSegment> seen;
  for (int offset = 0; offset <= 2; ++offset) {
    const int l = sweep.chosen - offset;
    if (l < sweep.min_lengths.front()) break;
    for (const auto& s : sweep.lines_at(l))
      if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

std::vector<std::pair<int, std::size_t>> max_gap_sweep(const EdgeImage& edges, const HoughParams& base,
                                                       std::uint64_t seed, int lo, int hi) {
  if (lo < 0 || hi < lo) fail(ErrorCode::InvalidConfig, "max gap sweep needs 0 <= lo <= hi");
  std::vector<std::pair<int, std::size_t>> out;
  for (int g = lo; g <= hi; ++g) {
    HoughParams p = base;
    p.max_line_gap = g;
    out.emplace_back(g, detect_lines(edges, p, seed).size());
  }
  return out;
}

std::string sweep_to_csv(const AdpoSweep& sweep) {
  std::string out = "l_min,num_lines,avg_gradient_deg,delta_avg_gradient_deg,chosen\n";
  for (std::size_t k = 0; k < sweep.min_lengths.size(); ++k) {
    const int l = sweep.min_lengths[k];
    out += std::to_string(l) + ',' + std::to_string(sweep.lines[k].size()) + ',' +
           csv::num(sweep.avg_gradient[k]) + ',' + (k == 0 ? std::string() : csv::num(sweep.delta_avg_gradient[k - 1])) +
           ',' + (l == sweep.chosen ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace fracline
