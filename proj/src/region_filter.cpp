#include "fracline/region_filter.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fracline/csv.hpp"

namespace fracline {

int window_length(int width, double window_frac) {
  if (width <= 0) fail(ErrorCode::InvalidInput, "image width must be positive");
  if (!(window_frac > 0.0 && window_frac <= 1.0)) fail(ErrorCode::InvalidConfig, "window fraction must lie in (0, 1]");
  return std::max(1, static_cast<int>(std::lround(window_frac * width)));
}

DensityProfile density_profile(const std::vector<LineSegment>& lines, int width, double window_frac) {
  return density_profile_with_window(lines, width, window_length(width, window_frac));
}

DensityProfile density_profile_with_window(const std::vector<LineSegment>& lines, int width, int window) {
  if (width <= 0) fail(ErrorCode::InvalidInput, "image width must be positive");
  if (window < 1) fail(ErrorCode::InvalidConfig, "window length must be >= 1");

  // frequency of each unique x-value over both endpoints
  std::map<int, int> freq;
  for (const auto& l : lines) {
    ++freq[l.x1];
    ++freq[l.x2];
  }
  const std::vector<std::pair<int, int>> fx(freq.begin(), freq.end());

  DensityProfile p;
  p.window = window;
  p.totals.assign(static_cast<std::size_t>(width), 0.0);
  for (int i = 0; i < width; ++i) {
    const int ws = i, we = i + window;
    double total = 0.0;
    for (const auto& [x, f] : fx)
      if (ws <= x && x < we) total += f;
    p.totals[static_cast<std::size_t>(i)] = total;
  }
  return p;
}

std::vector<double> moving_average(const std::vector<double>& v, int radius) {
  if (radius <= 0) return v;
  const int n = static_cast<int>(v.size());
  std::vector<double> prefix(v.size() + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];
  std::vector<double> out(v.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - radius), hi = std::min(n - 1, i + radius);
    out[i] = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
  }
  return out;
}

namespace {

/// Walks from the peak in direction `step` and returns the turning point.
int walk_to_turning_point(const std::vector<double>& s, int peak, int step, double tolerance, double floor) {
  const int n = static_cast<int>(s.size());
  int best = peak;
  for (int i = peak + step; i >= 0 && i < n; i += step) {
    if (s[i] <= s[best]) {
      best = i;
      if (s[i] <= 0.0) break;
    } else if (s[i] - s[best] > tolerance && s[best] <= floor) {
      break;
    }
  }
  return best;
}

}  // namespace

BoneBounds bone_bounds(const DensityProfile& profile, const BoundsOptions& opt) {
  const auto& raw = profile.totals;
  if (raw.empty() || std::all_of(raw.begin(), raw.end(), [](double v) { return v <= 0.0; }))
    fail(ErrorCode::NotFound, "density profile is empty; no bone region");
  if (!(opt.rise_tolerance >= 0.0)) fail(ErrorCode::InvalidConfig, "rise tolerance must be >= 0");
  if (!(opt.drop_fraction >= 0.0 && opt.drop_fraction <= 1.0))
    fail(ErrorCode::InvalidConfig, "drop fraction must lie in [0, 1]");
  const int radius = opt.smooth_radius < 0 ? profile.window / 2 : opt.smooth_radius;
  const auto s = moving_average(raw, radius);
  const int n = static_cast<int>(s.size());
  const int peak = static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
  const double tol = opt.rise_tolerance * s[static_cast<std::size_t>(peak)];
  const double floor = opt.drop_fraction * s[static_cast<std::size_t>(peak)];

  BoneBounds b{walk_to_turning_point(s, peak, -1, tol, floor), walk_to_turning_point(s, peak, +1, tol, floor)};
  if (b.lower == b.upper) {
    if (b.upper + 1 < n) ++b.upper;
    else if (b.lower > 0) --b.lower;
    else fail(ErrorCode::NotFound, "profile is too narrow to bound a region");
  }
  return b;
}

std::vector<LineSegment> filter_leg_lines(const std::vector<LineSegment>& lines, const BoneBounds& bounds) {
  if (bounds.lower > bounds.upper) fail(ErrorCode::InvalidInput, "bone bounds are inverted");
  std::vector<LineSegment> out;
  for (const auto& l : lines) {
    const double xm = l.mid_x();
    if (xm >= bounds.lower && xm <= bounds.upper) out.push_back(l);
  }
  return out;
}

std::string profile_to_csv(const DensityProfile& profile) {
  std::string out = "i,f_tot\n";
  for (std::size_t i = 0; i < profile.totals.size(); ++i)
    out += std::to_string(i) + ',' + csv::num(profile.totals[i]) + '\n';
  return out;
}

}  // namespace fracline
