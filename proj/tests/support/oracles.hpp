#pragma once
// Reference implementations used only by tests. Each is the plainest
// possible version of the quantity it checks: no shortcuts, no sharing of
// code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "fracline/hough.hpp"
#include "fracline/image.hpp"
#include "fracline/matrix.hpp"

namespace oracle {

using fracline::EdgeImage;
using fracline::LineSegment;
using fracline::Matrix;

// ---- statistics

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample covariance (n - 1) by the textbook double sum.
inline double covariance(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a), mb = mean(b);
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  return covariance(a, b) / std::sqrt(covariance(a, a) * covariance(b, b));
}

/// AUC as the Mann-Whitney U statistic: P(score_pos > score_neg) + 0.5 P(tie).
inline double mann_whitney_auc(const std::vector<std::pair<double, bool>>& scored) {
  double wins = 0;
  long long pairs = 0;
  for (const auto& [sp, tp] : scored) {
    if (!tp) continue;
    for (const auto& [sn, tn] : scored) {
      if (tn) continue;
      ++pairs;
      wins += sp > sn ? 1.0 : (sp == sn ? 0.5 : 0.0);
    }
  }
  return wins / static_cast<double>(pairs);
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
inline Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = i == j ? std::sqrt(s) : s / l(j, j);
    }
  return l;
}

/// Lower-triangular solve L y = b.
inline std::vector<double> forward_solve(const Matrix& l, std::vector<double> b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
    b[i] /= l(i, i);
  }
  return b;
}

/// m x n data whose sample covariance (n - 1 denominator) is exactly `target`
/// up to rounding: random draws are centred, whitened and recoloured.
inline Matrix planted_covariance_data(const Matrix& target, std::size_t m, std::uint64_t seed) {
  const std::size_t n = target.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix x(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = g(rng);
  std::vector<std::vector<double>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    cols[j] = x.column(j);
    const double mu = mean(cols[j]);
    for (auto& v : cols[j]) v -= mu;
  }
  Matrix s(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) s(a, b) = covariance(cols[a], cols[b]);
  const Matrix ls = cholesky(s), lt = cholesky(target);
  Matrix out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = cols[j][i];
    const auto white = forward_solve(ls, row);
    for (std::size_t a = 0; a < n; ++a) {
      double v = 0;
      for (std::size_t b = 0; b <= a; ++b) v += lt(a, b) * white[b];
      out(i, a) = v + 10.0 * static_cast<double>(a + 1);  // arbitrary column offsets
    }
  }
  return out;
}

// ---- line density

/// f_tot[i] = number of endpoint x-values in [i, i + window), by brute force.
inline std::vector<double> density(const std::vector<LineSegment>& lines, int width, int window) {
  std::vector<double> out(static_cast<std::size_t>(width), 0.0);
  for (int i = 0; i < width; ++i)
    for (const auto& l : lines)
      for (int x : {l.x1, l.x2})
        if (x >= i && x < i + window) out[static_cast<std::size_t>(i)] += 1.0;
  return out;
}

// ---- Hough

/// Votes of every (angle, distance) cell, recounted from scratch.
inline std::map<std::pair<int, int>, int> hough_votes(const EdgeImage& e, double rho, double theta) {
  const int na = std::max(1, static_cast<int>(std::lround(M_PI / theta)));
  std::map<std::pair<int, int>, int> votes;
  for (int y = 0; y < e.height; ++y)
    for (int x = 0; x < e.width; ++x) {
      if (!e.on(x, y)) continue;
      for (int n = 0; n < na; ++n) {
        const double r = x * std::cos(n * theta) + y * std::sin(n * theta);
        ++votes[{n, static_cast<int>(std::lround(r / rho))}];
      }
    }
  return votes;
}

/// Exhaustive line finder: repeatedly recount the votes of the unclaimed
/// pixels, take the strongest cell not yet used, claim the unclaimed pixels
/// within rho of its line, split them where consecutive pixels are more
/// than max_gap apart and keep runs at least min_len long.
inline std::vector<LineSegment> exhaustive_lines(EdgeImage e, const fracline::HoughParams& p) {
  std::vector<LineSegment> out;
  std::map<std::pair<int, int>, bool> used;
  for (;;) {
    const auto votes = hough_votes(e, p.rho, p.theta);
    int best = p.threshold - 1;
    std::pair<int, int> cell{-1, 0};
    for (const auto& [k, v] : votes)
      if (v > best && !used.count(k)) best = v, cell = k;
    if (cell.first < 0) return out;
    used[cell] = true;

    const double a = cell.first * p.theta, c = std::cos(a), s = std::sin(a), r = cell.second * p.rho;
    std::vector<std::pair<double, std::pair<int, int>>> band;
    for (int y = 0; y < e.height; ++y)
      for (int x = 0; x < e.width; ++x)
        if (e.on(x, y) && std::fabs(x * c + y * s - r) <= p.rho) band.push_back({-x * s + y * c, {x, y}});
    std::sort(band.begin(), band.end());
    std::size_t start = 0;
    for (std::size_t i = 1; i <= band.size(); ++i) {
      if (i < band.size()) {
        const auto [x0, y0] = band[i - 1].second;
        const auto [x1, y1] = band[i].second;
        if (std::max(std::abs(x1 - x0), std::abs(y1 - y0)) - 1 <= p.max_line_gap) continue;
      }
      const auto [ax, ay] = band[start].second;
      const auto [bx, by] = band[i - 1].second;
      const LineSegment seg = LineSegment{ax, ay, bx, by}.normalized();
      if (seg.length() >= p.min_line_length) out.push_back(seg);
      for (std::size_t k = start; k < i; ++k) e.set(band[k].second.first, band[k].second.second, false);
      start = i;
    }
  }
}

inline bool near(const LineSegment& a, const LineSegment& b, int tol) {
  auto close = [tol](int ax, int ay, int bx, int by) { return std::abs(ax - bx) <= tol && std::abs(ay - by) <= tol; };
  return (close(a.x1, a.y1, b.x1, b.y1) && close(a.x2, a.y2, b.x2, b.y2)) ||
         (close(a.x1, a.y1, b.x2, b.y2) && close(a.x2, a.y2, b.x1, b.y1));
}

/// True when the two sets pair up one-to-one with endpoints within `tol`
/// pixels (per coordinate). Greedy matching is exact here because matched
/// segments in these tests are far apart.
inline bool same_lines(const std::vector<LineSegment>& a, const std::vector<LineSegment>& b, int tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> taken(b.size(), false);
  for (const auto& s : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j)
      if (!taken[j] && near(s, b[j], tol)) taken[j] = found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace oracle
