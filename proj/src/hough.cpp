#include "fracline/hough.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"

#include "fracline/csv.hpp"

namespace fracline {

void HoughParams::validate() const {
  if (!(rho > 0.0)) fail(ErrorCode::InvalidConfig, "hough rho must be positive");
  if (!(theta > 0.0 && theta <= M_PI)) fail(ErrorCode::InvalidConfig, "hough theta must lie in (0, pi]");
  if (threshold < 1) fail(ErrorCode::InvalidConfig, "hough threshold must be >= 1");
  if (min_line_length < 1) fail(ErrorCode::InvalidConfig, "min line length must be >= 1");
  if (max_line_gap < 0) fail(ErrorCode::InvalidConfig, "max line gap must be >= 0");
}

double LineSegment::length() const {
  return std::hypot(static_cast<double>(x2 - x1), static_cast<double>(y2 - y1));
}

LineSegment LineSegment::normalized() const {
  if (is_normalized()) return *this;
  return {x2, y2, x1, y1};
}

double polar_of(double x, double y, double theta) { return x * std::cos(theta) + y * std::sin(theta); }

Accumulator::Accumulator(int width, int height, double rho, double theta)
    : num_angles_(std::max(1, static_cast<int>(std::lround(M_PI / theta)))),
      num_rho_(static_cast<int>(std::lround(((width + height) * 2 + 1) / rho))),
      rho_(rho),
      theta_(theta) {
  cos_.resize(num_angles_);
  sin_.resize(num_angles_);
  for (int n = 0; n < num_angles_; ++n) {
    cos_[n] = std::cos(n * theta) / rho;
    sin_[n] = std::sin(n * theta) / rho;
  }
  cells_.assign(static_cast<std::size_t>(num_angles_) * num_rho_, 0);
}

int Accumulator::rho_index(int x, int y, int n) const {
  return static_cast<int>(std::lround(x * cos_[n] + y * sin_[n])) + (num_rho_ - 1) / 2;
}

void Accumulator::vote(int x, int y, int delta) {
  for (int n = 0; n < num_angles_; ++n)
    cells_[static_cast<std::size_t>(n) * num_rho_ + rho_index(x, y, n)] += delta;
}

std::pair<int, int> Accumulator::vote_and_peak(int x, int y) {
  int best_val = 0, best_n = 0;
  for (int n = 0; n < num_angles_; ++n) {
    const int v = ++cells_[static_cast<std::size_t>(n) * num_rho_ + rho_index(x, y, n)];
    if (v > best_val) {
      best_val = v;
      best_n = n;
    }
  }
  return {best_n, best_val};
}

Accumulator accumulate(const EdgeImage& edges, const HoughParams& p) {
  edges.validate();
  p.validate();
  Accumulator acc(edges.width, edges.height, p.rho, p.theta);
  for (int y = 0; y < edges.height; ++y)
    for (int x = 0; x < edges.width; ++x)
      if (edges.on(x, y)) acc.vote(x, y, +1);
  return acc;
}

std::vector<std::pair<int, int>> firing_cells(const Accumulator& acc, int threshold) {
  std::vector<std::pair<int, int>> out;
  for (int n = 0; n < acc.num_angles(); ++n)
    for (int r = 0; r < acc.num_rho(); ++r)
      if (acc.votes(n, r) >= threshold) out.emplace_back(n, r);
  return out;
}

namespace {

struct Trace {
  std::pair<int, int> end[2];
  std::vector<std::size_t> pixels;  // mask indices, start pixel first
};

// Walks both ways from (px, py) along the cell line through it and collects
// set pixels within rho of that line. A step without one counts as gap.
void trace_line(const std::vector<std::uint8_t>& mask, int w, int h, int px, int py, double angle, double rho,
                int max_gap, Trace& t) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double r = std::round((px * c + py * s) / rho) * rho;
  const double off = px * c + py * s - r;
  const double ox = px - off * c, oy = py - off * s;
  const double dx = -s, dy = c;
  const bool x_major = std::fabs(dx) >= std::fabs(dy);
  const double sx = x_major ? (dx > 0 ? 1.0 : -1.0) : dx / std::fabs(dy);
  const double sy = x_major ? dy / std::fabs(dx) : (dy > 0 ? 1.0 : -1.0);

  t.end[0] = t.end[1] = {px, py};
  t.pixels.clear();
  t.pixels.push_back(static_cast<std::size_t>(py) * w + px);
  for (int k = 0; k < 2; ++k) {
    const int dir = k ? -1 : 1;
    int gap = 0;
    for (int i = k ? 1 : 0;; ++i) {
      const int bx = static_cast<int>(std::lround(ox + dir * i * sx));
      const int by = static_cast<int>(std::lround(oy + dir * i * sy));
      if (x_major ? (bx < 0 || bx >= w) : (by < 0 || by >= h)) break;
      bool found = false;
      for (int m : {0, -1, 1}) {
        const int x = x_major ? bx : bx + m, y = x_major ? by + m : by;
        if (x < 0 || x >= w || y < 0 || y >= h || (x == px && y == py)) continue;
        const auto idx = static_cast<std::size_t>(y) * w + x;
        if (!mask[idx] || std::fabs(x * c + y * s - r) > rho) continue;
        t.pixels.push_back(idx);
        if (!found) t.end[k] = {x, y};
        found = true;
      }
      if (found) gap = 0;
      else if (i > 0 && ++gap > max_gap) break;
    }
  }
}

// Angle index of the line normal given by the principal axis of the set
// pixels around (px, py); -1 when the neighbourhood has no direction.
int local_angle_index(const std::vector<std::uint8_t>& mask, int w, int h, int px, int py, double theta,
                      int num_angles) {
  constexpr int kRadius = 3;
  double n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int y = std::max(0, py - kRadius); y <= std::min(h - 1, py + kRadius); ++y)
    for (int x = std::max(0, px - kRadius); x <= std::min(w - 1, px + kRadius); ++x)
      if (mask[static_cast<std::size_t>(y) * w + x]) {
        const double u = x - px, v = y - py;
        n += 1;
        sx += u;
        sy += v;
        sxx += u * u;
        syy += v * v;
        sxy += u * v;
      }
  if (n < 2) return -1;
  const double cxx = sxx / n - (sx / n) * (sx / n);
  const double cyy = syy / n - (sy / n) * (sy / n);
  const double cxy = sxy / n - (sx / n) * (sy / n);
  if (cxx + cyy <= 0) return -1;
  const double dir = 0.5 * std::atan2(2 * cxy, cxx - cyy);
  double normal = std::fmod(dir + M_PI / 2, M_PI);
  if (normal < 0) normal += M_PI;
  return static_cast<int>(std::lround(normal / theta)) % num_angles;
}

}  // namespace

std::vector<LineSegment> detect_lines(const EdgeImage& edges, const HoughParams& p,
                                      std::uint64_t seed) {
  edges.validate();
  p.validate();
  const int w = edges.width, h = edges.height;
  Accumulator acc(w, h, p.rho, p.theta);
  std::vector<std::uint8_t> mask(edges.data.size(), 0), voted(edges.data.size(), 0);
  std::vector<std::pair<int, int>> points;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (edges.on(x, y)) {
        mask[static_cast<std::size_t>(y) * w + x] = 1;
        points.emplace_back(x, y);
      }

  std::mt19937_64 rng(seed);
  std::vector<LineSegment> lines;
  const double min_len = static_cast<double>(p.min_line_length);
  constexpr int kRefine = 3;

  for (std::size_t count = points.size(); count > 0; --count) {
    const std::size_t idx = static_cast<std::size_t>(rng() % count);
    const auto [px, py] = points[idx];
    points[idx] = points[count - 1];
    const auto pi = static_cast<std::size_t>(py) * w + px;
    if (!mask[pi]) continue;

    const auto [best_n, best_val] = acc.vote_and_peak(px, py);
    voted[pi] = 1;
    if (best_val < p.threshold) continue;

    // the firing cell's angle is only as good as the votes sampled so far;
    // walk the neighbouring angles and those of the local pixel orientation
    // and keep the one with the most support through this pixel
    const int na = acc.num_angles();
    int candidates[2] = {best_n, local_angle_index(mask, w, h, px, py, p.theta, na)};
    Trace best, t;
    std::vector<int> tried;
    for (int base : candidates) {
      if (base < 0) continue;
      for (int d = 0; d <= kRefine; ++d)
        for (int sgn : {1, -1}) {
          if (d == 0 && sgn < 0) continue;
          const int n = ((base + sgn * d) % na + na) % na;
          if (std::find(tried.begin(), tried.end(), n) != tried.end()) continue;
          tried.push_back(n);
          trace_line(mask, w, h, px, py, acc.angle(n), p.rho, p.max_line_gap, t);
          if (t.pixels.size() > best.pixels.size()) std::swap(best, t);
        }
    }

    const LineSegment seg{best.end[0].first, best.end[0].second, best.end[1].first, best.end[1].second};
    const bool good = seg.length() >= min_len;

    // consume the walked pixels; a good line also withdraws their votes
    for (auto k : best.pixels) {
      if (good && voted[k]) acc.vote(static_cast<int>(k % w), static_cast<int>(k / w), -1);
      mask[k] = 0;
    }
    if (good) lines.push_back(seg.normalized());
  }
  return lines;
}

std::vector<HoughRun> exhaustive_runs(const EdgeImage& edges, const HoughParams& p) {
  Accumulator acc = accumulate(edges, p);
  const int w = edges.width, h = edges.height;
  std::vector<std::uint8_t> free(edges.data.size(), 0);
  for (std::size_t i = 0; i < edges.data.size(); ++i) free[i] = edges.data[i] != 0;
  std::vector<std::uint8_t> used(static_cast<std::size_t>(acc.num_angles()) * acc.num_rho(), 0);

  std::vector<HoughRun> runs;
  while (true) {
    int best = p.threshold - 1, bn = -1, br = -1;
    for (int n = 0; n < acc.num_angles(); ++n)
      for (int r = 0; r < acc.num_rho(); ++r) {
        const int v = acc.votes(n, r);
        if (v > best && !used[static_cast<std::size_t>(n) * acc.num_rho() + r]) {
          best = v;
          bn = n;
          br = r;
        }
      }
    if (bn < 0) break;
    used[static_cast<std::size_t>(bn) * acc.num_rho() + br] = 1;

    const double ang = acc.angle(bn);
    const double c = std::cos(ang), s = std::sin(ang);
    const double dist = acc.distance(br);
    struct Pt {
      double t;
      int x, y;
    };
    std::vector<Pt> band;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (free[static_cast<std::size_t>(y) * w + x] && std::fabs(x * c + y * s - dist) <= p.rho)
          band.push_back({-x * s + y * c, x, y});
    std::sort(band.begin(), band.end(), [](const Pt& a, const Pt& b) {
      return a.t < b.t || (a.t == b.t && (a.y < b.y || (a.y == b.y && a.x < b.x)));
    });

    std::size_t start = 0;
    for (std::size_t i = 1; i <= band.size(); ++i) {
      bool split = i == band.size();
      if (!split) {
        const int step = std::max(std::abs(band[i].x - band[i - 1].x), std::abs(band[i].y - band[i - 1].y));
        split = step - 1 > p.max_line_gap;
      }
      if (!split) continue;
      const Pt& a = band[start];
      const Pt& b = band[i - 1];
      runs.push_back({LineSegment{a.x, a.y, b.x, b.y}.normalized(), static_cast<int>(i - start)});
      for (std::size_t k = start; k < i; ++k) {
        free[static_cast<std::size_t>(band[k].y) * w + band[k].x] = 0;
        acc.vote(band[k].x, band[k].y, -1);
      }
      start = i;
    }
  }
  return runs;
}

std::vector<LineSegment> filter_runs(const std::vector<HoughRun>& runs, int min_line_length) {
  std::vector<LineSegment> out;
  for (const auto& r : runs)
    if (r.segment.length() >= min_line_length) out.push_back(r.segment);
  return out;
}

std::vector<LineSegment> detect_lines_exhaustive(const EdgeImage& edges, const HoughParams& p) {
  return filter_runs(exhaustive_runs(edges, p), p.min_line_length);
}

std::vector<LineSegment> detect_lines(const EdgeImage& edges, const HoughParams& p,
                                      std::uint64_t seed, HoughMode mode) {
  return mode == HoughMode::Exhaustive ? detect_lines_exhaustive(edges, p)
                                       : detect_lines(edges, p, seed);
}

std::string segments_to_csv(const std::vector<std::pair<std::string, LineSegment>>& rows) {
  std::string out = "image_id,x1,y1,x2,y2\n";
  for (const auto& [id, s] : rows) {
    if (id.find(',') != std::string::npos) fail(ErrorCode::InvalidInput, "image id contains a comma");
    out += id + ',' + std::to_string(s.x1) + ',' + std::to_string(s.y1) + ',' +
           std::to_string(s.x2) + ',' + std::to_string(s.y2) + '\n';
  }
  return out;
}

std::vector<std::pair<std::string, LineSegment>> segments_from_csv(const std::string& text) {
  const auto t = csv::parse(text);
  csv::expect_header(t, {"image_id", "x1", "y1", "x2", "y2"});
  std::vector<std::pair<std::string, LineSegment>> out;
  for (const auto& r : t.rows)
    out.emplace_back(r[0], LineSegment{static_cast<int>(csv::to_int(r[1])), static_cast<int>(csv::to_int(r[2])),
                                       static_cast<int>(csv::to_int(r[3])), static_cast<int>(csv::to_int(r[4]))});
  return out;
}

std::string segments_to_json(const std::vector<LineSegment>& segs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : segs) j.push_back({s.x1, s.y1, s.x2, s.y2});
  return j.dump();
}

std::vector<LineSegment> segments_from_json(const std::string& text) {
  std::vector<LineSegment> out;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_array()) fail(ErrorCode::InvalidInput, "line JSON must be an array");
    for (const auto& e : j) {
      if (!e.is_array() || e.size() != 4) fail(ErrorCode::InvalidInput, "line entry must be a 4-tuple");
      out.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::InvalidInput, std::string("bad line JSON: ") + ex.what());
  }
  return out;
}

}  // namespace fracline
