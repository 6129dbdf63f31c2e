#include "fracline/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fracline/error.hpp"
#include "fracline/parallel.hpp"

namespace fracline::synth {

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

LineSegment extend(const LineSegment& s, double by) {
  const double len = s.length();
  if (len == 0) return s;
  const double ux = (s.x2 - s.x1) / len, uy = (s.y2 - s.y1) / len;
  return {static_cast<int>(std::lround(s.x1 - by * ux)), static_cast<int>(std::lround(s.y1 - by * uy)),
          static_cast<int>(std::lround(s.x2 + by * ux)), static_cast<int>(std::lround(s.y2 + by * uy))};
}

// beyond the default max_line_gap of 10
constexpr double kReach = 12.0;

}  // namespace

std::vector<std::pair<int, int>> bresenham(const LineSegment& seg) {
  std::vector<std::pair<int, int>> px;
  int x0 = seg.x1, y0 = seg.y1;
  const int dx = std::abs(seg.x2 - x0), sx = x0 < seg.x2 ? 1 : -1;
  const int dy = -std::abs(seg.y2 - y0), sy = y0 < seg.y2 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    px.emplace_back(x0, y0);
    if (x0 == seg.x2 && y0 == seg.y2) break;
    const int e2 = 2 * err;
    if (e2 >= dy) { err += dy; x0 += sx; }
    if (e2 <= dx) { err += dx; y0 += sy; }
  }
  return px;
}

void draw_line(EdgeImage& img, const LineSegment& seg) {
  for (auto [x, y] : bresenham(seg))
    if (x >= 0 && y >= 0 && x < img.width && y < img.height) img.set(x, y, true);
}

LineImage separated_lines(std::uint64_t seed, int size, int count, int min_len, int max_len, int spacing) {
  if (size < 8 || count < 1 || min_len < 2 || max_len < min_len) fail(ErrorCode::InvalidConfig, "bad line image shape");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    LineImage out{EdgeImage(size, size), {}};
    std::vector<std::pair<int, int>> used, reach;
    bool ok = true;
    for (int k = 0; k < count && ok; ++k) {
      ok = false;
      for (int tries = 0; tries < 200 && !ok; ++tries) {
        const double len = uniform(rng, min_len, max_len);
        const double ang = uniform(rng, 0.0, M_PI);
        const int x1 = uniform_int(rng, 1, size - 2), y1 = uniform_int(rng, 1, size - 2);
        const int x2 = static_cast<int>(std::lround(x1 + len * std::cos(ang)));
        const int y2 = static_cast<int>(std::lround(y1 + len * std::sin(ang)));
        if (x2 < 1 || y2 < 1 || x2 > size - 2 || y2 > size - 2) continue;
        const LineSegment seg = LineSegment{x1, y1, x2, y2}.normalized();
        if (seg.length() < min_len) continue;
        // the segment, prolonged past both ends, must also stay clear so a
        // detector bridging gaps cannot reach a neighbour
        const auto px = bresenham(seg);
        const auto ext = bresenham(extend(seg, kReach));
        bool clear = true;
        for (auto [x, y] : ext)
          for (auto [u, v] : used)
            if (std::abs(x - u) < spacing && std::abs(y - v) < spacing) clear = false;
        for (auto [x, y] : px)
          for (auto [u, v] : reach)
            if (std::abs(x - u) < spacing && std::abs(y - v) < spacing) clear = false;
        if (!clear) continue;
        used.insert(used.end(), px.begin(), px.end());
        reach.insert(reach.end(), ext.begin(), ext.end());
        draw_line(out.edges, seg);
        out.truth.push_back(seg);
        ok = true;
      }
    }
    if (ok) return out;
  }
  fail(ErrorCode::InvalidConfig, "could not place separated lines");
}

LineImage clutter_image(std::uint64_t seed, int width, int height) {
  if (width < 80 || height < 80) fail(ErrorCode::InvalidConfig, "clutter image needs at least 80x80 pixels");
  std::mt19937_64 rng(seed);
  LineImage out{EdgeImage(width, height), {}};
  // bone edges
  for (int x : {8, 14, width - 15, width - 9}) {
    const LineSegment seg{x, 4, x, height - 5};
    draw_line(out.edges, seg);
    out.truth.push_back(seg);
  }
  // strokes keep more than the detector's gap away from every other pixel
  constexpr int kIsolation = 16;
  std::vector<std::pair<int, int>> used;
  for (const auto& l : out.truth) {
    const auto px = bresenham(l);
    used.insert(used.end(), px.begin(), px.end());
  }
  int placed = 0;
  for (int tries = 0; tries < 4000 && placed < 24; ++tries) {
    const int x = uniform_int(rng, 32, width - 40);
    const int y = uniform_int(rng, 8, height - 8);
    const LineSegment seg{x, y, x + 6, y - 2};
    const auto px = bresenham(seg);
    bool clear = true;
    for (auto [u, v] : px)
      for (auto [a, b] : used)
        if (std::max(std::abs(u - a), std::abs(v - b)) < kIsolation) clear = false;
    if (!clear) continue;
    used.insert(used.end(), px.begin(), px.end());
    draw_line(out.edges, seg);
    out.truth.push_back(seg.normalized());
    ++placed;
  }
  return out;
}

ClusterLines two_cluster_lines(std::uint64_t seed, int width, int height) {
  if (width < 300 || height < 50) fail(ErrorCode::InvalidConfig, "two-cluster image needs width >= 300");
  std::mt19937_64 rng(seed);
  ClusterLines out;
  out.width = width;
  const int bone_w = uniform_int(rng, 60, 90);
  const int flesh_w = uniform_int(rng, 80, 110);
  const int gap = uniform_int(rng, 50, 80);
  const bool flesh_left = rng() & 1;
  const int span = bone_w + gap + flesh_w;
  const int start = uniform_int(rng, 5, width - 5 - span);
  const int bone_lo = flesh_left ? start + flesh_w + gap : start;
  const int flesh_lo = flesh_left ? start : start + bone_w + gap;

  const auto make = [&](int lo, int w) {
    const int x1 = uniform_int(rng, lo, lo + w - 1);
    const int x2 = std::clamp(x1 + uniform_int(rng, -3, 3), lo, lo + w - 1);
    const int y1 = uniform_int(rng, 0, height / 2);
    const int y2 = uniform_int(rng, height / 2, height - 1);
    return LineSegment{x1, y1, x2, y2}.normalized();
  };
  const int n_bone = uniform_int(rng, 140, 200);
  const int n_flesh = uniform_int(rng, 25, 45);
  for (int i = 0; i < n_bone; ++i) out.bone.push_back(make(bone_lo, bone_w));
  for (int i = 0; i < n_flesh; ++i) out.flesh.push_back(make(flesh_lo, flesh_w));
  return out;
}

constexpr double kTrabecular = 1.0;  // streaks per image row
constexpr int kPlanesLo = 2, kPlanesHi = 3;
constexpr int kPlaneContrast = 20;
constexpr double kAirGrain = 1.25;  // noise multiplier outside the soft tissue
constexpr int kPiecesLo = 2, kPiecesHi = 4;
constexpr double kStreakSpread = 30.0;  // degrees off the shaft axis
constexpr int kCrackLevels = 4;

Xray xray(std::uint64_t seed, const std::string& id, int width, int height) {
  if (width < 96 || height < 128) fail(ErrorCode::InvalidConfig, "radiograph needs at least 96x128 pixels");
  std::mt19937_64 rng(seed);
  const double W = width, H = height;

  const double flesh_l = uniform(rng, 0.12, 0.2) * W;
  const double flesh_r = W - uniform(rng, 0.12, 0.2) * W;
  const double cx0 = uniform(rng, 0.49, 0.51) * W;
  const double tilt = uniform(rng, -0.01, 0.01);
  const double half = uniform(rng, 0.08, 0.1) * W;
  const double cortex = 3.0;

  // segmental fracture: two cracks of opposite obliquity, each displacing the fragment below it
  struct Crack {
    double y, slope, shift;
  };
  const double crack_half = 1.6;
  std::vector<Crack> cracks;
  // one crack per stratum of the shaft, so every image covers the whole leg
  const double sign = (rng() & 1) ? 1 : -1;
  for (int k = 0; k < kCrackLevels; ++k) {
    const double y = (0.2 + 0.6 * (k + uniform(rng, 0.25, 0.75)) / kCrackLevels) * H;
    const double slope = std::tan(uniform(rng, 15.0, 35.0) * M_PI / 180.0) * (k % 2 == 0 ? sign : -sign);
    const double shift = uniform(rng, 1.0, 3.0) * ((rng() & 1) ? 1 : -1);
    cracks.push_back({y, slope, shift});
  }

  // bone half-width flares toward the knee (top) and the ankle (bottom)
  const auto half_at = [&](double y) {
    const double t = y / H;
    double flare = 0.0;
    if (t < 0.15) flare = (0.15 - t) / 0.15;
    if (t > 0.88) flare = (t - 0.88) / 0.12;
    return half * (1.0 + 0.6 * flare);
  };

  Xray out;
  out.id = id;
  out.image = GrayImage(width, height, 0);
  // intensity follows the x-ray path length through cylindrical flesh and bone
  std::normal_distribution<double> noise(0.0, 2.0);
  std::vector<std::uint8_t> marrow(static_cast<std::size_t>(width) * height, 0);
  auto bone = marrow, soft = marrow;
  const double flesh_c = 0.5 * (flesh_l + flesh_r), flesh_rad = 0.5 * (flesh_r - flesh_l);
  const auto chord = [](double d, double rad) { return d >= rad ? 0.0 : std::sqrt(1.0 - (d / rad) * (d / rad)); };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 20.0 + 10.0 * y / H;
      const double fl = chord(std::abs(x - flesh_c), flesh_rad);
      if (fl > 0) v += 85.0 * fl;
      if (fl > 0.05) soft[static_cast<std::size_t>(y) * width + x] = 1;
      const double cx = cx0 + tilt * (y - H / 2);
      double xb = x;  // fragments below a crack are displaced
      bool on_crack = false;
      for (const auto& c : cracks) {
        const double cy_line = c.y + c.slope * (x - cx);
        if (y > cy_line) xb -= c.shift;
        if (std::abs(y - cy_line) <= crack_half) on_crack = true;
      }
      const double hw = half_at(y);
      const double d = std::abs(xb - cx);
      if (d <= hw) {
        const double cortical = d >= hw - cortex ? 30.0 : 0.0;
        v += 70.0 + 30.0 * chord(d, hw) + cortical;
        bone[static_cast<std::size_t>(y) * width + x] = 1;
        if (d < hw - cortex - 1) marrow[static_cast<std::size_t>(y) * width + x] = 1;
        if (on_crack) v -= 70.0;
      }
      if (x < 3 || x >= width - 3) v = 255.0;  // film border
      else v += (fl > 0 ? 1.0 : kAirGrain) * noise(rng);
      out.image.data[static_cast<std::size_t>(y) * width + x] =
          static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }

  for (std::size_t i = 0; i < soft.size(); ++i)
    if (bone[i]) soft[i] = 0;

  // dark strokes of a given thickness, restricted to a mask
  const auto stroke = [&](double sx, double sy, double len, double ang, int thick, int delta,
                          const std::vector<std::uint8_t>& mask) {
    const LineSegment seg{static_cast<int>(std::lround(sx)), static_cast<int>(std::lround(sy)),
                          static_cast<int>(std::lround(sx + len * std::sin(ang))),
                          static_cast<int>(std::lround(sy + len * std::cos(ang)))};
    for (auto [x0, y] : bresenham(seg))
      for (int x = x0; x < x0 + thick; ++x) {
        if (x < 0 || y < 0 || x >= width || y >= height) continue;
        const auto i = static_cast<std::size_t>(y) * width + x;
        if (mask[i]) out.image.data[i] = static_cast<std::uint8_t>(std::clamp(out.image.data[i] - delta, 0, 255));
      }
    return seg;
  };
  const double deg = M_PI / 180.0;

  // trabecular streaks: short, roughly longitudinal, darker than the marrow
  for (int k = 0; k < static_cast<int>(H * kTrabecular); ++k) {
    const double sy = uniform(rng, 0.0, H - 1);
    const double sx = cx0 + tilt * (sy - H / 2) + uniform(rng, -0.8, 0.8) * half_at(sy);
    stroke(sx, sy, uniform(rng, 5.0, 14.0), uniform(rng, -kStreakSpread, kStreakSpread) * deg, 2, 40, marrow);
  }
  // muscle planes: long faint curves in the soft tissue on both sides of the bone
  for (int side : {-1, 1}) {
    const double inner = cx0 + side * half * 1.8, outer = side < 0 ? flesh_l : flesh_r;
    for (int k = 0, n = uniform_int(rng, kPlanesLo, kPlanesHi); k < n; ++k) {
      const double x0 = inner + (outer - inner) * uniform(rng, 0.15, 0.85);
      const double amp = uniform(rng, 1.0, 3.0), phase = uniform(rng, 0.0, 2 * M_PI);
      const double freq = uniform(rng, 0.3, 0.8) * 2 * M_PI / H;
      const int ya = static_cast<int>(uniform(rng, 0.0, 0.3) * H);
      const int yb = static_cast<int>(uniform(rng, 0.7, 1.0) * H);
      for (int y = ya; y < yb; ++y) {
        const int x = static_cast<int>(std::lround(x0 + amp * std::sin(freq * y + phase)));
        for (int t = 0; t < 2; ++t) {
          if (x + t < 0 || x + t >= width) continue;
          const auto i = static_cast<std::size_t>(y) * width + x + t;
          if (soft[i]) out.image.data[i] = static_cast<std::uint8_t>(std::max(0, out.image.data[i] - kPlaneContrast));
        }
      }
    }
  }

  const int margin = 4;
  double shift_sum = 0.0;
  out.bone_lower = width;
  out.bone_upper = 0;
  for (const auto& c : cracks) {
    shift_sum += std::abs(c.shift);
    const double cx = cx0 + tilt * (c.y - H / 2);
    const double hw = half_at(c.y) + shift_sum;
    double x0 = cx - hw, x1 = cx + hw;
    const double dy = std::abs(c.slope) * hw;
    double y0 = c.y - dy - crack_half, y1 = c.y + dy + crack_half;
    // comminution: secondary cracks around the main one
    const int pieces = uniform_int(rng, kPiecesLo, kPiecesHi);
    for (int k = 0; k < pieces; ++k) {
      const double sy = c.y + uniform(rng, -0.04, 0.04) * H;
      const double sx = cx + uniform(rng, -0.6, 0.6) * hw;
      const double ang = (90.0 - uniform(rng, 20.0, 60.0)) * deg * ((rng() & 1) ? 1 : -1);
      const auto seg = stroke(sx, sy, uniform(rng, 0.5, 1.0) * hw, ang, 2, 50, bone);
      y0 = std::min({y0, double(seg.y1), double(seg.y2)});
      y1 = std::max({y1, double(seg.y1), double(seg.y2)});
      x0 = std::min({x0, double(seg.x1), double(seg.x2)});
      x1 = std::max({x1, double(seg.x1), double(seg.x2)});
    }
    const int rx0 = std::max(0, static_cast<int>(std::floor(x0)) - margin);
    const int rx1 = std::min(width - 1, static_cast<int>(std::ceil(x1)) + margin);
    const int ry0 = std::max(0, static_cast<int>(std::floor(y0)) - margin);
    const int ry1 = std::min(height - 1, static_cast<int>(std::ceil(y1)) + margin);
    out.fractures.push_back({rx0, ry0, rx1 - rx0 + 1, ry1 - ry0 + 1});
    out.bone_lower = std::min(out.bone_lower, static_cast<int>(std::floor(cx - hw)));
    out.bone_upper = std::max(out.bone_upper, static_cast<int>(std::ceil(cx + hw)));
  }
  return out;
}

std::vector<Xray> corpus(const CorpusConfig& cfg) {
  if (cfg.count < 1) fail(ErrorCode::InvalidConfig, "corpus needs at least one image");
  std::vector<Xray> out(static_cast<std::size_t>(cfg.count));
  for (int i = 0; i < cfg.count; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "xr%03d", i + 1);
    out[static_cast<std::size_t>(i)] = xray(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)), id, cfg.width, cfg.height);
  }
  return out;
}

}  // namespace fracline::synth
