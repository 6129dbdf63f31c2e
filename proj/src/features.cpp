#include "fracline/features.hpp"

#include <cmath>

#include "fracline/csv.hpp"

namespace fracline {

namespace {
constexpr double kDeg = 180.0 / M_PI;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::Knee: return "knee";
    case Region::Leg: return "leg";
    case Region::Foot: return "foot";
  }
  return "?";
}

const std::array<std::string, kLineFeatureCount>& feature_names() {
  static const std::array<std::string, kLineFeatureCount> names{
      "X1", "Y1", "X2", "Y2", "DIST", "G", "X-MID", "Y-MID", "X-DIFF", "Y-DIFF", "X-DIST", "Y-DIST", "G-DEV"};
  return names;
}

std::array<double, kLineFeatureCount> FeatureVector::line_features() const {
  return {x1, y1, x2, y2, dist, gradient, mid_x, mid_y, diff_x, diff_y, dist_x, dist_y, gradient_dev};
}

std::array<double, kInputCount> FeatureVector::inputs() const {
  std::array<double, kInputCount> out{};
  const auto f = line_features();
  std::copy(f.begin(), f.end(), out.begin());
  out[13] = region == Region::Knee ? 1.0 : 0.0;
  out[14] = region == Region::Leg ? 1.0 : 0.0;
  out[15] = region == Region::Foot ? 1.0 : 0.0;
  return out;
}

double line_gradient_deg(const LineSegment& seg) {
  const double dx = seg.x2 - seg.x1;
  const double dy = seg.y2 - seg.y1;
  if (dy == 0.0) return dx == 0.0 ? 0.0 : (dx > 0 ? 90.0 : -90.0);
  return std::atan(dx / dy) * kDeg;
}

double fold_gradient_deg(double deg) {
  double f = std::fmod(deg, 180.0);
  if (f < 0) f += 180.0;
  return f >= 180.0 ? 0.0 : f;
}

FeatureVector extract(const LineSegment& seg, const GradientReference& ref, Region region) {
  FeatureVector f;
  f.x1 = seg.x1;
  f.y1 = seg.y1;
  f.x2 = seg.x2;
  f.y2 = seg.y2;
  f.diff_x = seg.x2 - seg.x1;
  f.diff_y = seg.y2 - seg.y1;
  f.dist = std::sqrt(f.diff_x * f.diff_x + f.diff_y * f.diff_y);
  f.gradient = line_gradient_deg(seg);
  f.mid_x = 0.5 * (seg.x1 + seg.x2);
  f.mid_y = 0.5 * (seg.y1 + seg.y2);
  const double rad = f.gradient / kDeg;
  f.dist_x = f.dist * std::cos(rad);
  // magnitude: the signed product is negative for every segment rising to the right
  f.dist_y = f.dist * std::fabs(std::sin(rad));
  f.gradient_dev = std::fabs(ref.theta_ref - f.gradient);
  f.region = region;
  return f;
}

GradientReference gradient_reference(const std::vector<LineSegment>& lines, double bin_width) {
  if (lines.empty()) fail(ErrorCode::EmptyInput, "gradient reference needs at least one line");
  if (!(bin_width > 0.0 && bin_width <= 180.0))
    fail(ErrorCode::InvalidConfig, "gradient bin width must lie in (0, 180]");
  const int nbins = std::max(1, static_cast<int>(std::lround(180.0 / bin_width)));
  const double width = 180.0 / nbins;
  std::vector<int> counts(static_cast<std::size_t>(nbins), 0);
  for (const auto& l : lines) {
    const double g = fold_gradient_deg(line_gradient_deg(l));
    const int bin = static_cast<int>(std::floor((g + 0.5 * width) / width)) % nbins;
    ++counts[static_cast<std::size_t>(bin)];
  }
  int best = 0;
  for (int b = 1; b < nbins; ++b)
    if (counts[static_cast<std::size_t>(b)] > counts[static_cast<std::size_t>(best)]) best = b;
  return {best * width, width};
}

void RegionBands::validate() const {
  if (knee_frac < 0 || foot_frac < 0 || knee_frac + foot_frac >= 1.0)
    fail(ErrorCode::InvalidConfig, "region fractions require 0 <= knee + foot < 1");
}

Region assign_region(const LineSegment& seg, int img_height, const RegionBands& bands) {
  bands.validate();
  if (img_height <= 0) fail(ErrorCode::InvalidInput, "image height must be positive");
  const double ym = seg.mid_y();
  if (ym <= bands.knee_frac * img_height) return Region::Knee;
  if (ym > (1.0 - bands.foot_frac) * img_height) return Region::Foot;
  return Region::Leg;
}

std::vector<std::string> feature_csv_header() {
  std::vector<std::string> h{"image_id", "line_id"};
  for (const auto& n : feature_names()) h.push_back(n);
  h.insert(h.end(), {"knee", "leg", "foot"});
  return h;
}

std::string features_to_csv(const std::vector<FeatureRow>& rows) {
  std::string out = csv::join(feature_csv_header()) + '\n';
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.image_id, std::to_string(r.line_id)};
    for (double v : r.features.inputs()) cells.push_back(csv::num(v));
    out += csv::join(cells) + '\n';
  }
  return out;
}

std::vector<FeatureRow> features_from_csv(const std::string& text) {
  const auto t = csv::parse(text);
  const auto header = feature_csv_header();
  if (t.header.size() < header.size() ||
      !std::equal(header.begin(), header.end(), t.header.begin()))
    fail(ErrorCode::InvalidInput, "unexpected feature CSV header");
  std::vector<FeatureRow> out;
  for (const auto& r : t.rows) {
    FeatureRow row;
    row.image_id = r[0];
    row.line_id = static_cast<int>(csv::to_int(r[1]));
    double v[kInputCount];
    for (std::size_t i = 0; i < kInputCount; ++i) v[i] = csv::to_double(r[2 + i]);
    auto& f = row.features;
    f.x1 = v[0]; f.y1 = v[1]; f.x2 = v[2]; f.y2 = v[3];
    f.dist = v[4]; f.gradient = v[5]; f.mid_x = v[6]; f.mid_y = v[7];
    f.diff_x = v[8]; f.diff_y = v[9]; f.dist_x = v[10]; f.dist_y = v[11]; f.gradient_dev = v[12];
    const int hot = (v[13] != 0) + (v[14] != 0) + (v[15] != 0);
    if (hot != 1) fail(ErrorCode::InvalidInput, "region indicator must be one-hot");
    f.region = v[13] != 0 ? Region::Knee : v[14] != 0 ? Region::Leg : Region::Foot;
    out.push_back(row);
  }
  return out;
}

std::vector<FeatureVector> extract_image(const std::vector<LineSegment>& lines, int img_height,
                                         const RegionBands& bands, double bin_width) {
  std::vector<FeatureVector> out;
  if (lines.empty()) return out;
  std::vector<Region> regions;
  std::vector<LineSegment> leg;
  for (const auto& l : lines) {
    regions.push_back(assign_region(l, img_height, bands));
    if (regions.back() == Region::Leg) leg.push_back(l);
  }
  const auto ref = gradient_reference(leg.empty() ? lines : leg, bin_width);
  for (std::size_t i = 0; i < lines.size(); ++i) out.push_back(extract(lines[i], ref, regions[i]));
  return out;
}

}  // namespace fracline
