#pragma once

#include <array>
#include <string>
#include <vector>

#include "fracline/hough.hpp"

namespace fracline {

enum class Region { Knee, Leg, Foot };

const char* region_name(Region r);

inline constexpr std::size_t kLineFeatureCount = 13;
inline constexpr std::size_t kInputCount = 16;

/// Column abbreviations of the 13 line features, in vector order.
const std::array<std::string, kLineFeatureCount>& feature_names();

/// The 13 per-line features plus the one-hot region indicator.
/// Angles are in degrees.
struct FeatureVector {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  double dist = 0;         // DIST
  double gradient = 0;     // G, atan(dx / dy)
  double mid_x = 0;        // X-MID
  double mid_y = 0;        // Y-MID
  double diff_x = 0;       // X-DIFF
  double diff_y = 0;       // Y-DIFF (signed)
  double dist_x = 0;       // X-DIST
  double dist_y = 0;       // Y-DIST
  double gradient_dev = 0; // G-DEV
  Region region = Region::Leg;

  std::array<double, kLineFeatureCount> line_features() const;
  /// 13 line features followed by the knee/leg/foot indicators.
  std::array<double, kInputCount> inputs() const;
};

/// Modal line gradient of an image and the histogram bin width used to find it.
struct GradientReference {
  double theta_ref = 0.0;  // degrees, [0, 180)
  double bin_width = 1.0;  // degrees
};

/// Line gradient in degrees, atan((x2 - x1) / (y2 - y1)), in (-90, 90].
/// A horizontal segment (y1 == y2) maps to 90; a single point maps to 0.
double line_gradient_deg(const LineSegment& seg);

/// Gradient folded into [0, 180) so a line and its reverse coincide.
double fold_gradient_deg(double deg);

/// Extracts features from a normalized segment.
FeatureVector extract(const LineSegment& seg, const GradientReference& ref, Region region);

/// Centre of the most populated folded-gradient bin; ties go to the smaller
/// angle. Bins are centred on multiples of the (adjusted) bin width and
/// wrap at 180 degrees.
GradientReference gradient_reference(const std::vector<LineSegment>& lines, double bin_width = 1.0);

struct RegionBands {
  double knee_frac = 0.2;
  double foot_frac = 0.2;

  void validate() const;
};

/// Knee above knee_frac * height (boundary inclusive), foot below
/// (1 - foot_frac) * height (boundary exclusive), leg otherwise.
Region assign_region(const LineSegment& seg, int img_height, const RegionBands& bands);

/// Features of every line of one image. Regions come from the bands and
/// theta_ref from the leg-region lines (all lines when the leg band is empty).
std::vector<FeatureVector> extract_image(const std::vector<LineSegment>& lines, int img_height,
                                         const RegionBands& bands = {}, double bin_width = 1.0);

// Feature CSV: image_id,line_id,X1,...,G-DEV,knee,leg,foot
struct FeatureRow {
  std::string image_id;
  int line_id = 0;
  FeatureVector features;
};

std::vector<std::string> feature_csv_header();
std::string features_to_csv(const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> features_from_csv(const std::string& text);

}  // namespace fracline
