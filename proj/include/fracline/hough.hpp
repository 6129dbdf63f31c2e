#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fracline/image.hpp"

namespace fracline {

struct HoughParams {
  double rho = 1.0;                 // distance resolution, pixels
  double theta = 3.14159265358979323846 / 180.0;  // angle resolution, radians
  int threshold = 10;               // minimum accumulator votes
  int min_line_length = 25;         // pixels, Euclidean
  int max_line_gap = 10;            // pixels

  void validate() const;

  /// Parameters of the standard detection scheme.
  static HoughParams standard() { return {}; }
  /// Base parameters of the adaptive scheme; min_line_length is swept.
  static HoughParams adpo() {
    HoughParams p;
    p.threshold = 1;
    p.max_line_gap = 13;
    return p;
  }
};

/// A detected segment. Normalized form has x1 <= x2, and y1 <= y2 when x1 == x2.
struct LineSegment {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  double length() const;
  double mid_x() const { return 0.5 * (x1 + x2); }
  double mid_y() const { return 0.5 * (y1 + y2); }
  LineSegment normalized() const;
  bool is_normalized() const { return x1 < x2 || (x1 == x2 && y1 <= y2); }

  friend auto operator<=>(const LineSegment&, const LineSegment&) = default;
};

/// r = x cos(theta) + y sin(theta).
double polar_of(double x, double y, double theta);

/// Dense (angle, distance) vote grid over edge pixels; votes round to the
/// nearest distance cell.
class Accumulator {
 public:
  Accumulator(int width, int height, double rho, double theta);

  int num_angles() const { return num_angles_; }
  int num_rho() const { return num_rho_; }
  double rho() const { return rho_; }
  double angle(int n) const { return n * theta_; }
  /// Distance value represented by cell index r.
  double distance(int r) const { return (r - (num_rho_ - 1) / 2) * rho_; }
  int rho_index(int x, int y, int n) const;

  int votes(int n, int r) const { return cells_[static_cast<std::size_t>(n) * num_rho_ + r]; }
  /// Adds (delta = +1) or removes (delta = -1) one pixel's votes across all angles.
  void vote(int x, int y, int delta);
  /// Returns the best cell among the pixel's cells after voting; ties keep the lowest angle.
  std::pair<int, int> vote_and_peak(int x, int y);

 private:
  int num_angles_;
  int num_rho_;
  double rho_;
  double theta_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<int> cells_;
};

Accumulator accumulate(const EdgeImage& edges, const HoughParams& p);

/// (angle index, rho index) of every cell with votes >= threshold.
std::vector<std::pair<int, int>> firing_cells(const Accumulator& acc, int threshold);

/// Progressive probabilistic Hough transform. Edge pixels are visited in an
/// order drawn from `seed`; output segments are normalized.
std::vector<LineSegment> detect_lines(const EdgeImage& edges, const HoughParams& p,
                                      std::uint64_t seed);

/// A maximal run of collinear pixels claimed by one accumulator cell.
struct HoughRun {
  LineSegment segment;
  int pixels = 0;
};

/// Deterministic exhaustive variant. Repeatedly takes the strongest unused
/// cell over the still-unclaimed pixels, gathers unclaimed pixels within rho
/// of that line, splits them into runs at gaps larger than max_line_gap and
/// claims every run. Claiming does not depend on min_line_length, so the
/// result for a longer minimum is always a subset of the result for a
/// shorter one.
std::vector<HoughRun> exhaustive_runs(const EdgeImage& edges, const HoughParams& p);
std::vector<LineSegment> detect_lines_exhaustive(const EdgeImage& edges, const HoughParams& p);
std::vector<LineSegment> filter_runs(const std::vector<HoughRun>& runs, int min_line_length);

enum class HoughMode { Probabilistic, Exhaustive };

std::vector<LineSegment> detect_lines(const EdgeImage& edges, const HoughParams& p,
                                      std::uint64_t seed, HoughMode mode);

// Serialization: CSV rows `image_id,x1,y1,x2,y2` and JSON arrays of 4-tuples.
std::string segments_to_csv(const std::vector<std::pair<std::string, LineSegment>>& rows);
std::vector<std::pair<std::string, LineSegment>> segments_from_csv(const std::string& text);
std::string segments_to_json(const std::vector<LineSegment>& segs);
std::vector<LineSegment> segments_from_json(const std::string& text);

}  // namespace fracline
