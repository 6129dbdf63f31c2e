#pragma once

#include <string>
#include <vector>

#include "fracline/hough.hpp"

namespace fracline {

/// Sliding-window x-value density: totals[i] sums the frequencies of line
/// x-values falling in [i, i + window).
struct DensityProfile {
  std::vector<double> totals;  // one per image column
  int window = 1;
};

struct BoneBounds {
  int lower = 0;
  int upper = 0;
};

/// Window length for a fraction of the image width (rounded, at least 1).
int window_length(int width, double window_frac);

DensityProfile density_profile(const std::vector<LineSegment>& lines, int width, double window_frac = 0.05);
DensityProfile density_profile_with_window(const std::vector<LineSegment>& lines, int width, int window);

struct BoundsOptions {
  int smooth_radius = -1;     // moving-average radius; < 0 means window / 2
  double rise_tolerance = 0.0;  // fraction of the peak a rise must exceed to end a descent
  double drop_fraction = 0.5;   // a descent only ends once it is at or below this fraction of the peak
};

/// Smooths the profile, finds the global maximum and walks outward on each
/// side to the first turning point: the lowest value seen before the profile
/// climbs by more than rise_tolerance * peak, or the first zero. Minima above
/// drop_fraction * peak are plateau noise and do not count. Flat minima
/// resolve to their far edge. Throws NotFound for an all-zero profile.
BoneBounds bone_bounds(const DensityProfile& profile, const BoundsOptions& opt = {});

/// Keeps lines whose x-midpoint lies in [lower, upper], preserving order.
std::vector<LineSegment> filter_leg_lines(const std::vector<LineSegment>& lines, const BoneBounds& bounds);

/// Moving average with a truncated window at the borders.
std::vector<double> moving_average(const std::vector<double>& v, int radius);

std::string profile_to_csv(const DensityProfile& profile);

}  // namespace fracline
