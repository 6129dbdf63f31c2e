#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracline/hough.hpp"

namespace fracline {

inline constexpr int kAdpoMinLength = 1;
inline constexpr int kAdpoMaxLength = 25;

/// Result of sweeping the minimum line length, by default over [1, 25].
struct AdpoSweep {
  std::vector<int> min_lengths;                   // consecutive, e.g. 1..25
  std::vector<std::vector<LineSegment>> lines;    // per min length
  std::vector<double> avg_gradient;               // degrees, per min length
  std::vector<double> delta_avg_gradient;         // one per min length after the first
  int chosen = 2;                                 // optimized minimum line length
  std::vector<std::string> warnings;

  const std::vector<LineSegment>& lines_at(int min_length) const {
    return lines.at(static_cast<std::size_t>(min_length - min_lengths.front()));
  }
};

struct AdpoOptions {
  bool absolute_delta = false;  // argmax over |delta| instead of the signed delta
  HoughMode mode = HoughMode::Probabilistic;
  int min_length_lo = kAdpoMinLength;
  int min_length_hi = kAdpoMaxLength;
};

/// Mean line gradient in degrees. Throws EmptyInput on an empty list.
double average_gradient(const std::vector<LineSegment>& lines);

/// Runs the detector once per minimum line length in [lo, hi] with a fixed
/// seed and picks the length whose average gradient jumps the most relative
/// to the previous length (ties to the smaller length). `base.threshold`
/// must be 1.
AdpoSweep optimize_min_line_length(const EdgeImage& edges, const HoughParams& base, std::uint64_t seed,
                                   const AdpoOptions& opt = {});

/// Union of the line sets at chosen, chosen-1 and chosen-2 (never below lo),
/// keeping the first occurrence of each exact tuple.
std::vector<LineSegment> borrow_lines(const AdpoSweep& sweep);

/// Diagnostic: number of detected lines for each max-line-gap in [lo, hi].
std::vector<std::pair<int, std::size_t>> max_gap_sweep(const EdgeImage& edges, const HoughParams& base,
                                                       std::uint64_t seed, int lo = 10, int hi = 20);

std::string sweep_to_csv(const AdpoSweep& sweep);

}  // namespace fracline
