#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracline/hough.hpp"
#include "fracline/image.hpp"
#include "fracline/label_service.hpp"

namespace fracline::synth {

/// Marks the Bresenham pixels of a segment.
void draw_line(EdgeImage& img, const LineSegment& seg);
std::vector<std::pair<int, int>> bresenham(const LineSegment& seg);

struct LineImage {
  EdgeImage edges;
  std::vector<LineSegment> truth;
};

/// Square edge image with `count` straight lines of length [min_len, max_len]
/// whose pixels keep at least `spacing` pixels from each other.
LineImage separated_lines(std::uint64_t seed, int size = 64, int count = 3, int min_len = 30, int max_len = 60,
                          int spacing = 8);

/// Long vertical edges plus short oblique clutter strokes of a fixed shape
/// (dx = 6, dy = -2). Dropping the strokes moves the mean line gradient the
/// most when the minimum length passes 7.
LineImage clutter_image(std::uint64_t seed, int width = 160, int height = 160);

/// Line x-values drawn from a dense bone cluster and a sparse flesh cluster.
struct ClusterLines {
  int width = 0;
  std::vector<LineSegment> bone;
  std::vector<LineSegment> flesh;
};

ClusterLines two_cluster_lines(std::uint64_t seed, int width = 400, int height = 300);

/// A rendered long-bone radiograph with a comminuted crack planted in each of four
/// strata of the shaft.
struct Xray {
  std::string id;
  GrayImage image;
  std::vector<Rect> fractures;  // one box per crack
  int bone_lower = 0;  // bone x-extent over the crack rows
  int bone_upper = 0;
};

Xray xray(std::uint64_t seed, const std::string& id, int width = 400, int height = 640);

struct CorpusConfig {
  int count = 52;
  int width = 400;
  int height = 640;
  std::uint64_t seed = 1;
};

std::vector<Xray> corpus(const CorpusConfig& cfg);

}  // namespace fracline::synth
