#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracline/config.hpp"
#include "fracline/eval.hpp"
#include "fracline/label_service.hpp"

namespace fracline {

/// Stable per-image seed (FNV-1a of the id mixed with the master seed).
std::uint64_t image_seed(std::uint64_t master, const std::string& image_id);

/// enhance followed by canny with the configured thresholds.
EdgeImage edge_map(const GrayImage& img, const EnhancementConfig& cfg);

struct DetectedImage {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<LineSegment> lines;     // lines the classifier sees
  std::vector<LineSegment> screened;  // removed by the bone-region filter
  std::optional<AdpoSweep> sweep;     // adpo only
  std::optional<BoneBounds> bounds;   // adpo only
};

/// Standard: fixed Hough parameters. Adpo: min-length sweep, borrowed lines
/// of the chosen length and the two below it, then the bone-region filter.
DetectedImage detect_edges(const EdgeImage& edges, const std::string& image_id, Scheme scheme,
                           const PipelineConfig& cfg);
DetectedImage detect_image(const GrayImage& img, const std::string& image_id, Scheme scheme,
                           const PipelineConfig& cfg);

/// theta_ref is taken from the leg-region lines the classifier sees.
GradientReference image_reference(const DetectedImage& d, const PipelineConfig& cfg);
std::vector<FeatureRow> feature_rows(const DetectedImage& d, const PipelineConfig& cfg);

/// Lines with an endpoint in any fracture rectangle are targets +1.
ImageSample labeled_sample(const DetectedImage& d, const std::vector<Rect>& fractures, const PipelineConfig& cfg);

/// An input image with its ground-truth fracture rectangles.
struct AnnotatedImage {
  std::string id;
  GrayImage image;
  std::vector<Rect> fractures;
};

// Fracture CSV: image_id,x,y,width,height (one row per rectangle).
std::string fractures_to_csv(const std::vector<AnnotatedImage>& images);
std::map<std::string, std::vector<Rect>> fractures_from_csv(const std::string& text);

/// Detection and labelling of every image (run in parallel, order kept).
std::vector<ImageSample> prepare_samples(const std::vector<AnnotatedImage>& images, Scheme scheme,
                                         const PipelineConfig& cfg);

/// The last `test_images` samples are held out for testing.
struct SampleSplit {
  std::vector<ImageSample> train;
  std::vector<ImageSample> test;
};
SampleSplit split_samples(std::vector<ImageSample> samples, int test_images);

/// Rows the classifier sees (screened lines excluded), pooled over images.
LabeledDataset pooled_rows(const std::vector<ImageSample>& samples);

ImageSweepConfig image_sweep_config(const PipelineConfig& cfg);
LineSweepConfig line_sweep_config(const PipelineConfig& cfg);

}  // namespace fracline
