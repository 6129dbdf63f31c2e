#pragma once

#include "fracline/image.hpp"

namespace fracline {

struct EnhancementConfig {
  double gamma = 1.2;
  double unsharp_amount = 1.0;
  int unsharp_radius = 2;
  int denoise_kernel = 3;
  int white_threshold = 250;
  int canny_low = 50;
  int canny_high = 150;

  void validate() const;
};

// Individual enhancement stages. Each returns a new image of the same size.

/// Replaces pixels >= threshold by the median (upper median for an even
/// count) of the remaining pixels. An all-white image is returned unchanged.
GrayImage remove_white_space(const GrayImage& img, int threshold);
/// Histogram equalization; a single-level image is returned unchanged.
GrayImage equalize_histogram(const GrayImage& img);
/// out = 255 * (in / 255) ^ gamma.
GrayImage apply_gamma(const GrayImage& img, double gamma);
/// k x k median filter with replicated borders. k must be odd.
GrayImage median_filter(const GrayImage& img, int kernel);
/// out = in + amount * (in - gaussian(in)), sigma = radius.
GrayImage unsharp_mask(const GrayImage& img, double amount, int radius);

/// Full enhancement chain: white-space removal, equalization, gamma,
/// denoise, unsharp mask.
GrayImage enhance(const GrayImage& img, const EnhancementConfig& cfg);

/// Canny edge detector: 3x3 Sobel, 4-sector non-maximum suppression and
/// hysteresis. Pixels with magnitude > high seed edges; pixels with
/// magnitude > low join an edge when 8-connected to a seed.
EdgeImage canny(const GrayImage& img, int low, int high);

}  // namespace fracline
