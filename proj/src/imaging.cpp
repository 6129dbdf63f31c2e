#include "fracline/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace fracline {

namespace {

inline int clamp_index(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

inline std::uint8_t saturate(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

std::vector<double> gaussian_kernel(double sigma) {
  const int half = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * half + 1);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    k[i + half] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + half];
  }
  for (auto& v : k) v /= sum;
  return k;
}

}  // namespace

void EnhancementConfig::validate() const {
  if (!(gamma > 0.0)) fail(ErrorCode::InvalidConfig, "gamma must be positive");
  if (unsharp_amount < 0.0) fail(ErrorCode::InvalidConfig, "unsharp amount must be nonnegative");
  if (unsharp_radius < 0) fail(ErrorCode::InvalidConfig, "unsharp radius must be nonnegative");
  if (denoise_kernel < 1 || denoise_kernel % 2 == 0)
    fail(ErrorCode::InvalidConfig, "denoise kernel must be odd and >= 1");
  if (white_threshold < 0 || white_threshold > 256)
    fail(ErrorCode::InvalidConfig, "white threshold must lie in [0, 256]");
  if (canny_low < 0 || canny_low >= canny_high)
    fail(ErrorCode::InvalidConfig, "canny thresholds require 0 <= low < high");
}

GrayImage remove_white_space(const GrayImage& img, int threshold) {
  img.validate();
  std::vector<std::uint8_t> rest;
  for (auto v : img.data)
    if (v < threshold) rest.push_back(v);
  if (rest.empty() || rest.size() == img.data.size()) return img;
  auto mid = rest.begin() + static_cast<std::ptrdiff_t>(rest.size() / 2);
  std::nth_element(rest.begin(), mid, rest.end());
  const std::uint8_t median = *mid;

  GrayImage out = img;
  for (auto& v : out.data)
    if (v >= threshold) v = median;
  return out;
}

GrayImage equalize_histogram(const GrayImage& img) {
  img.validate();
  std::array<std::size_t, 256> hist{};
  for (auto v : img.data) ++hist[v];

  std::array<std::size_t, 256> cdf{};
  std::size_t run = 0;
  for (int i = 0; i < 256; ++i) {
    run += hist[i];
    cdf[i] = run;
  }
  const std::size_t total = img.data.size();
  std::size_t cdf_min = 0;
  for (int i = 0; i < 256; ++i)
    if (hist[i]) {
      cdf_min = cdf[i];
      break;
    }
  if (total == cdf_min) return img;

  std::array<std::uint8_t, 256> lut{};
  const double denom = static_cast<double>(total - cdf_min);
  for (int i = 0; i < 256; ++i) {
    const double c = cdf[i] > cdf_min ? static_cast<double>(cdf[i] - cdf_min) : 0.0;
    lut[i] = saturate(c / denom * 255.0);
  }
  GrayImage out = img;
  for (auto& v : out.data) v = lut[v];
  return out;
}

GrayImage apply_gamma(const GrayImage& img, double gamma) {
  img.validate();
  if (!(gamma > 0.0)) fail(ErrorCode::InvalidConfig, "gamma must be positive");
  std::array<std::uint8_t, 256> lut{};
  for (int i = 0; i < 256; ++i) lut[i] = saturate(255.0 * std::pow(i / 255.0, gamma));
  GrayImage out = img;
  for (auto& v : out.data) v = lut[v];
  return out;
}

GrayImage median_filter(const GrayImage& img, int kernel) {
  img.validate();
  if (kernel < 1 || kernel % 2 == 0) fail(ErrorCode::InvalidConfig, "median kernel must be odd");
  if (kernel == 1) return img;
  const int half = kernel / 2;
  GrayImage out(img.width, img.height);
  std::vector<std::uint8_t> window(static_cast<std::size_t>(kernel * kernel));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      std::size_t n = 0;
      for (int dy = -half; dy <= half; ++dy)
        for (int dx = -half; dx <= half; ++dx)
          window[n++] = img.at(clamp_index(x + dx, img.width), clamp_index(y + dy, img.height));
      auto mid = window.begin() + static_cast<std::ptrdiff_t>(n / 2);
      std::nth_element(window.begin(), mid, window.end());
      out.at(x, y) = *mid;
    }
  }
  return out;
}

GrayImage unsharp_mask(const GrayImage& img, double amount, int radius) {
  img.validate();
  if (amount == 0.0 || radius <= 0) return img;
  const auto k = gaussian_kernel(static_cast<double>(radius));
  const int half = static_cast<int>(k.size() / 2);
  const int w = img.width, h = img.height;

  // separable blur: rows then columns
  std::vector<double> tmp(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -half; i <= half; ++i) acc += k[i + half] * img.at(clamp_index(x + i, w), y);
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double blur = 0.0;
      for (int i = -half; i <= half; ++i)
        blur += k[i + half] * tmp[static_cast<std::size_t>(clamp_index(y + i, h)) * w + x];
      const double v = img.at(x, y);
      out.at(x, y) = saturate(v + amount * (v - blur));
    }
  return out;
}

GrayImage enhance(const GrayImage& img, const EnhancementConfig& cfg) {
  img.validate();
  cfg.validate();
  GrayImage out = remove_white_space(img, cfg.white_threshold);
  out = equalize_histogram(out);
  out = apply_gamma(out, cfg.gamma);
  out = median_filter(out, cfg.denoise_kernel);
  return unsharp_mask(out, cfg.unsharp_amount, cfg.unsharp_radius);
}

EdgeImage canny(const GrayImage& img, int low, int high) {
  img.validate();
  if (low >= high)
    fail(ErrorCode::InvalidConfig,
         "canny low threshold " + std::to_string(low) + " must be below high " + std::to_string(high));
  const int w = img.width, h = img.height;
  const auto px = [&](int x, int y) {
    return static_cast<int>(img.at(clamp_index(x, w), clamp_index(y, h)));
  };

  std::vector<double> mag(static_cast<std::size_t>(w) * h);
  std::vector<std::uint8_t> sector(mag.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                     (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const int gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                     (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      mag[i] = std::hypot(static_cast<double>(gx), static_cast<double>(gy));
      double deg = std::atan2(static_cast<double>(gy), static_cast<double>(gx)) * 180.0 / M_PI;
      if (deg < 0) deg += 180.0;
      if (deg >= 180.0) deg -= 180.0;
      sector[i] = deg < 22.5 || deg >= 157.5 ? 0 : deg < 67.5 ? 1 : deg < 112.5 ? 2 : 3;
    }

  static constexpr std::array<std::array<int, 2>, 4> kStep{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}}};
  const auto mag_at = [&](int x, int y) {
    if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;
    return mag[static_cast<std::size_t>(y) * w + x];
  };

  // 0 = none, 1 = weak, 2 = strong
  std::vector<std::uint8_t> cls(mag.size(), 0);
  std::vector<int> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double m = mag[i];
      if (m <= low) continue;
      const auto [dx, dy] = kStep[sector[i]];
      // strict on one side, non-strict on the other: plateaus thin to one pixel
      if (!(m > mag_at(x - dx, y - dy) && m >= mag_at(x + dx, y + dy))) continue;
      cls[i] = m > high ? 2 : 1;
      if (cls[i] == 2) stack.push_back(static_cast<int>(i));
    }

  EdgeImage out(w, h);
  for (int i : stack) out.data[static_cast<std::size_t>(i)] = 255;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const int x = i % w, y = i / w;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (cls[j] == 1 && out.data[j] == 0) {
          out.data[j] = 255;
          stack.push_back(static_cast<int>(j));
        }
      }
  }
  return out;
}

}  // namespace fracline
