#pragma once

#include <cstdint>
#include <vector>

#include "fracline/error.hpp"

namespace fracline {

/// Row-major 8-bit grayscale raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w > 0 && h > 0 ? w * h : 0), fill) {}

  bool empty() const { return width <= 0 || height <= 0; }
  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

  /// Throws InvalidInput unless dimensions are positive and match the buffer.
  void validate() const;
};

/// Binary edge map; every pixel is 0 or 255.
struct EdgeImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  EdgeImage() = default;
  EdgeImage(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(w > 0 && h > 0 ? w * h : 0), 0) {}

  bool on(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) {
    data[static_cast<std::size_t>(y) * width + x] = v ? 255 : 0;
  }
  std::size_t count() const;

  /// Throws InvalidInput for bad dimensions or any pixel outside {0, 255}.
  void validate() const;
};

inline void GrayImage::validate() const {
  if (width <= 0 || height <= 0)
    fail(ErrorCode::InvalidInput, "image has zero dimension");
  if (data.size() != static_cast<std::size_t>(width) * height)
    fail(ErrorCode::InvalidInput, "image buffer does not match dimensions");
}

inline std::size_t EdgeImage::count() const {
  std::size_t n = 0;
  for (auto v : data) n += v != 0;
  return n;
}

inline void EdgeImage::validate() const {
  if (width <= 0 || height <= 0)
    fail(ErrorCode::InvalidInput, "edge image has zero dimension");
  if (data.size() != static_cast<std::size_t>(width) * height)
    fail(ErrorCode::InvalidInput, "edge image buffer does not match dimensions");
  for (auto v : data)
    if (v != 0 && v != 255) fail(ErrorCode::InvalidInput, "edge image is not binary");
}

}  // namespace fracline
