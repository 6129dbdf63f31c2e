#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fracline/image.hpp"

namespace fracline {

/// Loads PNG, JPEG or binary PGM (by content signature) as 8-bit grayscale.
/// Color inputs are converted with the libpng/libjpeg luma conversion.
GrayImage read_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const GrayImage& img);
void write_png(const std::filesystem::path& path, const EdgeImage& edges);
std::vector<std::uint8_t> encode_png(const GrayImage& img);

GrayImage to_gray(const EdgeImage& edges);
/// Thresholds at 128; pixels >= 128 become edges.
EdgeImage to_edges(const GrayImage& img);

}  // namespace fracline
