#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lulc/raster.hpp"

namespace lulc {

using Bytes = std::vector<std::uint8_t>;

enum class ImageFormat { png, jpeg, unknown };

ImageFormat sniff_format(std::span<const std::uint8_t> bytes);

// Decodes a PNG or JPEG stream into normalized RGB. Palette and grayscale
// inputs are expanded, 16-bit channels are scaled to 8 bits and alpha is
// dropped (not composited). Throws FormatError or DimensionError.
RgbImage decode_image(std::span<const std::uint8_t> bytes);
RgbImage load_image(const std::filesystem::path& path);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// 24-bit RGB PNG; channels are rounded to the nearest 8-bit value.
Bytes encode_png_rgb(const RgbImage& image);

// 8-bit single-channel PNG.
Bytes encode_png_gray(std::size_t width, std::size_t height, std::span<const std::uint8_t> values);

// Logical mask as 8-bit grayscale, 0 outside and 255 inside.
Bytes encode_mask_png(const BitMask& mask);

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> values;
};

// Accepts only 8-bit grayscale PNGs (the label and mask rasters we write).
GrayImage decode_png_gray(std::span<const std::uint8_t> bytes);

// `clustered.png` (label raster) + `clustered_map.json` (k normalized triples).
inline constexpr const char* kClusteredPng = "clustered.png";
inline constexpr const char* kClusteredMapJson = "clustered_map.json";

void write_indexed_sidecar(const IndexedImage& image, const std::filesystem::path& dir);
IndexedImage read_indexed_sidecar(const std::filesystem::path& dir);

} // namespace lulc
