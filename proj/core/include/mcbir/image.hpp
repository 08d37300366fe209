#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mcbir {

enum class ColorSpace : std::uint8_t { gray, rgb, ycbcr };

/// 8-bit interleaved raster, row-major. Three-component images carry a tag
/// saying whether the samples are RGB or YCbCr.
struct PixelImage {
  int width = 0;
  int height = 0;
  ColorSpace space = ColorSpace::gray;
  std::vector<std::uint8_t> samples;

  static PixelImage make(int width, int height, ColorSpace space);

  int components() const noexcept { return space == ColorSpace::gray ? 1 : 3; }
  std::uint8_t at(int x, int y, int c = 0) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * components() + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return samples[(static_cast<std::size_t>(y) * width + x) * components() + c];
  }
  bool operator==(const PixelImage&) const = default;
};

/// Row-major real-valued matrix; `values[y * width + x]`.
struct RealImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  RealImage() = default;
  RealImage(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double operator()(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  double& operator()(int x, int y) {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  bool operator==(const RealImage&) const = default;
};

/// Parses binary PGM (P5) or PPM (P6) with maxval 255. Comments in the
/// header are accepted. P6 input is tagged RGB.
PixelImage load_pixel_image(std::span<const std::uint8_t> file_bytes);

/// Inverse of load_pixel_image; YCbCr images are written as P6 bytes as-is.
std::vector<std::uint8_t> encode_pnm(const PixelImage& image);

/// One plane per component holding `sample - 128`.
std::vector<RealImage> level_shift(const PixelImage& image);

/// JFIF full-range BT.601 conversion, rounded to nearest and clamped.
PixelImage rgb_to_ycbcr(const PixelImage& image);

/// Pulls a single component out as a gray image.
PixelImage extract_component(const PixelImage& image, int component);

PixelImage crop(const PixelImage& image, int x, int y, int width, int height);

/// Edge-replicating pad on the right and bottom up to the given size.
RealImage pad_replicate(const RealImage& image, int width, int height);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

}  // namespace mcbir
