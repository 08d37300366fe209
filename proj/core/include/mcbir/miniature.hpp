#pragma once

#include <array>
#include <functional>

#include "mcbir/dct.hpp"
#include "mcbir/image.hpp"

namespace mcbir {

/// Level-shifted block means, one value per 8x8 block of the source.
using DcImage = RealImage;

/// The 8x8 summary image that the final feature DCT runs on.
struct Miniature {
  std::array<double, 64> values{};  // row-major

  double operator()(int x, int y) const { return values[y * 8 + x]; }
  double& operator()(int x, int y) { return values[y * 8 + x]; }
  bool operator==(const Miniature&) const = default;
};

/// C(0,0)/8 of every block inside the component's true extent. Padding
/// blocks beyond ceil(width/8) x ceil(height/8) are dropped.
DcImage dc_image_from_grid(const CoefficientGrid& grid);

/// One reduction step: edge-pad to a multiple of 8, forward DCT each 8x8
/// block, keep C(0,0)/8. Output is ceil(w/8) x ceil(h/8).
DcImage dc_reduce(const DcImage& image);

/// Exact area-weighted resampling down to 8x8; fractional pixel coverage
/// contributes proportionally, so the mean is preserved.
Miniature area_resample(const DcImage& image);

/// Called with each intermediate DC image (the starting one included).
using DcObserver = std::function<void(const DcImage&)>;

/// Reduces while min(width, height) >= 64, then area-resamples whatever is
/// left (8..63 per side) to exactly 8x8.
Miniature build_miniature(const DcImage& image, const DcObserver& observer = {});

/// Stats describing how a miniature was reached, for diagnostics and tests.
struct ReductionPlan {
  int reductions = 0;
  bool resampled = false;
};
ReductionPlan plan_reduction(int width, int height);

/// Debug rendering of a DC image: +128, rounded, clamped to 8-bit gray.
PixelImage dc_image_to_gray(const DcImage& image);

}  // namespace mcbir
