#include "mcbir/miniature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcbir/error.hpp"

namespace mcbir {

DcImage dc_image_from_grid(const CoefficientGrid& grid) {
  const int w = grid.valid_blocks_wide();
  const int h = grid.valid_blocks_high();
  if (grid.blocks.empty() || w == 0 || h == 0) {
    throw Error(Errc::invalid_argument, "empty coefficient grid");
  }
  if (w > grid.blocks_wide || h > grid.blocks_high) {
    throw Error(Errc::invalid_argument, "coefficient grid smaller than its extent");
  }
  DcImage out(w, h);
  for (int by = 0; by < h; ++by) {
    for (int bx = 0; bx < w; ++bx) {
      out(bx, by) = grid.block(bx, by).dc() / 8.0;
    }
  }
  return out;
}

DcImage dc_reduce(const DcImage& image) {
  if (image.width < 8 || image.height < 8) {
    throw Error(Errc::image_too_small,
                "DC image " + std::to_string(image.width) + "x" +
                    std::to_string(image.height) + " is smaller than 8x8");
  }
  const int ow = (image.width + 7) / 8;
  const int oh = (image.height + 7) / 8;
  const DcImage padded = pad_replicate(image, ow * 8, oh * 8);
  DcImage out(ow, oh);
  Block8 block{};
  for (int by = 0; by < oh; ++by) {
    for (int bx = 0; bx < ow; ++bx) {
      for (int x = 0; x < 8; ++x) {
        for (int y = 0; y < 8; ++y) {
          block[x * 8 + y] = padded(bx * 8 + y, by * 8 + x);
        }
      }
      out(bx, by) = forward_dct_8x8(block).dc() / 8.0;
    }
  }
  return out;
}

namespace {

// weights[k][i]: overlap of input cell k with output cell i, in 1/8 cells.
// Each output cell sums to n; the division happens once at the end.
std::vector<std::array<double, 8>> axis_weights(int n) {
  std::vector<std::array<double, 8>> w(static_cast<std::size_t>(n));
  for (int i = 0; i < 8; ++i) {
    // Work in units of 1/8 input cell so every boundary is an integer.
    const long lo = static_cast<long>(i) * n;
    const long hi = static_cast<long>(i + 1) * n;
    for (int k = static_cast<int>(lo / 8); k < n && 8L * k < hi; ++k) {
      const long overlap = std::min(hi, 8L * k + 8) - std::max(lo, 8L * k);
      if (overlap > 0) w[k][i] = static_cast<double>(overlap);
    }
  }
  return w;
}

}  // namespace

Miniature area_resample(const DcImage& image) {
  if (image.width < 8 || image.height < 8) {
    throw Error(Errc::image_too_small, "area_resample needs at least 8x8 input");
  }
  Miniature out;
  if (image.width == 8 && image.height == 8) {
    std::copy(image.values.begin(), image.values.end(), out.values.begin());
    return out;
  }
  const auto wx = axis_weights(image.width);
  const auto wy = axis_weights(image.height);

  // Collapse columns first: rows[y][j] = sum_x img(x, y) * wx[x][j].
  std::vector<std::array<double, 8>> rows(static_cast<std::size_t>(image.height));
  for (int y = 0; y < image.height; ++y) {
    auto& r = rows[y];
    r.fill(0.0);
    for (int x = 0; x < image.width; ++x) {
      const double v = image(x, y);
      for (int j = 0; j < 8; ++j) r[j] += v * wx[x][j];
    }
  }
  for (int y = 0; y < image.height; ++y) {
    for (int i = 0; i < 8; ++i) {
      const double wyi = wy[y][i];
      if (wyi == 0.0) continue;
      for (int j = 0; j < 8; ++j) out(j, i) += rows[y][j] * wyi;
    }
  }
  const double area = static_cast<double>(image.width) * image.height;
  for (auto& v : out.values) v /= area;
  return out;
}

ReductionPlan plan_reduction(int width, int height) {
  ReductionPlan plan;
  while (std::min(width, height) >= 64) {
    width = (width + 7) / 8;
    height = (height + 7) / 8;
    ++plan.reductions;
  }
  plan.resampled = !(width == 8 && height == 8);
  return plan;
}

Miniature build_miniature(const DcImage& image, const DcObserver& observer) {
  if (image.width < 8 || image.height < 8) {
    throw Error(Errc::image_too_small,
                "DC image " + std::to_string(image.width) + "x" +
                    std::to_string(image.height) + " is smaller than 8x8");
  }
  if (observer) observer(image);
  if (std::min(image.width, image.height) < 64) return area_resample(image);

  DcImage current = dc_reduce(image);
  if (observer) observer(current);
  while (std::min(current.width, current.height) >= 64) {
    current = dc_reduce(current);
    if (observer) observer(current);
  }
  return area_resample(current);
}

PixelImage dc_image_to_gray(const DcImage& image) {
  auto out = PixelImage::make(image.width, image.height, ColorSpace::gray);
  for (std::size_t i = 0; i < image.values.size(); ++i) {
    out.samples[i] = static_cast<std::uint8_t>(
        std::clamp(std::lround(image.values[i] + 128.0), 0L, 255L));
  }
  return out;
}

}  // namespace mcbir
