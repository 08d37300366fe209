#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mcbir/image.hpp"

namespace mcbir {

/// 8x8 block in natural (row-major) order. For coefficient blocks,
/// `at(u, v)` is C(u, v): u is the vertical frequency (row), v the
/// horizontal one (column).
struct DctBlock {
  std::array<double, 64> coefficients{};

  double at(int u, int v) const { return coefficients[u * 8 + v]; }
  double& at(int u, int v) { return coefficients[u * 8 + v]; }
  double dc() const { return coefficients[0]; }
  bool operator==(const DctBlock&) const = default;
};

using Block8 = std::array<double, 64>;

/// Zigzag scan position -> natural index.
inline constexpr std::array<int, 64> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

/// Orthonormal 2-D DCT-II, computed separably (rows then columns).
/// Scaling gives C(0,0) = 8 * mean(block).
DctBlock forward_dct_8x8(const Block8& block);

/// Per-component grid of 8x8 coefficient blocks.
///
/// `blocks_wide` x `blocks_high` is the allocated grid, which for JPEG input
/// follows MCU padding. `width` x `height` is the component's true sample
/// extent; blocks at or beyond `valid_blocks_wide()` / `valid_blocks_high()`
/// are padding.
struct CoefficientGrid {
  int component_id = 0;
  int h_sampling = 1;
  int v_sampling = 1;
  int width = 0;
  int height = 0;
  int blocks_wide = 0;
  int blocks_high = 0;
  std::vector<DctBlock> blocks;
  /// Quantization table in natural order; all ones on the pixel path.
  std::array<std::uint16_t, 64> quant_table{};

  const DctBlock& block(int bx, int by) const {
    return blocks[static_cast<std::size_t>(by) * blocks_wide + bx];
  }
  DctBlock& block(int bx, int by) {
    return blocks[static_cast<std::size_t>(by) * blocks_wide + bx];
  }
  int valid_blocks_wide() const { return (width + 7) / 8; }
  int valid_blocks_high() const { return (height + 7) / 8; }
};

/// Blocks a level-shifted plane (edge-replicated to a multiple of 8) and
/// applies forward_dct_8x8 to each block.
CoefficientGrid coefficients_from_plane(const RealImage& plane, int component_id);

/// Pixel path into the coefficient domain: level shift, pad, block DCT.
/// RGB input is converted to YCbCr at full resolution first, so the grids
/// come back in Y, Cb, Cr order.
std::vector<CoefficientGrid> pixel_coefficient_grids(const PixelImage& image);

}  // namespace mcbir
