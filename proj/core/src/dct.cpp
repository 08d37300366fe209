#include "mcbir/dct.hpp"

#include <cmath>
#include <numbers>

#include "mcbir/error.hpp"

namespace mcbir {

namespace {

// cos((2k + 1) u pi / 16) for odd u, k = 0..3
struct OddTable {
  std::array<std::array<double, 4>, 4> m{};
  OddTable() {
    for (int i = 0; i < 4; ++i) {
      const int u = 2 * i + 1;
      for (int k = 0; k < 4; ++k) m[i][k] = std::cos((2 * k + 1) * u * std::numbers::pi / 16.0);
    }
  }
};

const OddTable& odd_table() {
  static const OddTable t;
  return t;
}

// Unscaled 1-D DCT: out[u] = sum_x in[x] cos((2x + 1) u pi / 16), evaluated
// through even/odd butterflies so that symmetric input cancels exactly.
void dct_1d(const double* in, std::ptrdiff_t stride, double* out, std::ptrdiff_t ostride) {
  static const double c4 = std::cos(std::numbers::pi / 4.0);
  static const double c2 = std::cos(std::numbers::pi / 8.0);
  static const double c6 = std::cos(3.0 * std::numbers::pi / 8.0);
  double s[4], d[4];
  for (int k = 0; k < 4; ++k) {
    s[k] = in[k * stride] + in[(7 - k) * stride];
    d[k] = in[k * stride] - in[(7 - k) * stride];
  }
  const double ss0 = s[0] + s[3], ss1 = s[1] + s[2];
  const double ds0 = s[0] - s[3], ds1 = s[1] - s[2];
  out[0] = ss0 + ss1;
  out[4 * ostride] = c4 * (ss0 - ss1);
  out[2 * ostride] = c2 * ds0 + c6 * ds1;
  out[6 * ostride] = c6 * ds0 - c2 * ds1;
  const auto& t = odd_table().m;
  for (int i = 0; i < 4; ++i) {
    out[(2 * i + 1) * ostride] = (t[i][0] * d[0] + t[i][1] * d[1]) + (t[i][2] * d[2] + t[i][3] * d[3]);
  }
}

}  // namespace

DctBlock forward_dct_8x8(const Block8& block) {
  // rows (along y), then columns (along x)
  Block8 tmp{};
  for (int x = 0; x < 8; ++x) dct_1d(&block[x * 8], 1, &tmp[x * 8], 1);
  DctBlock out;
  for (int v = 0; v < 8; ++v) dct_1d(&tmp[v], 8, &out.coefficients[v], 8);
  // alpha(u) alpha(v), with alpha(0)^2 = 1/8 kept exact
  const double a0a = 1.0 / (4.0 * std::numbers::sqrt2);
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      const double scale = u == 0 && v == 0 ? 0.125 : (u == 0 || v == 0 ? a0a : 0.25);
      out.coefficients[u * 8 + v] *= scale;
    }
  }
  return out;
}

CoefficientGrid coefficients_from_plane(const RealImage& plane, int component_id) {
  if (plane.width <= 0 || plane.height <= 0) {
    throw Error(Errc::invalid_argument, "empty plane");
  }
  CoefficientGrid grid;
  grid.component_id = component_id;
  grid.width = plane.width;
  grid.height = plane.height;
  grid.blocks_wide = (plane.width + 7) / 8;
  grid.blocks_high = (plane.height + 7) / 8;
  grid.quant_table.fill(1);
  grid.blocks.resize(static_cast<std::size_t>(grid.blocks_wide) * grid.blocks_high);

  const RealImage padded =
      pad_replicate(plane, grid.blocks_wide * 8, grid.blocks_high * 8);
  Block8 samples{};
  for (int by = 0; by < grid.blocks_high; ++by) {
    for (int bx = 0; bx < grid.blocks_wide; ++bx) {
      for (int x = 0; x < 8; ++x) {
        for (int y = 0; y < 8; ++y) {
          samples[x * 8 + y] = padded(bx * 8 + y, by * 8 + x);
        }
      }
      grid.block(bx, by) = forward_dct_8x8(samples);
    }
  }
  return grid;
}

std::vector<CoefficientGrid> pixel_coefficient_grids(const PixelImage& image) {
  const PixelImage converted =
      image.space == ColorSpace::rgb ? rgb_to_ycbcr(image) : image;
  const auto planes = level_shift(converted);
  std::vector<CoefficientGrid> grids;
  grids.reserve(planes.size());
  for (std::size_t c = 0; c < planes.size(); ++c) {
    grids.push_back(coefficients_from_plane(planes[c], static_cast<int>(c) + 1));
  }
  return grids;
}

}  // namespace mcbir
