#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mcbir/dct.hpp"
#include "mcbir/miniature.hpp"

namespace mcbir {

/// `mandala` is the 9-D comparison baseline used by the evaluation harness.
enum class FeatureKind : std::uint8_t { gray = 0, color = 1, mandala = 2 };

constexpr std::size_t dimension_of(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::gray: return 16;
    case FeatureKind::color: return 18;
    case FeatureKind::mandala: return 9;
  }
  return 0;
}

std::string_view to_string(FeatureKind kind);

struct FeatureVector {
  FeatureKind kind = FeatureKind::gray;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const FeatureVector&) const = default;
};

/// Sub-band membership of each coefficient (natural order), bands 0..9:
///
///   0 1 | 4 4 | 7 7 7 7
///   2 3 | 4 4 | 7 7 7 7
///   ----+-----+
///   5 5 | 6 6 | 7 7 7 7
///   5 5 | 6 6 | 7 7 7 7
///   ----------+--------
///   8 8 8 8   | 9 9 9 9
///   8 8 8 8   | 9 9 9 9   (rows 4-7 likewise)
///
/// i.e. the dyadic, wavelet-like regrouping of the 8x8 block.
inline constexpr std::array<std::uint8_t, 64> kSubBandOf = {
    0, 1, 4, 4, 7, 7, 7, 7,  //
    2, 3, 4, 4, 7, 7, 7, 7,  //
    5, 5, 6, 6, 7, 7, 7, 7,  //
    5, 5, 6, 6, 7, 7, 7, 7,  //
    8, 8, 8, 8, 9, 9, 9, 9,  //
    8, 8, 8, 8, 9, 9, 9, 9,  //
    8, 8, 8, 8, 9, 9, 9, 9,  //
    8, 8, 8, 8, 9, 9, 9, 9};

inline constexpr int kSubBandCount = 10;

struct BandStats {
  double mean = 0.0;
  double stddev = 0.0;  // population (divide by n)
};

/// Natural-order positions belonging to `band`.
std::vector<int> sub_band_positions(int band);

BandStats band_stats(const DctBlock& block, int band);

/// The miniature is already level-shifted, so this is just the forward DCT.
DctBlock dct_of_miniature(const Miniature& miniature);

/// [C00/8, C01, C10, C11, mean/std of B4..B9]
FeatureVector extract_gray_features(const DctBlock& block);

/// [CY00/8, CCb00/8, CCr00/8, CY01, CY10, CY11, mean/std of Y's B4..B9]
FeatureVector extract_color_features(const DctBlock& y, const DctBlock& cb,
                                     const DctBlock& cr);

}  // namespace mcbir
