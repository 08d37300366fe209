#include "mcbir/features.hpp"

#include <cmath>

#include "mcbir/error.hpp"

namespace mcbir {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::gray: return "gray";
    case FeatureKind::color: return "color";
    case FeatureKind::mandala: return "mandala";
  }
  return "unknown";
}

std::vector<int> sub_band_positions(int band) {
  if (band < 0 || band >= kSubBandCount) {
    throw Error(Errc::invalid_argument, "sub-band index out of range");
  }
  std::vector<int> out;
  for (int i = 0; i < 64; ++i) {
    if (kSubBandOf[i] == band) out.push_back(i);
  }
  return out;
}

BandStats band_stats(const DctBlock& block, int band) {
  const auto positions = sub_band_positions(band);
  const double n = static_cast<double>(positions.size());
  double sum = 0.0;
  for (int p : positions) sum += block.coefficients[p];
  const double mean = sum / n;
  double ss = 0.0;
  for (int p : positions) {
    const double d = block.coefficients[p] - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / n)};
}

DctBlock dct_of_miniature(const Miniature& miniature) {
  // Miniature is row-major (x across); DCT input wants f[row * 8 + col].
  return forward_dct_8x8(miniature.values);
}

namespace {
void append_band_stats(const DctBlock& block, std::vector<double>& out) {
  for (int band = 4; band <= 9; ++band) {
    const auto s = band_stats(block, band);
    out.push_back(s.mean);
    out.push_back(s.stddev);
  }
}
}  // namespace

FeatureVector extract_gray_features(const DctBlock& block) {
  FeatureVector f{FeatureKind::gray, {}};
  f.values.reserve(16);
  f.values.push_back(block.at(0, 0) / 8.0);
  f.values.push_back(block.at(0, 1));
  f.values.push_back(block.at(1, 0));
  f.values.push_back(block.at(1, 1));
  append_band_stats(block, f.values);
  return f;
}

FeatureVector extract_color_features(const DctBlock& y, const DctBlock& cb,
                                     const DctBlock& cr) {
  FeatureVector f{FeatureKind::color, {}};
  f.values.reserve(18);
  f.values.push_back(y.at(0, 0) / 8.0);
  f.values.push_back(cb.at(0, 0) / 8.0);
  f.values.push_back(cr.at(0, 0) / 8.0);
  f.values.push_back(y.at(0, 1));
  f.values.push_back(y.at(1, 0));
  f.values.push_back(y.at(1, 1));
  append_band_stats(y, f.values);
  return f;
}

}  // namespace mcbir
