#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mcbir/error.hpp"
#include "mcbir/features.hpp"
#include "mcbir/pipeline.hpp"
#include "support/libjpeg_ref.hpp"
#include "support/oracles.hpp"

using namespace mcbir;

namespace {

PixelImage constant_image(int w, int h, ColorSpace space, std::uint8_t v) {
  auto img = PixelImage::make(w, h, space);
  std::fill(img.samples.begin(), img.samples.end(), v);
  return img;
}

FeatureVector features_of(const PixelImage& img, ExtractMode mode = ExtractMode::automatic) {
  const auto ci = decode_image(img);
  return extract_features(ci, resolve_kind(mode, ci));
}

void expect_near_all(const FeatureVector& got, const std::vector<double>& want, double tol,
                     const std::string& what) {
  ASSERT_EQ(got.size(), want.size()) << what;
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << what << " [" << i << "]";
}

DctBlock random_block(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-500.0, 500.0);
  DctBlock b;
  for (auto& v : b.coefficients) v = d(rng);
  return b;
}

}  // namespace

TEST(SubBands, PartitionCoversEveryCoefficientOnce) {
  std::set<int> all;
  const std::size_t expected[kSubBandCount] = {1, 1, 1, 1, 4, 4, 4, 16, 16, 16};
  for (int b = 0; b < kSubBandCount; ++b) {
    const auto pos = sub_band_positions(b);
    EXPECT_EQ(pos.size(), expected[b]) << "band " << b;
    for (int p : pos) EXPECT_TRUE(all.insert(p).second) << "position " << p << " repeated";
  }
  EXPECT_EQ(all.size(), 64u);
  EXPECT_THROW(sub_band_positions(10), Error);
  EXPECT_THROW(sub_band_positions(-1), Error);
}

TEST(SubBands, LayoutMatchesRectangles) {
  // row range, column range per band
  const int rects[10][4] = {{0, 1, 0, 1}, {0, 1, 1, 2}, {1, 2, 0, 1}, {1, 2, 1, 2}, {0, 2, 2, 4},
                            {2, 4, 0, 2}, {2, 4, 2, 4}, {0, 4, 4, 8}, {4, 8, 0, 4}, {4, 8, 4, 8}};
  for (int b = 0; b < 10; ++b) {
    for (int r = rects[b][0]; r < rects[b][1]; ++r)
      for (int c = rects[b][2]; c < rects[b][3]; ++c) EXPECT_EQ(kSubBandOf[r * 8 + c], b) << r << "," << c;
  }
}

TEST(BandStats, AllOnesHasUnitMeanZeroSpread) {
  DctBlock b;
  b.coefficients.fill(1.0);
  for (int band = 0; band < kSubBandCount; ++band) {
    const auto s = band_stats(b, band);
    EXPECT_DOUBLE_EQ(s.mean, 1.0);
    EXPECT_DOUBLE_EQ(s.stddev, 0.0);
  }
}

TEST(BandStats, AlternatingSignsUsePopulationStd) {
  DctBlock b;
  const auto pos = sub_band_positions(4);
  for (std::size_t i = 0; i < pos.size(); ++i) b.coefficients[pos[i]] = i % 2 == 0 ? 1.0 : -1.0;
  const auto s = band_stats(b, 4);
  EXPECT_DOUBLE_EQ(s.mean, 0.0);
  EXPECT_DOUBLE_EQ(s.stddev, 1.0);
}

TEST(BandStats, MatchesTwoPassOracle) {
  std::mt19937_64 rng(31);
  const int rects[6][4] = {{0, 2, 2, 4}, {2, 4, 0, 2}, {2, 4, 2, 4},
                           {0, 4, 4, 8}, {4, 8, 0, 4}, {4, 8, 4, 8}};
  for (int trial = 0; trial < 200; ++trial) {
    const auto b = random_block(rng);
    for (int k = 0; k < 6; ++k) {
      const auto [m, s] = oracle::rect_stats(b.coefficients, rects[k][0], rects[k][1], rects[k][2], rects[k][3]);
      const auto got = band_stats(b, 4 + k);
      ASSERT_NEAR(got.mean, m, 1e-9);
      ASSERT_NEAR(got.stddev, s, 1e-9);
    }
  }
}

TEST(FeatureLayout, GrayVectorFromBlock) {
  std::mt19937_64 rng(32);
  const auto b = random_block(rng);
  const auto f = extract_gray_features(b);
  EXPECT_EQ(f.kind, FeatureKind::gray);
  ASSERT_EQ(f.size(), 16u);
  EXPECT_DOUBLE_EQ(f[0], b.at(0, 0) / 8.0);
  EXPECT_DOUBLE_EQ(f[1], b.at(0, 1));
  EXPECT_DOUBLE_EQ(f[2], b.at(1, 0));
  EXPECT_DOUBLE_EQ(f[3], b.at(1, 1));
  for (int band = 4; band < 10; ++band) {
    const auto s = band_stats(b, band);
    EXPECT_DOUBLE_EQ(f[4 + 2 * (band - 4)], s.mean);
    EXPECT_DOUBLE_EQ(f[5 + 2 * (band - 4)], s.stddev);
  }
}

TEST(FeatureLayout, ColorVectorFromBlocks) {
  std::mt19937_64 rng(33);
  const auto y = random_block(rng), cb = random_block(rng), cr = random_block(rng);
  const auto f = extract_color_features(y, cb, cr);
  EXPECT_EQ(f.kind, FeatureKind::color);
  ASSERT_EQ(f.size(), 18u);
  EXPECT_DOUBLE_EQ(f[0], y.dc() / 8.0);
  EXPECT_DOUBLE_EQ(f[1], cb.dc() / 8.0);
  EXPECT_DOUBLE_EQ(f[2], cr.dc() / 8.0);
  EXPECT_DOUBLE_EQ(f[3], y.at(0, 1));
  EXPECT_DOUBLE_EQ(f[4], y.at(1, 0));
  EXPECT_DOUBLE_EQ(f[5], y.at(1, 1));
  const auto g = extract_gray_features(y);
  for (int i = 4; i < 16; ++i) EXPECT_DOUBLE_EQ(f[i + 2], g[i]);
}

TEST(ClosedForms, ConstantGrayImages) {
  std::vector<double> zeros(16, 0.0);
  expect_near_all(features_of(constant_image(64, 64, ColorSpace::gray, 128)), zeros, 0.0, "128");

  auto hundred = zeros;
  hundred[0] = -28.0;
  const auto ci = decode_image(constant_image(512, 512, ColorSpace::gray, 100));
  expect_near_all(extract_features(ci, FeatureKind::gray), hundred, 0.0, "100");
  EXPECT_NEAR(dct_of_miniature(component_miniature(ci.grids[0])).dc(), -224.0, 0.0);

  auto white = zeros;
  white[0] = 127.0;
  expect_near_all(features_of(constant_image(300, 200, ColorSpace::gray, 255)), white, 0.0, "white");
  auto black = zeros;
  black[0] = -128.0;
  expect_near_all(features_of(constant_image(80, 96, ColorSpace::gray, 0)), black, 0.0, "black");
}

TEST(ClosedForms, ConstantColorImages) {
  std::vector<double> white(18, 0.0);
  white[0] = 127.0;
  expect_near_all(features_of(constant_image(128, 128, ColorSpace::rgb, 255)), white, 0.0, "white");

  // Pure red: Y = 76, Cb = 85, Cr = 255 after rounding and clamping.
  auto img = PixelImage::make(64, 72, ColorSpace::rgb);
  for (int i = 0; i < 64 * 72; ++i) img.samples[i * 3] = 255;
  std::vector<double> red(18, 0.0);
  red[0] = 76 - 128.0;
  red[1] = 85 - 128.0;
  red[2] = 255 - 128.0;
  expect_near_all(features_of(img), red, 0.0, "red");
}

TEST(FeaturePipeline, GrayMatchesIndependentOracle) {
  std::mt19937_64 rng(34);
  const std::pair<int, int> sizes[] = {{512, 512}, {640, 640}, {300, 300}, {333, 517}, {64, 64}, {97, 130}};
  for (auto [w, h] : sizes) {
    const auto img = oracle::blotchy_image(rng, w, h, ColorSpace::gray);
    expect_near_all(features_of(img), oracle::gray_features(img), 1e-6,
                    std::to_string(w) + "x" + std::to_string(h));
  }
}

TEST(FeaturePipeline, ColorMatchesIndependentOracle) {
  std::mt19937_64 rng(35);
  const std::pair<int, int> sizes[] = {{512, 512}, {640, 480}, {100, 250}};
  for (auto [w, h] : sizes) {
    const auto img = oracle::blotchy_image(rng, w, h, ColorSpace::rgb);
    expect_near_all(features_of(img), oracle::color_features(img), 1e-6,
                    std::to_string(w) + "x" + std::to_string(h));
  }
}

TEST(FeaturePipeline, GrayOfColorUsesLuma) {
  std::mt19937_64 rng(36);
  const auto img = oracle::blotchy_image(rng, 200, 160, ColorSpace::rgb);
  expect_near_all(features_of(img, ExtractMode::gray), oracle::gray_features(oracle::to_ycbcr(img)), 1e-6,
                  "luma");
}

TEST(FeaturePipeline, ChromaOnlyMovesChromaTerms) {
  std::mt19937_64 rng(37);
  const auto img = oracle::blotchy_image(rng, 256, 192, ColorSpace::rgb);
  auto ci = decode_image(img);
  const auto before = extract_features(ci, FeatureKind::color);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (int k = 1; k < 3; ++k)
    for (auto& b : ci.grids[k].blocks)
      for (auto& v : b.coefficients) v += d(rng);
  const auto after = extract_features(ci, FeatureKind::color);
  for (std::size_t i = 0; i < 18; ++i) {
    if (i == 1 || i == 2) {
      EXPECT_NE(before[i], after[i]);
    } else {
      EXPECT_EQ(before[i], after[i]) << i;
    }
  }
}

TEST(FeaturePipeline, JpegWithUnitTablesTracksPixelPath) {
  std::mt19937_64 rng(38);
  for (bool color : {false, true}) {
    const auto img = oracle::blotchy_image(rng, 320, 240, color ? ColorSpace::rgb : ColorSpace::gray);
    const auto from_jpeg = decode_image(refjpeg::encode_jpeg(img));
    const auto from_pixels = decode_image(img);
    const auto kind = color ? FeatureKind::color : FeatureKind::gray;
    const auto a = extract_features(from_jpeg, kind);
    const auto b = extract_features(from_pixels, kind);
    // Only rounding of the integer DCT in the encoder separates the two.
    EXPECT_NEAR(a[0], b[0], 1.0);
  }
}

TEST(ResolveKind, AutomaticAndMismatch) {
  const auto gray = decode_image(constant_image(64, 64, ColorSpace::gray, 1));
  const auto color = decode_image(constant_image(64, 64, ColorSpace::rgb, 1));
  EXPECT_EQ(resolve_kind(ExtractMode::automatic, gray), FeatureKind::gray);
  EXPECT_EQ(resolve_kind(ExtractMode::automatic, color), FeatureKind::color);
  EXPECT_EQ(resolve_kind(ExtractMode::gray, color), FeatureKind::gray);
  EXPECT_EQ(resolve_kind(ExtractMode::mandala, color), FeatureKind::mandala);
  try {
    resolve_kind(ExtractMode::color, gray);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kind_mismatch);
  }
}

TEST(DecodeImage, SniffsFormat) {
  const auto img = constant_image(64, 64, ColorSpace::gray, 9);
  EXPECT_EQ(decode_image(encode_pnm(img)).grids.size(), 1u);
  EXPECT_EQ(decode_image(refjpeg::encode_jpeg(img)).grids.size(), 1u);
  const std::vector<std::uint8_t> junk = {'G', 'I', 'F', '8', '9', 'a', 0, 0};
  try {
    decode_image(junk);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unsupported_format);
  }
}

TEST(Pipeline, TooSmallForMiniatureIsReported) {
  // 40x40 pixels is only 5x5 blocks.
  try {
    features_of(constant_image(40, 40, ColorSpace::gray, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::image_too_small);
  }
}

TEST(Pipeline, SubsampledChromaTooSmallNamesTheComponent) {
  std::mt19937_64 rng(39);
  refjpeg::EncodeOptions opts;
  opts.luma_h = opts.luma_v = 2;
  const auto ci = decode_image(refjpeg::encode_jpeg(oracle::blotchy_image(rng, 100, 100, ColorSpace::rgb), opts));
  EXPECT_NO_THROW(extract_features(ci, FeatureKind::gray));
  try {
    extract_features(ci, FeatureKind::color);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::image_too_small);
    EXPECT_NE(std::string(e.what()).find("component 2 (50x50 px)"), std::string::npos) << e.what();
  }
}
