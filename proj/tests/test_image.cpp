#include <gtest/gtest.h>

#include <string>

#include "mcbir/error.hpp"
#include "mcbir/image.hpp"

using namespace mcbir;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header, std::size_t payload, std::uint8_t v) {
  std::vector<std::uint8_t> b(header.begin(), header.end());
  b.insert(b.end(), payload, v);
  return b;
}

Errc code_of(const std::vector<std::uint8_t>& b) {
  try {
    load_pixel_image(b);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::io;
}

}  // namespace

TEST(LoadPixelImage, ConstantGrayP5) {
  const auto img = load_pixel_image(bytes_of("P5 8 8 255\n", 64, 100));
  EXPECT_EQ(img.width, 8);
  EXPECT_EQ(img.height, 8);
  EXPECT_EQ(img.components(), 1);
  for (auto s : img.samples) EXPECT_EQ(s, 100);
}

TEST(LoadPixelImage, RgbP6) {
  const auto img = load_pixel_image(bytes_of("P6 8 8 255\n", 192, 7));
  EXPECT_EQ(img.space, ColorSpace::rgb);
  EXPECT_EQ(img.samples.size(), 192u);
}

TEST(LoadPixelImage, HeaderCommentsAndNewlines) {
  const auto img = load_pixel_image(bytes_of("P5\n# made by hand\n9\n# h\n10\n255\n", 90, 3));
  EXPECT_EQ(img.width, 9);
  EXPECT_EQ(img.height, 10);
}

TEST(LoadPixelImage, DistinctErrors) {
  EXPECT_EQ(code_of(bytes_of("P5 8 8 255\n", 63, 0)), Errc::truncated_payload);
  EXPECT_EQ(code_of(bytes_of("P5 8 8 65535\n", 128, 0)), Errc::unsupported_maxval);
  EXPECT_EQ(code_of(bytes_of("P5 8 x 255\n", 64, 0)), Errc::malformed_header);
  EXPECT_EQ(code_of(bytes_of("Q5 8 8 255\n", 64, 0)), Errc::malformed_header);
  EXPECT_EQ(code_of(bytes_of("P2 8 8 255\n", 64, 0)), Errc::unsupported_format);
  EXPECT_EQ(code_of(bytes_of("P5 8 8 255", 0, 0)), Errc::malformed_header);
  EXPECT_EQ(code_of(bytes_of("P5 4 8 255\n", 32, 0)), Errc::image_too_small);
}

TEST(LoadPixelImage, EncodeRoundTrip) {
  auto img = PixelImage::make(11, 9, ColorSpace::rgb);
  for (std::size_t i = 0; i < img.samples.size(); ++i) img.samples[i] = static_cast<std::uint8_t>(i * 7);
  EXPECT_EQ(load_pixel_image(encode_pnm(img)), img);
}

TEST(LevelShift, Endpoints) {
  auto img = PixelImage::make(8, 8, ColorSpace::gray);
  img.samples[0] = 128;
  img.samples[1] = 0;
  img.samples[2] = 255;
  const auto planes = level_shift(img);
  ASSERT_EQ(planes.size(), 1u);
  EXPECT_EQ(planes[0].values[0], 0.0);
  EXPECT_EQ(planes[0].values[1], -128.0);
  EXPECT_EQ(planes[0].values[2], 127.0);
}

TEST(RgbToYcbcr, ReferenceColors) {
  auto img = PixelImage::make(8, 8, ColorSpace::rgb);
  auto set = [&](int i, int r, int g, int b) {
    img.samples[i * 3] = static_cast<std::uint8_t>(r);
    img.samples[i * 3 + 1] = static_cast<std::uint8_t>(g);
    img.samples[i * 3 + 2] = static_cast<std::uint8_t>(b);
  };
  set(0, 255, 255, 255);
  set(1, 0, 0, 0);
  set(2, 255, 0, 0);
  const auto ycc = rgb_to_ycbcr(img);
  EXPECT_EQ(ycc.space, ColorSpace::ycbcr);
  EXPECT_EQ(ycc.at(0, 0, 0), 255);
  EXPECT_EQ(ycc.at(0, 0, 1), 128);
  EXPECT_EQ(ycc.at(0, 0, 2), 128);
  EXPECT_EQ(ycc.at(1, 0, 0), 0);
  EXPECT_EQ(ycc.at(1, 0, 1), 128);
  EXPECT_EQ(ycc.at(1, 0, 2), 128);
  // 0.299*255 = 76.245; 128 - 0.168736*255 = 84.97; 128 + 127.5 clamps.
  EXPECT_EQ(ycc.at(2, 0, 0), 76);
  EXPECT_EQ(ycc.at(2, 0, 1), 85);
  EXPECT_EQ(ycc.at(2, 0, 2), 255);
}

TEST(RgbToYcbcr, RejectsGray) {
  const auto img = PixelImage::make(8, 8, ColorSpace::gray);
  EXPECT_THROW(rgb_to_ycbcr(img), Error);
}

TEST(Crop, CopiesWindowAndChecksBounds) {
  auto img = PixelImage::make(10, 10, ColorSpace::gray);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) img.at(x, y) = static_cast<std::uint8_t>(10 * y + x);
  const auto c = crop(img, 2, 3, 8, 7);
  EXPECT_EQ(c.at(0, 0), 32);
  EXPECT_EQ(c.at(7, 6), 99);
  EXPECT_THROW(crop(img, 3, 3, 8, 8), Error);
}

TEST(PadReplicate, RepeatsLastRowAndColumn) {
  RealImage m(2, 2);
  m(0, 0) = 1;
  m(1, 0) = 2;
  m(0, 1) = 3;
  m(1, 1) = 4;
  const auto p = pad_replicate(m, 4, 3);
  EXPECT_EQ(p(3, 0), 2);
  EXPECT_EQ(p(0, 2), 3);
  EXPECT_EQ(p(3, 2), 4);
}
