#include "mcbir/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "mcbir/error.hpp"

namespace mcbir {

PixelImage PixelImage::make(int width, int height, ColorSpace space) {
  PixelImage img;
  img.width = width;
  img.height = height;
  img.space = space;
  img.samples.assign(
      static_cast<std::size_t>(width) * height * img.components(), 0);
  return img;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number(const char* field) {
    skip_space_and_comments();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) {
        throw Error(Errc::malformed_header,
                    std::string("PNM ") + field + " out of range");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw Error(Errc::malformed_header,
                  std::string("PNM header: expected ") + field);
    }
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  bool at_space() const {
    return pos_ < bytes_.size() && std::isspace(bytes_[pos_]);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

PixelImage load_pixel_image(std::span<const std::uint8_t> file_bytes) {
  if (file_bytes.size() < 2 || file_bytes[0] != 'P') {
    throw Error(Errc::malformed_header, "not a PNM file");
  }
  ColorSpace space;
  if (file_bytes[1] == '5') {
    space = ColorSpace::gray;
  } else if (file_bytes[1] == '6') {
    space = ColorSpace::rgb;
  } else {
    throw Error(Errc::unsupported_format,
                std::string("unsupported PNM variant P") +
                    static_cast<char>(file_bytes[1]));
  }

  HeaderReader reader(file_bytes.subspan(2));
  const long width = reader.number("width");
  const long height = reader.number("height");
  const long maxval = reader.number("maxval");
  if (!reader.at_space()) {
    throw Error(Errc::malformed_header, "PNM header: missing separator");
  }
  reader.advance();
  if (maxval != 255) {
    throw Error(Errc::unsupported_maxval,
                "PNM maxval " + std::to_string(maxval) + " (only 255 supported)");
  }
  if (width < 8 || height < 8) {
    throw Error(Errc::image_too_small, "image must be at least 8x8, got " +
                                           std::to_string(width) + "x" +
                                           std::to_string(height));
  }

  auto img = PixelImage::make(static_cast<int>(width), static_cast<int>(height),
                              space);
  const std::size_t offset = 2 + reader.pos();
  const std::size_t available = file_bytes.size() - offset;
  if (available < img.samples.size()) {
    throw Error(Errc::truncated_payload,
                "PNM payload has " + std::to_string(available) +
                    " bytes, expected " + std::to_string(img.samples.size()));
  }
  std::copy_n(file_bytes.begin() + static_cast<std::ptrdiff_t>(offset),
              img.samples.size(), img.samples.begin());
  return img;
}

std::vector<std::uint8_t> encode_pnm(const PixelImage& image) {
  const std::string header = std::string(image.components() == 1 ? "P5" : "P6") +
                             "\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.samples.begin(), image.samples.end());
  return out;
}

std::vector<RealImage> level_shift(const PixelImage& image) {
  const int nc = image.components();
  std::vector<RealImage> planes(nc, RealImage(image.width, image.height));
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < nc; ++c) {
      planes[c].values[i] = static_cast<double>(image.samples[i * nc + c]) - 128.0;
    }
  }
  return planes;
}

namespace {
// BT.601 weights in millionths, so halves are exact and always round up.
std::uint8_t round_clamp_micro(std::int64_t v) {
  const std::int64_t q = (v + 500000) / 1000000;  // v stays positive below
  return static_cast<std::uint8_t>(std::clamp<std::int64_t>(q, 0, 255));
}
}  // namespace

PixelImage rgb_to_ycbcr(const PixelImage& image) {
  if (image.space != ColorSpace::rgb) {
    throw Error(Errc::invalid_argument,
                "rgb_to_ycbcr needs an RGB image; use the gray pipeline");
  }
  auto out = PixelImage::make(image.width, image.height, ColorSpace::ycbcr);
  for (std::size_t i = 0; i < image.samples.size(); i += 3) {
    const std::int64_t r = image.samples[i];
    const std::int64_t g = image.samples[i + 1];
    const std::int64_t b = image.samples[i + 2];
    out.samples[i] = round_clamp_micro(299000 * r + 587000 * g + 114000 * b);
    out.samples[i + 1] = round_clamp_micro(128000000 - 168736 * r - 331264 * g + 500000 * b);
    out.samples[i + 2] = round_clamp_micro(128000000 + 500000 * r - 418688 * g - 81312 * b);
  }
  return out;
}

PixelImage extract_component(const PixelImage& image, int component) {
  if (component < 0 || component >= image.components()) {
    throw Error(Errc::invalid_argument, "component index out of range");
  }
  auto out = PixelImage::make(image.width, image.height, ColorSpace::gray);
  const int nc = image.components();
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = image.samples[i * nc + component];
  }
  return out;
}

PixelImage crop(const PixelImage& image, int x, int y, int width, int height) {
  if (x < 0 || y < 0 || width <= 0 || height <= 0 || x + width > image.width ||
      y + height > image.height) {
    throw Error(Errc::invalid_argument, "crop rectangle outside the image");
  }
  auto out = PixelImage::make(width, height, image.space);
  const std::size_t row = static_cast<std::size_t>(width) * image.components();
  for (int r = 0; r < height; ++r) {
    const auto src = image.samples.begin() +
                     static_cast<std::ptrdiff_t>(
                         (static_cast<std::size_t>(y + r) * image.width + x) *
                         image.components());
    std::copy_n(src, row,
                out.samples.begin() + static_cast<std::ptrdiff_t>(r * row));
  }
  return out;
}

RealImage pad_replicate(const RealImage& image, int width, int height) {
  if (width < image.width || height < image.height || image.values.empty()) {
    throw Error(Errc::invalid_argument, "pad target smaller than image");
  }
  RealImage out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(y, image.height - 1);
    for (int x = 0; x < width; ++x) {
      out(x, y) = image(std::min(x, image.width - 1), sy);
    }
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(Errc::io, "write failed for " + path.string());
  }
}

}  // namespace mcbir
