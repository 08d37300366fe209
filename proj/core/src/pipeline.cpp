#include "mcbir/pipeline.hpp"

#include <string>

#include "mcbir/error.hpp"
#include "mcbir/eval.hpp"
#include "mcbir/jpeg.hpp"

namespace mcbir {

CoefficientImage decode_image(std::span<const std::uint8_t> file_bytes) {
  if (looks_like_jpeg(file_bytes)) {
    auto jpeg = decode_jpeg_coefficients(file_bytes);
    if (jpeg.width < 8 || jpeg.height < 8) {
      throw Error(Errc::image_too_small, "image must be at least 8x8");
    }
    return {jpeg.width, jpeg.height, std::move(jpeg.components)};
  }
  if (file_bytes.size() >= 2 && file_bytes[0] == 'P') {
    return decode_image(load_pixel_image(file_bytes));
  }
  throw Error(Errc::unsupported_format, "not a JPEG, PGM or PPM file");
}

CoefficientImage decode_image(const PixelImage& image) {
  if (image.width < 8 || image.height < 8) {
    throw Error(Errc::image_too_small, "image must be at least 8x8");
  }
  return {image.width, image.height, pixel_coefficient_grids(image)};
}

CoefficientImage decode_image_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return decode_image(bytes);
}

FeatureKind resolve_kind(ExtractMode mode, const CoefficientImage& image) {
  switch (mode) {
    case ExtractMode::gray: return FeatureKind::gray;
    case ExtractMode::mandala: return FeatureKind::mandala;
    case ExtractMode::automatic:
      return image.is_color() ? FeatureKind::color : FeatureKind::gray;
    case ExtractMode::color:
      if (!image.is_color()) {
        throw Error(Errc::kind_mismatch,
                    "color features requested for a single-component image");
      }
      return FeatureKind::color;
  }
  throw Error(Errc::invalid_argument, "unknown extraction mode");
}

Miniature component_miniature(const CoefficientGrid& grid, const DcObserver& observer) {
  try {
    return build_miniature(dc_image_from_grid(grid), observer);
  } catch (const Error& e) {
    // subsampled chroma is the usual culprit, so name the plane
    if (e.code() != Errc::image_too_small) throw;
    throw Error(e.code(), "component " + std::to_string(grid.component_id) + " (" +
                              std::to_string(grid.width) + "x" + std::to_string(grid.height) +
                              " px): " + e.what() + "; every plane needs at least 8x8 blocks");
  }
}

FeatureVector extract_features(const CoefficientImage& image, FeatureKind kind,
                               const ComponentDcObserver& observer) {
  if (image.grids.empty()) {
    throw Error(Errc::invalid_argument, "image has no components");
  }
  auto observe = [&](int c) -> DcObserver {
    if (!observer) return {};
    return [&observer, c](const DcImage& dc) { observer(c, dc); };
  };
  switch (kind) {
    case FeatureKind::gray:
      return extract_gray_features(
          dct_of_miniature(component_miniature(image.grids[0], observe(0))));
    case FeatureKind::color: {
      if (!image.is_color()) {
        throw Error(Errc::kind_mismatch,
                    "color features requested for a single-component image");
      }
      const auto y = dct_of_miniature(component_miniature(image.grids[0], observe(0)));
      const auto cb = dct_of_miniature(component_miniature(image.grids[1], observe(1)));
      const auto cr = dct_of_miniature(component_miniature(image.grids[2], observe(2)));
      return extract_color_features(y, cb, cr);
    }
    case FeatureKind::mandala:
      return mandala_baseline_features(image.grids[0]);
  }
  throw Error(Errc::invalid_argument, "unknown feature kind");
}

}  // namespace mcbir
