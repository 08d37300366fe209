#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "mcbir/dct.hpp"
#include "mcbir/features.hpp"
#include "mcbir/image.hpp"
#include "mcbir/miniature.hpp"

namespace mcbir {

/// An image reduced to the coefficient domain, whichever way it arrived.
/// Color sources carry Y, Cb, Cr grids in that order.
struct CoefficientImage {
  int width = 0;
  int height = 0;
  std::vector<CoefficientGrid> grids;

  bool is_color() const { return grids.size() == 3; }
};

/// JPEG goes through the entropy decoder; PGM/PPM through the pixel path.
CoefficientImage decode_image(std::span<const std::uint8_t> file_bytes);
CoefficientImage decode_image(const PixelImage& image);
CoefficientImage decode_image_file(const std::filesystem::path& path);

enum class ExtractMode { gray, color, automatic, mandala };

/// `automatic` picks color for three-component sources and gray otherwise.
/// Asking for color from a gray source is a kind mismatch.
FeatureKind resolve_kind(ExtractMode mode, const CoefficientImage& image);

using ComponentDcObserver = std::function<void(int component, const DcImage&)>;

Miniature component_miniature(const CoefficientGrid& grid,
                              const DcObserver& observer = {});

/// Full chain: DC image -> miniature -> DCT -> feature vector. Gray features
/// of a color source use the luma component.
FeatureVector extract_features(const CoefficientImage& image, FeatureKind kind,
                               const ComponentDcObserver& observer = {});

}  // namespace mcbir
