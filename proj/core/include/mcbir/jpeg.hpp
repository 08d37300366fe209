#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcbir/dct.hpp"

namespace mcbir {

/// Dequantized DCT coefficients of a baseline JPEG, one grid per frame
/// component in frame order (Y, Cb, Cr for JFIF color files).
struct JpegCoefficients {
  int width = 0;
  int height = 0;
  int restart_interval = 0;
  std::vector<CoefficientGrid> components;

  int component_count() const { return static_cast<int>(components.size()); }
};

bool looks_like_jpeg(std::span<const std::uint8_t> bytes) noexcept;

/// Entropy-decodes a baseline sequential Huffman JPEG down to dequantized
/// coefficients. No inverse DCT and no chroma upsampling take place; chroma
/// grids stay at their native subsampled resolution.
///
/// Supports 8-bit, 1 or 3 components, any sampling factors 1..4, interleaved
/// and non-interleaved scans, and restart intervals. Progressive, lossless,
/// hierarchical and arithmetic-coded files are rejected with
/// Errc::unsupported_mode; corrupt entropy data raises Errc::jpeg_decode with
/// the byte offset where decoding failed.
JpegCoefficients decode_jpeg_coefficients(std::span<const std::uint8_t> bytes);

}  // namespace mcbir
