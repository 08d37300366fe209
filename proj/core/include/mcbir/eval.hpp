#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mcbir/dct.hpp"
#include "mcbir/features.hpp"
#include "mcbir/image.hpp"
#include "mcbir/index.hpp"

namespace mcbir {

// ---------------------------------------------------------------------------
// Corpus construction

struct TileOffset {
  int x = 0;
  int y = 0;
};

/// Offsets of a k x k grid of `tile`-sized windows spread evenly over a
/// `width` x `height` source: stride = (dim - tile) / (k - 1) per axis,
/// which must be an integer.
std::vector<TileOffset> tile_offsets(int width, int height, int tile, int k);

struct Tile {
  TileOffset offset;
  PixelImage image;
};

/// Row-major tiles (y outer, x inner).
std::vector<Tile> tile_overlapping(const PixelImage& image, int tile, int k);

/// Deterministic procedural texture for class `class_index` of
/// `class_count`: a tone level unique to the class, a grating drawn from one
/// of four families shared across classes, plus Gaussian noise.
PixelImage synthetic_texture(int class_index, int class_count, int size,
                             std::uint64_t seed);

// ---------------------------------------------------------------------------
// Scoring

struct RecallPrecision {
  double recall = 0.0;
  double precision = 0.0;
};

/// recall = |retrieved ∩ relevant| / |relevant|,
/// precision = |retrieved ∩ relevant| / total_retrieved.
RecallPrecision recall_precision(std::span<const std::string> retrieved,
                                 std::span<const std::string> relevant,
                                 std::size_t total_retrieved);

struct EvalQuery {
  std::string id;
  std::string label;
  FeatureVector feature;
};

struct EvalRow {
  std::string test_set;
  std::string algorithm;
  std::size_t queries = 0;
  double avg_relevant = 0.0;
  std::size_t zero_result_queries = 0;
  double recall_pct = 0.0;
  double precision_pct = 0.0;
};

/// Each query retrieves T = |class| records; relevant records are those
/// sharing its label.
EvalRow run_experiment(const FeatureDatabase& db, std::span<const EvalQuery> queries,
                       std::string test_set, std::string algorithm);

struct EvalReport {
  std::uint64_t seed = 0;
  std::vector<EvalRow> rows;
};

/// CSV header: test_set,algorithm,avg_relevant,zero_result_queries,recall_pct,precision_pct
void write_report_csv(const EvalReport& report, std::ostream& out);
void write_report_table(const EvalReport& report, std::ostream& out);

// ---------------------------------------------------------------------------
// Comparison baseline

/// Zigzag positions 1..9 of an 8x8 block: the first nine AC coefficients.
inline constexpr std::array<int, 9> kMandalaPositions = {1, 8, 16, 9, 2, 3, 10, 17, 24};

/// Population variance, across every block of the original image, of each of
/// the first nine AC coefficients. Padding blocks are excluded.
FeatureVector mandala_baseline_features(const CoefficientGrid& grid);

// ---------------------------------------------------------------------------

/// Uniform index in [0, n) from a seeded engine; the engine type is fixed so
/// runs are reproducible from the seed alone.
std::size_t pick_index(std::mt19937_64& rng, std::size_t n);

}  // namespace mcbir
