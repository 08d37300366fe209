#include "mcbir/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <unordered_set>

#include "mcbir/error.hpp"

namespace mcbir {

std::vector<TileOffset> tile_offsets(int width, int height, int tile, int k) {
  if (tile <= 0 || k <= 0) {
    throw Error(Errc::invalid_argument, "tile size and grid must be positive");
  }
  if (width < tile || height < tile) {
    throw Error(Errc::invalid_argument,
                "source " + std::to_string(width) + "x" + std::to_string(height) +
                    " is smaller than the tile size " + std::to_string(tile));
  }
  auto axis = [&](int dim) {
    std::vector<int> offsets;
    if (k == 1) {
      offsets.push_back(0);
      return offsets;
    }
    const int slack = dim - tile;
    if (slack % (k - 1) != 0) {
      throw Error(Errc::non_integer_stride,
                  "stride (" + std::to_string(dim) + " - " + std::to_string(tile) +
                      ") / " + std::to_string(k - 1) + " is not an integer");
    }
    const int stride = slack / (k - 1);
    for (int i = 0; i < k; ++i) offsets.push_back(i * stride);
    return offsets;
  };
  const auto xs = axis(width);
  const auto ys = axis(height);
  std::vector<TileOffset> out;
  out.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) out.push_back({x, y});
  }
  return out;
}

std::vector<Tile> tile_overlapping(const PixelImage& image, int tile, int k) {
  std::vector<Tile> tiles;
  for (const auto& off : tile_offsets(image.width, image.height, tile, k)) {
    tiles.push_back({off, crop(image, off.x, off.y, tile, tile)});
  }
  return tiles;
}

PixelImage synthetic_texture(int class_index, int class_count, int size,
                             std::uint64_t seed) {
  if (class_count < 1 || class_index < 0 || class_index >= class_count || size < 8) {
    throw Error(Errc::invalid_argument, "bad synthetic texture parameters");
  }
  struct Grating {
    double period;
    double angle_deg;
  };
  static constexpr Grating kFamilies[4] = {
      {16.0, 0.0}, {11.0, 90.0}, {8.0, 45.0}, {23.0, 30.0}};

  const double level =
      class_count == 1 ? 128.0 : 56.0 + 144.0 * class_index / (class_count - 1);
  const auto& g = kFamilies[class_index % 4];
  const double theta = g.angle_deg * std::numbers::pi / 180.0;
  const double fx = std::cos(theta) * 2.0 * std::numbers::pi / g.period;
  const double fy = std::sin(theta) * 2.0 * std::numbers::pi / g.period;

  std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(class_index)};
  std::mt19937_64 rng(sseq);
  std::normal_distribution<double> noise(0.0, 10.0);
  const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);

  auto img = PixelImage::make(size, size, ColorSpace::gray);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double v = level + 24.0 * std::sin(fx * x + fy * y + phase) + noise(rng);
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return img;
}

RecallPrecision recall_precision(std::span<const std::string> retrieved,
                                 std::span<const std::string> relevant,
                                 std::size_t total_retrieved) {
  if (relevant.empty()) {
    throw Error(Errc::empty_relevant_set, "relevant set is empty");
  }
  const std::unordered_set<std::string> rel(relevant.begin(), relevant.end());
  std::unordered_set<std::string> seen;
  std::size_t hits = 0;
  for (const auto& id : retrieved) {
    if (rel.count(id) != 0 && seen.insert(id).second) ++hits;
  }
  RecallPrecision rp;
  rp.recall = static_cast<double>(hits) / static_cast<double>(rel.size());
  rp.precision =
      total_retrieved == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total_retrieved);
  return rp;
}

EvalRow run_experiment(const FeatureDatabase& db, std::span<const EvalQuery> queries,
                       std::string test_set, std::string algorithm) {
  if (queries.empty()) throw Error(Errc::invalid_argument, "query set is empty");
  if (db.empty()) throw Error(Errc::empty_database, "database is empty");

  // label -> ids of the relevant records
  std::unordered_map<std::string, std::vector<std::string>> classes;
  for (const auto& r : db.records()) {
    if (r.class_label) classes[*r.class_label].push_back(r.image_id);
  }

  EvalRow row;
  row.test_set = std::move(test_set);
  row.algorithm = std::move(algorithm);
  row.queries = queries.size();
  double relevant_sum = 0.0;
  double recall_sum = 0.0;
  double precision_sum = 0.0;
  for (const auto& q : queries) {
    const auto it = classes.find(q.label);
    if (it == classes.end()) {
      throw Error(Errc::unknown_class,
                  "query '" + q.id + "' has class '" + q.label + "' absent from the database");
    }
    const auto& relevant = it->second;
    const auto result = db.search_top_t(q.feature, relevant.size());
    std::vector<std::string> retrieved;
    retrieved.reserve(result.hits.size());
    for (const auto& h : result.hits) retrieved.push_back(h.image_id);
    const auto rp = recall_precision(retrieved, relevant, retrieved.size());
    const double hits = rp.recall * static_cast<double>(relevant.size());
    relevant_sum += std::round(hits);
    if (std::round(hits) == 0.0) ++row.zero_result_queries;
    recall_sum += rp.recall;
    precision_sum += rp.precision;
  }
  const double n = static_cast<double>(queries.size());
  row.avg_relevant = relevant_sum / n;
  row.recall_pct = 100.0 * recall_sum / n;
  row.precision_pct = 100.0 * precision_sum / n;
  return row;
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
  out << "test_set,algorithm,avg_relevant,zero_result_queries,recall_pct,precision_pct\n";
  char buf[128];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.4f,%zu,%.4f,%.4f", r.avg_relevant,
                  r.zero_result_queries, r.recall_pct, r.precision_pct);
    out << r.test_set << ',' << r.algorithm << ',' << buf << '\n';
  }
}

void write_report_table(const EvalReport& report, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-28s %-10s %8s %12s %10s %10s\n", "Test set",
                "Algorithm", "Avg.rel", "Zero-result", "Recall%", "Precision%");
  out << buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%-28s %-10s %8.2f %12zu %10.2f %10.2f\n",
                  r.test_set.c_str(), r.algorithm.c_str(), r.avg_relevant,
                  r.zero_result_queries, r.recall_pct, r.precision_pct);
    out << buf;
  }
  out << "seed: " << report.seed << '\n';
}

FeatureVector mandala_baseline_features(const CoefficientGrid& grid) {
  const int bw = std::min(grid.valid_blocks_wide(), grid.blocks_wide);
  const int bh = std::min(grid.valid_blocks_high(), grid.blocks_high);
  const long n = static_cast<long>(bw) * bh;
  if (n < 2) {
    throw Error(Errc::invalid_argument, "mandala features need at least two blocks");
  }
  FeatureVector f{FeatureKind::mandala, std::vector<double>(9, 0.0)};
  for (std::size_t k = 0; k < kMandalaPositions.size(); ++k) {
    const int pos = kMandalaPositions[k];
    double sum = 0.0;
    for (int by = 0; by < bh; ++by) {
      for (int bx = 0; bx < bw; ++bx) sum += grid.block(bx, by).coefficients[pos];
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (int by = 0; by < bh; ++by) {
      for (int bx = 0; bx < bw; ++bx) {
        const double d = grid.block(bx, by).coefficients[pos] - mean;
        ss += d * d;
      }
    }
    f.values[k] = ss / static_cast<double>(n);
  }
  return f;
}

std::size_t pick_index(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) throw Error(Errc::invalid_argument, "cannot pick from an empty range");
  return static_cast<std::size_t>(rng() % n);
}

}  // namespace mcbir
