#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcbir/features.hpp"

namespace mcbir {

struct IndexRecord {
  std::string image_id;
  std::optional<std::string> class_label;
  FeatureVector feature;

  bool operator==(const IndexRecord&) const = default;
};

struct SearchHit {
  std::size_t record = 0;  // position in the database
  std::string image_id;
  std::optional<std::string> class_label;
  double distance = 0.0;
};

/// Ranked nearest records, distances non-decreasing.
struct QueryResult {
  std::vector<SearchHit> hits;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(const FeatureVector& a, const FeatureVector& b);

/// In-memory feature database. Records keep insertion order, which is also
/// the tie-break order for equal distances.
class FeatureDatabase {
 public:
  explicit FeatureDatabase(FeatureKind kind = FeatureKind::gray) : kind_(kind) {}

  FeatureKind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_of(kind_); }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<IndexRecord>& records() const { return records_; }
  const IndexRecord& operator[](std::size_t i) const { return records_[i]; }
  bool contains(const std::string& image_id) const { return ids_.count(image_id) != 0; }

  /// Throws on empty or duplicate id and on kind/dimension mismatch; the
  /// database is left untouched on failure.
  void insert(IndexRecord record);

  /// Exhaustive scan for the `top` nearest records.
  QueryResult search_top_t(const FeatureVector& query, std::size_t top) const;

  /// Number of records carrying `label`.
  std::size_t class_size(const std::string& label) const;

  bool operator==(const FeatureDatabase& other) const {
    return kind_ == other.kind_ && records_ == other.records_;
  }

 private:
  FeatureKind kind_;
  std::vector<IndexRecord> records_;
  std::unordered_map<std::string, std::size_t> ids_;
};

/// Little-endian file layout:
///   "MCBR" | u16 version (1) | u8 kind | u16 dimension | u64 count
///   per record: u16 id length, id bytes, u16 label length (0 = none),
///   label bytes, dimension x f64.
inline constexpr std::uint16_t kDatabaseVersion = 1;

void save_database(const FeatureDatabase& db, std::ostream& out);
void save_database(const FeatureDatabase& db, const std::filesystem::path& path);
FeatureDatabase load_database(std::istream& in);
FeatureDatabase load_database(const std::filesystem::path& path);

}  // namespace mcbir
