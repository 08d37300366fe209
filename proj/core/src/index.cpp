#include "mcbir/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "mcbir/error.hpp"

namespace mcbir {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::dimension_mismatch,
                "cannot compare vectors of dimension " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double euclidean_distance(const FeatureVector& a, const FeatureVector& b) {
  return euclidean_distance(std::span<const double>(a.values),
                            std::span<const double>(b.values));
}

void FeatureDatabase::insert(IndexRecord record) {
  if (record.image_id.empty()) {
    throw Error(Errc::invalid_argument, "image id must not be empty");
  }
  if (record.image_id.size() > 0xFFFF ||
      (record.class_label && record.class_label->size() > 0xFFFF)) {
    throw Error(Errc::invalid_argument, "image id or label longer than 65535 bytes");
  }
  if (record.feature.kind != kind_) {
    throw Error(Errc::kind_mismatch,
                std::string("cannot insert ") + std::string(to_string(record.feature.kind)) +
                    " features into a " + std::string(to_string(kind_)) + " database");
  }
  if (record.feature.size() != dimension()) {
    throw Error(Errc::dimension_mismatch,
                "feature has dimension " + std::to_string(record.feature.size()) +
                    ", database expects " + std::to_string(dimension()));
  }
  if (ids_.count(record.image_id) != 0) {
    throw Error(Errc::duplicate_id, "duplicate image id '" + record.image_id + "'");
  }
  if (record.class_label && record.class_label->empty()) record.class_label.reset();
  ids_.emplace(record.image_id, records_.size());
  records_.push_back(std::move(record));
}

QueryResult FeatureDatabase::search_top_t(const FeatureVector& query,
                                          std::size_t top) const {
  if (records_.empty()) throw Error(Errc::empty_database, "database is empty");
  if (top == 0) throw Error(Errc::invalid_argument, "T must be at least 1");
  if (query.kind != kind_) {
    throw Error(Errc::kind_mismatch,
                std::string(to_string(query.kind)) + " query against a " +
                    std::string(to_string(kind_)) + " database");
  }
  if (query.size() != dimension()) {
    throw Error(Errc::dimension_mismatch, "query dimension does not match database");
  }

  std::vector<double> dist(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    dist[i] = euclidean_distance(query, records_[i].feature);
  }
  std::vector<std::size_t> order(records_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t n = std::min(top, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                    });

  QueryResult result;
  result.hits.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = order[k];
    result.hits.push_back({i, records_[i].image_id, records_[i].class_label, dist[i]});
  }
  return result;
}

std::size_t FeatureDatabase::class_size(const std::string& label) const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(),
                    [&](const IndexRecord& r) { return r.class_label == label; }));
}

namespace {

constexpr char kMagic[4] = {'M', 'C', 'B', 'R'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void le(T value) {
    std::uint8_t buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf[i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i));
    }
    out_.write(reinterpret_cast<const char*>(buf), sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
  void text(const std::string& s) {
    le<std::uint16_t>(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* p, std::size_t n) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(Errc::truncated_file, "database file is truncated",
                  consumed_ + static_cast<std::size_t>(in_.gcount()));
    }
    consumed_ += n;
  }
  template <typename T>
  T le() {
    std::uint8_t buf[sizeof(T)];
    bytes(reinterpret_cast<char*>(buf), sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return static_cast<T>(v);
  }
  std::string text() {
    const auto n = le<std::uint16_t>();
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  std::size_t consumed() const { return consumed_; }

 private:
  std::istream& in_;
  std::size_t consumed_ = 0;
};

}  // namespace

void save_database(const FeatureDatabase& db, std::ostream& out) {
  Writer w(out);
  w.bytes(kMagic, 4);
  w.le<std::uint16_t>(kDatabaseVersion);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(db.kind()));
  w.le<std::uint16_t>(static_cast<std::uint16_t>(db.dimension()));
  w.le<std::uint64_t>(db.size());
  for (const auto& r : db.records()) {
    w.text(r.image_id);
    w.text(r.class_label.value_or(std::string{}));
    for (double v : r.feature.values) w.le<std::uint64_t>(std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw Error(Errc::io, "failed writing database");
}

void save_database(const FeatureDatabase& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  save_database(db, out);
}

FeatureDatabase load_database(std::istream& in) {
  Reader r(in);
  char magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) {
    throw Error(Errc::bad_magic, "not a feature database (bad magic)");
  }
  const auto version = r.le<std::uint16_t>();
  if (version != kDatabaseVersion) {
    throw Error(Errc::version_mismatch,
                "unsupported database version " + std::to_string(version));
  }
  const auto kind_byte = r.le<std::uint8_t>();
  if (kind_byte > static_cast<std::uint8_t>(FeatureKind::mandala)) {
    throw Error(Errc::malformed_database, "unknown feature kind " + std::to_string(kind_byte));
  }
  const auto kind = static_cast<FeatureKind>(kind_byte);
  const auto dimension = r.le<std::uint16_t>();
  if (dimension != dimension_of(kind)) {
    throw Error(Errc::malformed_database,
                "dimension " + std::to_string(dimension) + " does not match kind");
  }
  const auto count = r.le<std::uint64_t>();

  FeatureDatabase db(kind);
  for (std::uint64_t i = 0; i < count; ++i) {
    IndexRecord rec;
    rec.image_id = r.text();
    auto label = r.text();
    if (!label.empty()) rec.class_label = std::move(label);
    rec.feature.kind = kind;
    rec.feature.values.resize(dimension);
    for (auto& v : rec.feature.values) v = std::bit_cast<double>(r.le<std::uint64_t>());
    try {
      db.insert(std::move(rec));
    } catch (const Error& e) {
      throw Error(Errc::malformed_database, std::string("invalid record: ") + e.what(),
                  r.consumed());
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(Errc::malformed_database, "trailing bytes after the last record", r.consumed());
  }
  return db;
}

FeatureDatabase load_database(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  return load_database(in);
}

}  // namespace mcbir
