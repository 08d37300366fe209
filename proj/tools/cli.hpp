#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcbir/pipeline.hpp"

namespace mcbir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// One manifest line: `path,id,label`. Relative paths resolve against the
/// manifest's directory.
struct ManifestRow {
  std::filesystem::path path;
  std::string id;
  std::string label;
};

std::vector<ManifestRow> read_manifest(const std::filesystem::path& file);
/// Paths under `file`'s directory are written relative to it.
void write_manifest(const std::filesystem::path& file, std::span<const ManifestRow> rows);

struct CorpusOptions {
  std::optional<std::filesystem::path> input_dir;
  int synthetic_classes = 0;
  int source_size = 640;
  int tile = 512;
  int grid = 5;
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
};

struct IndexOptions {
  std::filesystem::path manifest;
  std::filesystem::path db;
  ExtractMode mode = ExtractMode::automatic;
  std::optional<std::filesystem::path> dump_dc;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct QueryOptions {
  std::filesystem::path db;
  std::filesystem::path image;
  std::size_t top = 10;
  bool csv = false;
};

struct EvalOptions {
  std::filesystem::path db;
  std::filesystem::path queries;
  std::string algorithm = "proposed";
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> out;
  std::size_t per_class = 0;  // 0 = use every query row
  std::string test_set;
  bool append = false;
};

struct FeaturesOptions {
  std::filesystem::path image;
  ExtractMode mode = ExtractMode::automatic;
};

int cmd_corpus(const CorpusOptions& opts, std::ostream& out, std::ostream& err);
int cmd_index(const IndexOptions& opts, std::ostream& out, std::ostream& err);
int cmd_query(const QueryOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_features(const FeaturesOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; library errors become kExitDataError,
/// malformed command lines kExitUsage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcbir::cli
