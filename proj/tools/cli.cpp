#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "mcbir/error.hpp"
#include "mcbir/eval.hpp"
#include "mcbir/index.hpp"

namespace mcbir::cli {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// manifest I/O

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<ManifestRow> read_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::io, "cannot open manifest " + file.string());
  const fs::path base = file.parent_path();
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (line_no == 1 && fields.size() >= 2 && fields[0] == "path" && fields[1] == "id") {
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty()) {
      throw Error(Errc::invalid_argument, file.string() + ":" + std::to_string(line_no) +
                                              ": expected path,id,label");
    }
    fs::path p = fields[0];
    if (p.is_relative()) p = base / p;
    rows.push_back({p, fields[1], fields.size() == 3 ? fields[2] : std::string{}});
  }
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!seen.emplace(rows[i].id, i).second) {
      throw Error(Errc::duplicate_id, file.string() + ": duplicate id '" + rows[i].id + "'");
    }
  }
  return rows;
}

void write_manifest(const fs::path& file, std::span<const ManifestRow> rows) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write manifest " + file.string());
  const fs::path base = fs::absolute(file).parent_path();
  out << "path,id,label\n";
  for (const auto& r : rows) {
    fs::path p = fs::absolute(r.path);
    const auto rel = p.lexically_relative(base);
    if (!rel.empty() && *rel.begin() != "..") p = rel;
    out << csv_field(p.generic_string()) << ',' << csv_field(r.id) << ','
        << csv_field(r.label) << '\n';
  }
}

// ---------------------------------------------------------------------------
// corpus

namespace {

struct Source {
  std::string id;
  fs::path path;
  PixelImage image;
};

std::vector<Source> collect_sources(const CorpusOptions& opts, std::ostream& out) {
  std::vector<Source> sources;
  if (opts.input_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(*opts.input_dir)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
      if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        sources.push_back({f.stem().string(), f, load_pixel_image(read_file(f))});
      } catch (const Error& e) {
        throw Error(e.code(), f.string() + ": " + e.what());
      }
    }
  } else {
    const fs::path dir = opts.out_dir / "originals";
    fs::create_directories(dir);
    for (int k = 0; k < opts.synthetic_classes; ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "class%02d", k);
      Source s{name, dir / (std::string(name) + ".pgm"),
               synthetic_texture(k, opts.synthetic_classes, opts.source_size, opts.seed)};
      write_file(s.path, encode_pnm(s.image));
      sources.push_back(std::move(s));
    }
    out << "generated " << sources.size() << " synthetic sources in " << dir.string() << '\n';
  }
  return sources;
}

}  // namespace

int cmd_corpus(const CorpusOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.input_dir.has_value() == (opts.synthetic_classes > 0)) {
    err << "error: give exactly one of --input or --synthetic\n";
    return kExitUsage;
  }
  fs::create_directories(opts.out_dir);
  const auto sources = collect_sources(opts, out);
  if (sources.empty()) {
    err << "warning: no PGM/PPM sources found\n";
  }

  std::mt19937_64 rng(opts.seed);
  std::vector<ManifestRow> tiles;
  std::vector<ManifestRow> originals;
  std::vector<ManifestRow> random_queries;
  for (const auto& src : sources) {
    std::vector<Tile> cut;
    try {
      cut = tile_overlapping(src.image, opts.tile, opts.grid);
    } catch (const Error& e) {
      throw Error(e.code(), src.path.string() + ": " + e.what());
    }
    const std::string ext = src.image.components() == 1 ? ".pgm" : ".ppm";
    std::vector<ManifestRow> mine;
    for (std::size_t i = 0; i < cut.size(); ++i) {
      const int r = static_cast<int>(i) / opts.grid;
      const int c = static_cast<int>(i) % opts.grid;
      const std::string id = src.id + "_r" + std::to_string(r) + "c" + std::to_string(c);
      const fs::path p = opts.out_dir / (id + ext);
      write_file(p, encode_pnm(cut[i].image));
      mine.push_back({p, id, src.id});
    }
    random_queries.push_back(mine[pick_index(rng, mine.size())]);
    tiles.insert(tiles.end(), mine.begin(), mine.end());
    originals.push_back({src.path, src.id, src.id});
  }
  write_manifest(opts.out_dir / "manifest.csv", tiles);
  write_manifest(opts.out_dir / "originals.csv", originals);
  write_manifest(opts.out_dir / "queries_random.csv", random_queries);
  out << "wrote " << tiles.size() << " tiles from " << sources.size() << " sources to "
      << opts.out_dir.string() << " (seed " << opts.seed << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// index

namespace {

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
}

struct Extracted {
  std::optional<FeatureVector> feature;
  std::string error;
};

}  // namespace

int cmd_index(const IndexOptions& opts, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const auto rows = read_manifest(opts.manifest);
  if (opts.dump_dc) fs::create_directories(*opts.dump_dc);

  std::vector<Extracted> results(rows.size());
  parallel_for(rows.size(), opts.threads, [&](std::size_t i) {
    try {
      const auto image = decode_image_file(rows[i].path);
      ComponentDcObserver dump;
      if (opts.dump_dc) {
        dump = [&](int component, const DcImage& dc) {
          const auto name = rows[i].id + "_c" + std::to_string(component) + "_" +
                            std::to_string(dc.width) + "x" + std::to_string(dc.height) + ".pgm";
          write_file(*opts.dump_dc / name, encode_pnm(dc_image_to_gray(dc)));
        };
      }
      results[i].feature = extract_features(image, resolve_kind(opts.mode, image), dump);
    } catch (const std::exception& e) {
      results[i].error = e.what();
    }
  });

  FeatureKind kind = opts.mode == ExtractMode::color     ? FeatureKind::color
                     : opts.mode == ExtractMode::mandala ? FeatureKind::mandala
                                                         : FeatureKind::gray;
  if (opts.mode == ExtractMode::automatic) {
    for (const auto& r : results) {
      if (r.feature) {
        kind = r.feature->kind;
        break;
      }
    }
  }
  FeatureDatabase db(kind);
  std::size_t failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (results[i].feature) {
      try {
        db.insert({rows[i].id,
                   rows[i].label.empty() ? std::nullopt : std::optional(rows[i].label),
                   std::move(*results[i].feature)});
        continue;
      } catch (const Error& e) {
        results[i].error = e.what();
      }
    }
    ++failures;
    err << "error: " << rows[i].path.string() << ": " << results[i].error << '\n';
  }
  if (failures > 0) {
    err << "error: " << failures << " of " << rows.size()
        << " images failed; database not written\n";
    return kExitDataError;
  }
  if (rows.empty()) err << "warning: manifest is empty; writing an empty database\n";
  save_database(db, opts.db);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "indexed %zu images (%s, %zu-D) in %.2f s\n", db.size(),
                std::string(to_string(db.kind())).c_str(), db.dimension(), secs);
  out << buf;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// query

namespace {

FeatureVector query_features(const CoefficientImage& image, FeatureKind db_kind) {
  // a gray database answers color queries through their luma
  if (db_kind != FeatureKind::color) return extract_features(image, db_kind);
  return extract_features(image, resolve_kind(ExtractMode::color, image));
}

}  // namespace

int cmd_query(const QueryOptions& opts, std::ostream& out, std::ostream&) {
  const auto db = load_database(opts.db);
  const auto feature = query_features(decode_image_file(opts.image), db.kind());
  const auto result = db.search_top_t(feature, opts.top);
  if (opts.csv) {
    out << "rank,image_id,distance\n";
    for (std::size_t k = 0; k < result.hits.size(); ++k) {
      out << k + 1 << ',' << csv_field(result.hits[k].image_id) << ','
          << format_double(result.hits[k].distance) << '\n';
    }
  } else {
    char buf[64];
    for (std::size_t k = 0; k < result.hits.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%4zu  %14.6f  ", k + 1, result.hits[k].distance);
      out << buf << result.hits[k].image_id;
      if (result.hits[k].class_label) out << "  [" << *result.hits[k].class_label << ']';
      out << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.algorithm != "proposed" && opts.algorithm != "mandala") {
    err << "error: --algorithm must be proposed or mandala\n";
    return kExitUsage;
  }
  const auto db = load_database(opts.db);
  const bool wants_mandala = opts.algorithm == "mandala";
  if (wants_mandala != (db.kind() == FeatureKind::mandala)) {
    throw Error(Errc::kind_mismatch, "algorithm '" + opts.algorithm + "' cannot use a " +
                                         std::string(to_string(db.kind())) + " database");
  }

  auto rows = read_manifest(opts.queries);
  for (const auto& r : rows) {
    if (r.label.empty()) {
      throw Error(Errc::invalid_argument, "query '" + r.id + "' has no class label");
    }
  }
  if (opts.per_class > 0) {
    // Sample per class, keeping manifest order among the survivors.
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < rows.size(); ++i) by_class[rows[i].label].push_back(i);
    std::mt19937_64 rng(opts.seed);
    std::vector<std::size_t> keep;
    for (auto& [label, members] : by_class) {
      for (std::size_t n = 0; n < opts.per_class && !members.empty(); ++n) {
        const auto j = pick_index(rng, members.size());
        keep.push_back(members[j]);
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
    std::sort(keep.begin(), keep.end());
    std::vector<ManifestRow> sampled;
    for (auto i : keep) sampled.push_back(rows[i]);
    rows = std::move(sampled);
  }
  if (rows.empty()) throw Error(Errc::invalid_argument, "query set is empty");

  std::vector<EvalQuery> queries(rows.size());
  std::vector<std::exception_ptr> failed(rows.size());
  parallel_for(rows.size(), 0, [&](std::size_t i) {
    try {
      queries[i] = {rows[i].id, rows[i].label,
                    query_features(decode_image_file(rows[i].path), db.kind())};
    } catch (...) {
      failed[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!failed[i]) continue;
    try {
      std::rethrow_exception(failed[i]);
    } catch (const Error& e) {
      throw Error(e.code(), rows[i].path.string() + ": " + e.what());
    }
  }

  EvalReport report;
  report.seed = opts.seed;
  const std::string test_set =
      opts.test_set.empty() ? opts.queries.stem().string() : opts.test_set;
  report.rows.push_back(run_experiment(db, queries, test_set, opts.algorithm));

  if (opts.out) {
    const bool append = opts.append && fs::exists(*opts.out) && fs::file_size(*opts.out) > 0;
    std::ostringstream csv;
    write_report_csv(report, csv);
    std::string text = csv.str();
    if (append) text.erase(0, text.find('\n') + 1);
    std::ofstream f(*opts.out, append ? std::ios::app : std::ios::trunc);
    if (!f) throw Error(Errc::io, "cannot write " + opts.out->string());
    f << text;
  }
  write_report_table(report, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// features

int cmd_features(const FeaturesOptions& opts, std::ostream& out, std::ostream&) {
  const auto image = decode_image_file(opts.image);
  const auto f = extract_features(image, resolve_kind(opts.mode, image));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out << ',';
    out << format_double(f[i]);
  }
  out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Miniature-based compressed-domain image retrieval"};
  app.require_subcommand(1);

  const std::map<std::string, ExtractMode> modes{{"gray", ExtractMode::gray},
                                                 {"color", ExtractMode::color},
                                                 {"auto", ExtractMode::automatic},
                                                 {"mandala", ExtractMode::mandala}};

  CorpusOptions corpus;
  std::string corpus_input;
  auto* c = app.add_subcommand("corpus", "Cut sources into overlapping tiles and write manifests");
  c->add_option("--input", corpus_input, "Directory of PGM/PPM source images");
  c->add_option("--synthetic", corpus.synthetic_classes,
                "Generate N procedural texture sources instead of reading --input");
  c->add_option("--source-size", corpus.source_size, "Side of synthetic sources")
      ->capture_default_str();
  c->add_option("--tile", corpus.tile, "Tile side in pixels")->capture_default_str();
  c->add_option("--grid", corpus.grid, "Tiles per axis")->capture_default_str();
  c->add_option("--out", corpus.out_dir, "Output directory")->required();
  c->add_option("--seed", corpus.seed, "Seed for random query selection")->capture_default_str();

  IndexOptions index;
  std::string index_mode = "auto";
  std::string dump_dc;
  auto* i = app.add_subcommand("index", "Extract features for every manifest row");
  i->add_option("--manifest", index.manifest, "Manifest CSV (path,id,label)")->required();
  i->add_option("--db", index.db, "Output database file")->required();
  i->add_option("--mode", index_mode, "gray|color|auto|mandala")
      ->check(CLI::IsMember({"gray", "color", "auto", "mandala"}))
      ->capture_default_str();
  i->add_option("--dump-dc", dump_dc, "Write intermediate DC images as PGM into this directory");
  i->add_option("--threads", index.threads, "Worker threads (0 = all cores)");

  QueryOptions query;
  std::string query_format = "text";
  auto* q = app.add_subcommand("query", "Rank database images by distance to a query image");
  q->add_option("--db", query.db, "Database file")->required();
  q->add_option("--image", query.image, "Query image (JPEG/PGM/PPM)")->required();
  q->add_option("--top", query.top, "Number of results")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  q->add_option("--format", query_format, "text|csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  EvalOptions eval;
  std::string eval_out;
  auto* e = app.add_subcommand("eval", "Score a query set against a database");
  e->add_option("--db", eval.db, "Database file")->required();
  e->add_option("--queries", eval.queries, "Query manifest with class labels")->required();
  e->add_option("--algorithm", eval.algorithm, "proposed|mandala")
      ->check(CLI::IsMember({"proposed", "mandala"}))
      ->capture_default_str();
  e->add_option("--seed", eval.seed, "Seed for --per-class sampling")->capture_default_str();
  e->add_option("--out", eval_out, "Report CSV");
  e->add_option("--per-class", eval.per_class, "Randomly keep N queries per class");
  e->add_option("--test-set", eval.test_set, "Name of the test set in the report");
  e->add_flag("--append", eval.append, "Append to an existing report CSV");

  FeaturesOptions features;
  std::string features_mode = "auto";
  auto* f = app.add_subcommand("features", "Print one image's feature vector as a CSV row");
  f->add_option("--image", features.image, "Image (JPEG/PGM/PPM)")->required();
  f->add_option("--mode", features_mode, "gray|color|auto|mandala")
      ->check(CLI::IsMember({"gray", "color", "auto", "mandala"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) {
      if (!corpus_input.empty()) corpus.input_dir = corpus_input;
      return cmd_corpus(corpus, out, err);
    }
    if (i->parsed()) {
      index.mode = modes.at(index_mode);
      if (!dump_dc.empty()) index.dump_dc = dump_dc;
      return cmd_index(index, out, err);
    }
    if (q->parsed()) {
      query.csv = query_format == "csv";
      return cmd_query(query, out, err);
    }
    if (e->parsed()) {
      if (!eval_out.empty()) eval.out = eval_out;
      return cmd_eval(eval, out, err);
    }
    if (f->parsed()) {
      features.mode = modes.at(features_mode);
      return cmd_features(features, out, err);
    }
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace mcbir::cli
