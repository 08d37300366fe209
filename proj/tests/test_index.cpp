#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "mcbir/error.hpp"
#include "mcbir/index.hpp"
#include "support/oracles.hpp"

using namespace mcbir;

namespace {

FeatureVector random_feature(std::mt19937_64& rng, FeatureKind kind = FeatureKind::gray) {
  std::normal_distribution<double> d(0.0, 40.0);
  FeatureVector f{kind, std::vector<double>(dimension_of(kind))};
  for (auto& v : f.values) v = d(rng);
  return f;
}

FeatureDatabase random_db(std::mt19937_64& rng, std::size_t n, FeatureKind kind = FeatureKind::gray) {
  FeatureDatabase db(kind);
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::string> label;
    if (i % 3 != 0) label = "class" + std::to_string(i % 7);
    db.insert({"img" + std::to_string(i), label, random_feature(rng, kind)});
  }
  return db;
}

std::string serialize(const FeatureDatabase& db) {
  std::ostringstream out(std::ios::binary);
  save_database(db, out);
  return out.str();
}

Errc load_error(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  try {
    load_database(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected load failure";
  return Errc::io;
}

template <typename F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::io;
}

}  // namespace

TEST(Distance, ThreeFourFive) {
  const std::vector<double> a = {0, 0}, b = {3, 4};
  EXPECT_DOUBLE_EQ(euclidean_distance(a, b), 5.0);
}

TEST(Distance, MatchesCompensatedOracle) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_feature(rng), b = random_feature(rng);
    const double want = oracle::compensated_distance(a.values, b.values);
    ASSERT_NEAR(euclidean_distance(a, b), want, 1e-12 * std::max(1.0, want));
  }
}

TEST(Distance, MetricProperties) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_feature(rng), b = random_feature(rng), c = random_feature(rng);
    ASSERT_EQ(euclidean_distance(a, a), 0.0);
    ASSERT_GE(euclidean_distance(a, b), 0.0);
    ASSERT_EQ(euclidean_distance(a, b), euclidean_distance(b, a));
    ASSERT_LE(euclidean_distance(a, c), euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9);
  }
}

TEST(Distance, RejectsUnequalLengths) {
  const std::vector<double> a = {1, 2}, b = {1, 2, 3};
  EXPECT_EQ(error_of([&] { euclidean_distance(a, b); }), Errc::dimension_mismatch);
}

TEST(Insert, ValidationErrors) {
  std::mt19937_64 rng(43);
  FeatureDatabase db(FeatureKind::gray);
  db.insert({"a", "x", random_feature(rng)});
  EXPECT_EQ(error_of([&] { db.insert({"", "x", random_feature(rng)}); }), Errc::invalid_argument);
  EXPECT_EQ(error_of([&] { db.insert({"a", "x", random_feature(rng)}); }), Errc::duplicate_id);
  EXPECT_EQ(error_of([&] { db.insert({"b", "x", random_feature(rng, FeatureKind::color)}); }),
            Errc::kind_mismatch);
  auto short_vec = random_feature(rng);
  short_vec.values.pop_back();
  EXPECT_EQ(error_of([&] { db.insert({"c", "x", short_vec}); }), Errc::dimension_mismatch);
  EXPECT_EQ(error_of([&] { db.insert({std::string(70000, 'i'), "x", random_feature(rng)}); }),
            Errc::invalid_argument);
  EXPECT_EQ(db.size(), 1u);
}

TEST(Insert, EmptyLabelMeansNoLabel) {
  std::mt19937_64 rng(44);
  FeatureDatabase db;
  db.insert({"a", std::string{}, random_feature(rng)});
  EXPECT_FALSE(db[0].class_label.has_value());
}

TEST(Insert, ManyRecordsKeepOrderAndClassSizes) {
  std::mt19937_64 rng(45);
  FeatureDatabase db(FeatureKind::color);
  for (int i = 0; i < 2775; ++i) db.insert({"t" + std::to_string(i), "c" + std::to_string(i / 25), random_feature(rng, FeatureKind::color)});
  EXPECT_EQ(db.size(), 2775u);
  EXPECT_EQ(db[1234].image_id, "t1234");
  EXPECT_EQ(db.class_size("c0"), 25u);
  EXPECT_EQ(db.class_size("c110"), 25u);
  EXPECT_EQ(db.class_size("nope"), 0u);
  EXPECT_TRUE(db.contains("t2774"));
}

TEST(Search, SelfIsRankOne) {
  std::mt19937_64 rng(46);
  const auto db = random_db(rng, 300);
  for (std::size_t i = 0; i < db.size(); ++i) {
    const auto r = db.search_top_t(db[i].feature, 1);
    ASSERT_EQ(r.hits.size(), 1u);
    EXPECT_EQ(r.hits[0].image_id, db[i].image_id);
    EXPECT_EQ(r.hits[0].distance, 0.0);
  }
}

TEST(Search, MatchesFullSortOracle) {
  std::mt19937_64 rng(47);
  const auto db = random_db(rng, 500);
  for (int q = 0; q < 50; ++q) {
    const auto query = random_feature(rng);
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < db.size(); ++i)
      all.emplace_back(oracle::compensated_distance(query.values, db[i].feature.values), i);
    std::stable_sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (std::size_t top : {1u, 7u, 25u, 500u}) {
      const auto r = db.search_top_t(query, top);
      ASSERT_EQ(r.hits.size(), top);
      for (std::size_t k = 0; k < top; ++k) {
        ASSERT_EQ(r.hits[k].record, all[k].second);
        ASSERT_NEAR(r.hits[k].distance, all[k].first, 1e-9);
        EXPECT_EQ(r.hits[k].class_label, db[all[k].second].class_label);
      }
    }
  }
}

TEST(Search, TopLargerThanDatabaseReturnsAll) {
  std::mt19937_64 rng(48);
  const auto db = random_db(rng, 10);
  EXPECT_EQ(db.search_top_t(random_feature(rng), 1000).hits.size(), 10u);
}

TEST(Search, PrefixProperty) {
  std::mt19937_64 rng(49);
  const auto db = random_db(rng, 200);
  const auto q = random_feature(rng);
  const auto big = db.search_top_t(q, 200);
  for (std::size_t i = 1; i < big.hits.size(); ++i) ASSERT_LE(big.hits[i - 1].distance, big.hits[i].distance);
  for (std::size_t t = 1; t <= 200; t += 13) {
    const auto small = db.search_top_t(q, t);
    for (std::size_t k = 0; k < t; ++k) ASSERT_EQ(small.hits[k].record, big.hits[k].record);
  }
}

TEST(Search, TiesBreakByInsertionOrder) {
  std::mt19937_64 rng(50);
  const auto base = random_feature(rng);
  std::vector<int> order(20);
  std::iota(order.begin(), order.end(), 0);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    FeatureDatabase db;
    for (int id : order) db.insert({"dup" + std::to_string(id), "same", base});
    const auto r = db.search_top_t(base, 20);
    for (std::size_t k = 0; k < 20; ++k) {
      ASSERT_EQ(r.hits[k].record, k);
      ASSERT_EQ(r.hits[k].image_id, "dup" + std::to_string(order[k]));
    }
  }
}

TEST(Search, Errors) {
  std::mt19937_64 rng(51);
  FeatureDatabase empty;
  EXPECT_EQ(error_of([&] { empty.search_top_t(random_feature(rng), 1); }), Errc::empty_database);
  const auto db = random_db(rng, 5);
  EXPECT_EQ(error_of([&] { db.search_top_t(random_feature(rng), 0); }), Errc::invalid_argument);
  EXPECT_EQ(error_of([&] { db.search_top_t(random_feature(rng, FeatureKind::color), 1); }),
            Errc::kind_mismatch);
}

TEST(Storage, RoundTripIsExact) {
  std::mt19937_64 rng(52);
  for (std::size_t n : {0u, 1u, 2u, 777u}) {
    for (auto kind : {FeatureKind::gray, FeatureKind::color, FeatureKind::mandala}) {
      auto db = random_db(rng, n, kind);
      const auto bytes = serialize(db);
      std::istringstream in(bytes, std::ios::binary);
      const auto back = load_database(in);
      ASSERT_EQ(back, db);
      ASSERT_EQ(serialize(back), bytes);
    }
  }
}

TEST(Storage, SpecialValuesSurviveBitForBit) {
  FeatureDatabase db;
  FeatureVector f{FeatureKind::gray, std::vector<double>(16, 0.0)};
  f.values[0] = -0.0;
  f.values[1] = std::numeric_limits<double>::denorm_min();
  f.values[2] = std::numeric_limits<double>::max();
  f.values[3] = 0.1;
  db.insert({"special", std::nullopt, f});
  std::istringstream in(serialize(db), std::ios::binary);
  const auto back = load_database(in);
  for (int i = 0; i < 16; ++i)
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[0].feature.values[i]), std::bit_cast<std::uint64_t>(f.values[i]));
}

TEST(Storage, HeaderLayout) {
  FeatureDatabase db(FeatureKind::color);
  const auto b = serialize(db);
  ASSERT_EQ(b.size(), 17u);
  EXPECT_EQ(b.substr(0, 4), "MCBR");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 0);
  EXPECT_EQ(b[6], 1);
  EXPECT_EQ(b[7], 18);
  EXPECT_EQ(b[8], 0);
}

TEST(Storage, CorruptionIsDetected) {
  std::mt19937_64 rng(53);
  const auto db = random_db(rng, 4);
  const auto good = serialize(db);

  auto bad = good;
  bad[0] = 'X';
  EXPECT_EQ(load_error(bad), Errc::bad_magic);
  bad = good;
  bad[4] = 2;
  EXPECT_EQ(load_error(bad), Errc::version_mismatch);
  bad = good;
  bad[6] = 9;
  EXPECT_EQ(load_error(bad), Errc::malformed_database);
  bad = good;
  bad[7] = 17;
  EXPECT_EQ(load_error(bad), Errc::malformed_database);
  EXPECT_EQ(load_error(good + "x"), Errc::malformed_database);

  for (std::size_t len = 0; len < good.size(); ++len)
    ASSERT_EQ(load_error(good.substr(0, len)), Errc::truncated_file) << len;
}

TEST(Storage, TruncationReportsOffset) {
  std::mt19937_64 rng(54);
  const auto good = serialize(random_db(rng, 3));
  std::istringstream in(good.substr(0, 30), std::ios::binary);
  try {
    load_database(in);
    FAIL();
  } catch (const Error& e) {
    ASSERT_TRUE(e.byte_offset().has_value());
    EXPECT_EQ(*e.byte_offset(), 30u);
  }
}

TEST(Storage, DuplicateIdInFileIsMalformed) {
  std::mt19937_64 rng(55);
  FeatureDatabase db;
  db.insert({"aa", std::nullopt, random_feature(rng)});
  db.insert({"ab", std::nullopt, random_feature(rng)});
  auto b = serialize(db);
  const auto second = b.find("ab");
  b[second + 1] = 'a';
  EXPECT_EQ(load_error(b), Errc::malformed_database);
}

TEST(Storage, FileRoundTrip) {
  std::mt19937_64 rng(56);
  const auto db = random_db(rng, 20);
  const auto path = std::filesystem::temp_directory_path() / "mcbir_index_roundtrip.db";
  save_database(db, path);
  EXPECT_EQ(load_database(path), db);
  std::filesystem::remove(path);
  EXPECT_EQ(error_of([&] { load_database(path); }), Errc::io);
}
