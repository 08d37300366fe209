#include <benchmark/benchmark.h>

#include <random>

#include "mcbir/dct.hpp"
#include "mcbir/eval.hpp"
#include "mcbir/index.hpp"
#include "mcbir/jpeg.hpp"
#include "mcbir/miniature.hpp"
#include "mcbir/pipeline.hpp"

#ifdef MCBIR_BENCH_JPEG
#include "support/libjpeg_ref.hpp"
#endif

using namespace mcbir;

namespace {

PixelImage texture(int size) { return synthetic_texture(3, 12, size, 7); }

}  // namespace

static void BM_ForwardDct(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-128.0, 127.0);
  Block8 b;
  for (auto& v : b) v = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(forward_dct_8x8(b));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ForwardDct);

static void BM_DcReduce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DcImage img(n, n, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(dc_reduce(img));
}
BENCHMARK(BM_DcReduce)->Arg(64)->Arg(80)->Arg(512);

static void BM_PixelFeatures(benchmark::State& state) {
  const auto img = texture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto ci = decode_image(img);
    benchmark::DoNotOptimize(extract_features(ci, FeatureKind::gray));
  }
}
BENCHMARK(BM_PixelFeatures)->Arg(512)->Arg(640)->Unit(benchmark::kMillisecond);

#ifdef MCBIR_BENCH_JPEG
static void BM_JpegDecodeCoefficients(benchmark::State& state) {
  refjpeg::EncodeOptions opts;
  opts.all_ones_tables = false;
  const auto bytes = refjpeg::encode_jpeg(texture(static_cast<int>(state.range(0))), opts);
  for (auto _ : state) benchmark::DoNotOptimize(decode_jpeg_coefficients(bytes));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_JpegDecodeCoefficients)->Arg(512)->Arg(640)->Unit(benchmark::kMillisecond);

static void BM_JpegFeatures(benchmark::State& state) {
  refjpeg::EncodeOptions opts;
  opts.all_ones_tables = false;
  const auto bytes = refjpeg::encode_jpeg(texture(512), opts);
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(decode_image(bytes), FeatureKind::gray));
}
BENCHMARK(BM_JpegFeatures)->Unit(benchmark::kMillisecond);
#endif

static void BM_SearchTopT(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d(0.0, 40.0);
  auto vec = [&] {
    FeatureVector f{FeatureKind::gray, std::vector<double>(16)};
    for (auto& v : f.values) v = d(rng);
    return f;
  };
  FeatureDatabase db;
  for (int i = 0; i < state.range(0); ++i) db.insert({"r" + std::to_string(i), std::nullopt, vec()});
  const auto q = vec();
  for (auto _ : state) benchmark::DoNotOptimize(db.search_top_t(q, 25));
}
BENCHMARK(BM_SearchTopT)->Arg(2775)->Arg(13350);
BENCHMARK_MAIN();
