// Microbenchmarks for the hot paths: chrF scoring, sliding-window
// augmentation, and the correlation kernels.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "longspan/augment.hpp"
#include "longspan/chrf.hpp"
#include "longspan/corpus.hpp"
#include "longspan/split.hpp"
#include "longspan/stats.hpp"

namespace {

using namespace longspan;

std::string random_text(std::mt19937_64& rng, std::size_t chars) {
  static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz      ";
  std::uniform_int_distribution<std::size_t> pick(0, sizeof alphabet - 2);
  std::string out;
  out.reserve(chars);
  for (std::size_t i = 0; i < chars; ++i) out.push_back(alphabet[pick(rng)]);
  return out;
}

Corpus corpus_of(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> score(0.0, 100.0);
  std::vector<AnnotatedSegment> segments;
  segments.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    AnnotatedSegment seg;
    seg.id = "s" + std::to_string(i);
    seg.lang_pair = "en-cs";
    seg.scheme = Scheme::DA;
    seg.system_id = "sys";
    seg.doc_id = "doc";
    seg.seg_index = i;
    seg.source = random_text(rng, 60);
    seg.hypothesis = random_text(rng, 60);
    seg.reference = random_text(rng, 60);
    seg.raw_score = score(rng);
    segments.push_back(std::move(seg));
  }
  return Corpus::from_segments(std::move(segments));
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

void BM_ChrfScore(benchmark::State& state) {
  const std::size_t chars = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  const std::string hyp = random_text(rng, chars);
  const std::string ref = random_text(rng, chars);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chrf_score(hyp, ref));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(hyp.size() + ref.size()));
}
BENCHMARK(BM_ChrfScore)->Arg(64)->Arg(512)->Arg(4096);

void BM_AugmentCorpus(benchmark::State& state) {
  const Corpus base = corpus_of(static_cast<std::size_t>(state.range(0)));
  const AugmentConfig config;
  std::size_t rows = 0;
  for (auto _ : state) {
    const Corpus out = augment_corpus(base, config);
    rows = out.size();
    benchmark::DoNotOptimize(rows);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(rows));
}
BENCHMARK(BM_AugmentCorpus)->Arg(100)->Arg(1000)->Arg(5000);

void BM_Pearson(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> x = random_values(n, 1);
  const std::vector<double> y = random_values(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson(x, y));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Pearson)->Arg(100)->Arg(10000);

void BM_Spearman(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> x = random_values(n, 3);
  const std::vector<double> y = random_values(n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spearman(x, y));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Spearman)->Arg(100)->Arg(10000);

void BM_SplitCorpus(benchmark::State& state) {
  const Corpus base = corpus_of(static_cast<std::size_t>(state.range(0)));
  SplitSpec spec;
  spec.seed = 11;
  for (auto _ : state) {
    const SplitResult result = split_corpus(base, spec);
    benchmark::DoNotOptimize(result.train.size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_SplitCorpus)->Arg(1000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
