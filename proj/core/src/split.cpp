#include "longspan/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <utility>

#include "longspan/errors.hpp"

namespace longspan {

namespace {

// Uniform draw on [0, bound] by rejection sampling on the raw mt19937_64
// stream. Unlike std::uniform_int_distribution this is fully pinned by the
// standardised engine output, so partitions reproduce across toolchains.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t range = bound + 1;  // bound < 2^64 - 1 in practice
  const std::uint64_t limit = range == 0 ? 0 : (0 - range) % range;
  while (true) {
    const std::uint64_t draw = rng();
    if (range == 0) return draw;
    if (draw >= limit) return draw % range;
  }
}

void fisher_yates(std::vector<std::size_t>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint64_t j = bounded_uniform(rng, i - 1);
    std::swap(items[i - 1], items[j]);
  }
}

// floor(n * ratio) with a tiny epsilon so products that are mathematically
// integral do not fall one short from binary representation of the ratio.
std::size_t floor_share(std::size_t n, double ratio) {
  const double x = static_cast<double>(n) * ratio;
  return static_cast<std::size_t>(std::floor(x + 1e-9));
}

}  // namespace

void SplitSpec::validate() const {
  if (!(train >= 0.0) || !(dev >= 0.0) || !(test >= 0.0)) {
    throw argument_error("split ratios must be non-negative");
  }
  const double sum = train + dev + test;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw argument_error("split ratios must sum to 1 (got " +
                         std::to_string(sum) + ")");
  }
}

SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  if (corpus.empty()) {
    throw argument_error("cannot split an empty corpus");
  }

  // Units to shuffle: segment positions, or (doc_id, system_id) groups.
  // Either way each unit owns a set of segment positions and assignment is
  // decided per unit.
  std::vector<std::vector<std::size_t>> unit_positions;
  if (spec.unit == SplitUnit::segment) {
    unit_positions.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      unit_positions.push_back({i});
    }
  } else {
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>>
        docs;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const AnnotatedSegment& seg = corpus.at(i);
      docs[{seg.doc_id, seg.system_id}].push_back(i);
    }
    unit_positions.reserve(docs.size());
    for (auto& [key, positions] : docs) {
      (void)key;
      unit_positions.push_back(std::move(positions));
    }
  }

  const std::size_t n_units = unit_positions.size();
  std::vector<std::size_t> order(n_units);
  std::iota(order.begin(), order.end(), 0);
  fisher_yates(order, spec.seed);

  const std::size_t n_test = floor_share(n_units, spec.test);
  const std::size_t n_dev = floor_share(n_units, spec.dev);

  // 0 = train, 1 = dev, 2 = test, assigned per segment position.
  std::vector<int> assignment(corpus.size(), 0);
  for (std::size_t rank = 0; rank < n_units; ++rank) {
    const int split = rank < n_test ? 2 : rank < n_test + n_dev ? 1 : 0;
    for (std::size_t pos : unit_positions[order[rank]]) {
      assignment[pos] = split;
    }
  }

  std::vector<AnnotatedSegment> train, dev, test;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    switch (assignment[i]) {
      case 2: test.push_back(corpus.at(i)); break;
      case 1: dev.push_back(corpus.at(i)); break;
      default: train.push_back(corpus.at(i)); break;
    }
  }

  SplitResult result;
  const auto warn_if_empty = [&](const char* name, double ratio,
                                 std::size_t size) {
    if (ratio > 0.0 && size == 0) {
      result.warnings.push_back(std::string(name) + " ratio " +
                                std::to_string(ratio) +
                                " produced an empty split");
    }
  };
  warn_if_empty("train", spec.train, train.size());
  warn_if_empty("dev", spec.dev, dev.size());
  warn_if_empty("test", spec.test, test.size());

  result.train = Corpus::from_segments(std::move(train));
  result.dev = Corpus::from_segments(std::move(dev));
  result.test = Corpus::from_segments(std::move(test));
  return result;
}

}  // namespace longspan
