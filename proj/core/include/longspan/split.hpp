#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "longspan/corpus.hpp"

namespace longspan {

enum class SplitUnit { segment, document };

// Reproducible partition request. Ratios must be non-negative and sum to 1
// within 1e-9. In document mode, whole (doc_id, system_id) groups stay
// together.
struct SplitSpec {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
  std::uint64_t seed = 0;
  SplitUnit unit = SplitUnit::segment;

  void validate() const;  // throws argument_error
};

struct SplitResult {
  Corpus train;
  Corpus dev;
  Corpus test;
  // Non-fatal notes, e.g. a positive ratio that still produced an empty split.
  std::vector<std::string> warnings;
};

// Partitions the corpus into three disjoint corpora whose union is the input.
// Sizes follow the floor rule: test = floor(N * r_test), dev =
// floor(N * r_dev), train = remainder (unit counts in document mode).
//
// Membership is decided by a seeded uniform shuffle and prefix slicing; the
// shuffle is pinned for reproducibility across platforms and versions:
// std::mt19937_64 seeded with spec.seed, Fisher-Yates from the last element
// down, each draw a rejection-sampled uniform on [0, i]. Within each split,
// segments keep their input order so document adjacency survives the split.
//
// Throws argument_error on an empty corpus or invalid spec.
SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec);

}  // namespace longspan
