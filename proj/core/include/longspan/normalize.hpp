#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "longspan/corpus.hpp"

namespace longspan {

// Scope the min/max are fit over. Whatever the scope, the returned map is
// keyed per (scheme, lang_pair) so apply-time lookup is uniform.
enum class BoundsGrouping { scheme_lang_pair, scheme, global };

struct BoundsKey {
  Scheme scheme = Scheme::DA;
  std::string lang_pair;
  auto operator<=>(const BoundsKey&) const = default;
  std::string label() const;
};

// Empirical score range of one group; min == max marks a degenerate scale.
// MQM's open lower end is represented by the observed minimum.
struct ScaleBounds {
  double min = 0.0;
  double max = 0.0;
  Scheme scheme = Scheme::DA;
  std::string lang_pair;
  std::uint64_t n_observed = 0;

  bool degenerate() const { return min == max; }
};

using BoundsMap = std::map<BoundsKey, ScaleBounds>;

// Fits empirical min/max over raw_score for every (scheme, lang_pair) present
// in the corpus, at the requested grouping scope. An empty corpus yields an
// empty map.
BoundsMap fit_bounds(const Corpus& corpus,
                     BoundsGrouping grouping = BoundsGrouping::scheme_lang_pair);

// Bounds for one named group; throws fit_error when the corpus holds no
// segments for it.
ScaleBounds fit_bounds_for(const Corpus& corpus, Scheme scheme,
                           std::string_view lang_pair);

// (x - min) / (max - min), clamped into [0,1]. Throws degenerate_error when
// min == max.
double normalize_value(double x, const ScaleBounds& bounds);

enum class DegeneratePolicy { error, midpoint };

// Returns a corpus with every segment's norm_score populated from its
// group's bounds; raw_score is preserved unchanged. Throws config_error when
// a (scheme, lang_pair) present in the corpus has no bounds, and
// degenerate_error for collapsed scales unless policy is midpoint (which maps
// the whole group to 0.5).
Corpus normalize_corpus(const Corpus& corpus, const BoundsMap& bounds,
                        DegeneratePolicy policy = DegeneratePolicy::error);

// Bounds persist as a small TSV (scheme, lang_pair, min, max, n) so test-time
// normalization can reuse train-time bounds.
void write_bounds_tsv(const BoundsMap& bounds, std::ostream& out);
BoundsMap read_bounds_tsv(std::istream& in);
BoundsMap read_bounds_tsv_file(const std::filesystem::path& path);

}  // namespace longspan
