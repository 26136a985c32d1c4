#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "longspan/corpus.hpp"

namespace longspan {

// Which score field span construction averages into the output. raw_score is
// always averaged; `normalized` additionally averages norm_score (and then
// requires every member to carry one).
enum class ScoreField { raw, normalized };

struct AugmentConfig {
  std::vector<int> k_values{2, 3, 4, 5};  // span widths, each >= 2
  int stride = 1;                         // sliding-window step, >= 1
  std::string separator = " ";            // joined between member texts
  bool include_originals = true;
  ScoreField score_field = ScoreField::raw;

  // Throws argument_error when a width is < 2 or the stride is < 1.
  void validate() const;
};

// Length-weighted average: sum(w_i * s_i) / sum(w_i). The result lies in
// [min(scores), max(scores)]; scaling all weights by the same positive
// constant leaves it unchanged. Throws argument_error on a length mismatch
// and degenerate_error when the weights sum to zero.
double weighted_span_score(std::span<const double> scores,
                           std::span<const std::uint64_t> weights);

// The character weight a segment contributes when it becomes a span member:
// its cumulative original char_weight, i.e. char_weight minus the separators
// that earlier concatenation inserted ((span_size - 1) per text). Carrying
// cumulative weights is what makes nested span construction agree with flat
// construction. Equals char_weight for originals.
std::uint64_t member_char_weight(const AnnotatedSegment& seg,
                                 std::string_view separator);

// Concatenates an adjacent run of segments from one document into one span
// segment: texts joined by the separator, score the char-weighted average,
// span_size the sum of member span sizes, id "<first_id>+<member count>",
// seg_index the first member's. The reference survives only when every
// member has one. Members must share a group key (integrity_error) and be
// consecutive, i.e. each next seg_index equals the previous seg_index plus
// its span_size (adjacency_error).
AnnotatedSegment concat_span(
    std::span<const AnnotatedSegment* const> members,
    const AugmentConfig& config);

// Sliding-window augmentation over every (lang_pair, scheme, system, doc)
// group: for each k and each maximal run of consecutive seg_index values of
// length n, emits ceil(max(0, n - k + 1) / stride) spans. Output order is
// deterministic: group key order, originals first (when included), then k
// ascending, then window start. Groups smaller than k contribute no k-spans;
// that is not an error.
Corpus augment_corpus(const Corpus& corpus, const AugmentConfig& config);

}  // namespace longspan
