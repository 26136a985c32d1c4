#include "longspan/augment.hpp"

#include <algorithm>

#include "longspan/errors.hpp"
#include "longspan/utf8.hpp"

namespace longspan {

void AugmentConfig::validate() const {
  for (int k : k_values) {
    if (k < 2) {
      throw argument_error("span width " + std::to_string(k) +
                           " is invalid: every k must be >= 2");
    }
  }
  if (stride < 1) {
    throw argument_error("stride must be >= 1");
  }
}

double weighted_span_score(std::span<const double> scores,
                           std::span<const std::uint64_t> weights) {
  if (scores.size() != weights.size()) {
    throw argument_error("weighted_span_score: " +
                         std::to_string(scores.size()) + " scores vs " +
                         std::to_string(weights.size()) + " weights");
  }
  if (scores.empty()) {
    throw argument_error("weighted_span_score: empty input");
  }
  double weighted_sum = 0.0;
  std::uint64_t total_weight = 0;
  double lo = scores[0], hi = scores[0];
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weighted_sum += static_cast<double>(weights[i]) * scores[i];
    total_weight += weights[i];
    lo = std::min(lo, scores[i]);
    hi = std::max(hi, scores[i]);
  }
  if (total_weight == 0) {
    throw degenerate_error("weighted_span_score: weights sum to zero");
  }
  // The exact mean lies in [lo, hi]; the clamp only absorbs final-ulp
  // rounding of the division.
  return std::clamp(weighted_sum / static_cast<double>(total_weight), lo, hi);
}

std::uint64_t member_char_weight(const AnnotatedSegment& seg,
                                 std::string_view separator) {
  const std::uint64_t total = char_weight(seg);
  const std::uint64_t joins = seg.span_size - 1;
  const std::uint64_t sep_scalars = 2 * joins * scalar_count(separator);
  return sep_scalars > total ? 0 : total - sep_scalars;
}

AnnotatedSegment concat_span(std::span<const AnnotatedSegment* const> members,
                             const AugmentConfig& config) {
  if (members.size() < 2) {
    throw argument_error("concat_span needs at least 2 segments, got " +
                         std::to_string(members.size()));
  }
  const GroupKey key = group_key(*members[0]);
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (group_key(*members[i]) != key) {
      throw integrity_error("concat_span: segment '" + members[i]->id +
                            "' belongs to group " +
                            group_key(*members[i]).label() + ", not " +
                            key.label());
    }
    const std::uint64_t expected =
        members[i - 1]->seg_index + members[i - 1]->span_size;
    if (members[i]->seg_index != expected) {
      throw adjacency_error(
          "concat_span: seg_index " + std::to_string(members[i]->seg_index) +
          " of '" + members[i]->id + "' is not consecutive (expected " +
          std::to_string(expected) + ")");
    }
  }

  AnnotatedSegment span;
  span.lang_pair = key.lang_pair;
  span.scheme = key.scheme;
  span.system_id = key.system_id;
  span.doc_id = key.doc_id;
  span.seg_index = members[0]->seg_index;
  span.id = members[0]->id + "+" + std::to_string(members.size());

  std::vector<double> raw_scores;
  std::vector<double> norm_scores;
  std::vector<std::uint64_t> weights;
  raw_scores.reserve(members.size());
  weights.reserve(members.size());
  bool all_have_reference = true;
  const AnnotatedSegment* missing_norm = nullptr;
  std::uint32_t span_size = 0;

  for (std::size_t i = 0; i < members.size(); ++i) {
    const AnnotatedSegment& m = *members[i];
    if (i > 0) {
      span.source += config.separator;
      span.hypothesis += config.separator;
    }
    span.source += m.source;
    span.hypothesis += m.hypothesis;
    raw_scores.push_back(m.raw_score);
    weights.push_back(member_char_weight(m, config.separator));
    span_size += m.span_size;
    all_have_reference = all_have_reference && m.reference.has_value();
    if (m.norm_score) {
      norm_scores.push_back(*m.norm_score);
    } else if (!missing_norm) {
      missing_norm = &m;
    }
  }
  span.span_size = span_size;

  if (all_have_reference) {
    std::string ref;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) ref += config.separator;
      ref += *members[i]->reference;
    }
    span.reference = std::move(ref);
  }

  span.raw_score = weighted_span_score(raw_scores, weights);
  if (config.score_field == ScoreField::normalized) {
    if (missing_norm) {
      throw config_error("concat_span: score_field is 'norm' but segment '" +
                         missing_norm->id + "' has no norm_score");
    }
    // Weighted mean of values in [0,1]; clamp shields the stored invariant
    // from the last rounding step.
    span.norm_score =
        std::clamp(weighted_span_score(norm_scores, weights), 0.0, 1.0);
  }
  return span;
}

Corpus augment_corpus(const Corpus& corpus, const AugmentConfig& config) {
  config.validate();
  std::vector<int> ks = config.k_values;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  const std::vector<SegmentGroup> groups = group_and_sort(corpus);
  std::vector<AnnotatedSegment> out;

  for (const SegmentGroup& group : groups) {
    if (config.include_originals) {
      for (const AnnotatedSegment* seg : group.segments) out.push_back(*seg);
    }

    // Maximal runs of consecutive seg_index values; windows never bridge a
    // numbering gap (the segments across a gap are not adjacent).
    std::vector<std::pair<std::size_t, std::size_t>> runs;  // [begin, end)
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= group.segments.size(); ++i) {
      const bool adjacent =
          i < group.segments.size() &&
          group.segments[i]->seg_index ==
              group.segments[i - 1]->seg_index + group.segments[i - 1]->span_size;
      if (!adjacent) {
        runs.emplace_back(run_start, i);
        run_start = i;
      }
    }

    for (int k : ks) {
      const std::size_t width = static_cast<std::size_t>(k);
      for (const auto& [begin, end] : runs) {
        const std::size_t n = end - begin;
        if (n < width) continue;
        for (std::size_t start = 0; start + width <= n;
             start += static_cast<std::size_t>(config.stride)) {
          const std::span<const AnnotatedSegment* const> window(
              group.segments.data() + begin + start, width);
          out.push_back(concat_span(window, config));
        }
      }
    }
  }
  return Corpus::from_segments(std::move(out));
}

}  // namespace longspan
