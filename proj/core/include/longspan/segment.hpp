#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace longspan {

// Human annotation scheme the raw score was collected under.
enum class Scheme { DA, MQM, SQM, ESA };

std::string_view to_string(Scheme s);
// Case-insensitive; nullopt for unknown names.
std::optional<Scheme> scheme_from_string(std::string_view s);

// One annotated translation unit: a source segment, its machine translation,
// an optional reference translation, and a human quality score. span_size
// records how many original segments were merged into this unit (1 for
// originals).
struct AnnotatedSegment {
  std::string id;
  std::string lang_pair;  // e.g. "en-cs", source->target
  Scheme scheme = Scheme::DA;
  std::string system_id;
  std::string doc_id;
  std::uint64_t seg_index = 0;  // position within doc_id, defines adjacency
  std::string source;
  std::string hypothesis;
  std::optional<std::string> reference;
  double raw_score = 0.0;
  std::optional<double> norm_score;  // in [0,1] once normalization has run
  std::uint32_t span_size = 1;

  bool operator==(const AnnotatedSegment&) const = default;
};

// Unicode scalar count of source plus hypothesis. The reference does not
// contribute; whitespace counts.
std::uint64_t char_weight(const AnnotatedSegment& seg);

}  // namespace longspan
