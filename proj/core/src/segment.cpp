#include "longspan/segment.hpp"

#include "longspan/utf8.hpp"

namespace longspan {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::DA:
      return "DA";
    case Scheme::MQM:
      return "MQM";
    case Scheme::SQM:
      return "SQM";
    case Scheme::ESA:
      return "ESA";
  }
  return "DA";
}

std::optional<Scheme> scheme_from_string(std::string_view s) {
  std::string upper;
  upper.reserve(s.size());
  for (char c : s) {
    upper += (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
  }
  if (upper == "DA") return Scheme::DA;
  if (upper == "MQM") return Scheme::MQM;
  if (upper == "SQM") return Scheme::SQM;
  if (upper == "ESA") return Scheme::ESA;
  return std::nullopt;
}

std::uint64_t char_weight(const AnnotatedSegment& seg) {
  return scalar_count(seg.source) + scalar_count(seg.hypothesis);
}

}  // namespace longspan
