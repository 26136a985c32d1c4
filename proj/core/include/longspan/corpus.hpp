#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "longspan/segment.hpp"

namespace longspan {

// Identity of one document as scored by one system under one scheme. Spans
// never cross these boundaries.
struct GroupKey {
  std::string lang_pair;
  Scheme scheme = Scheme::DA;
  std::string system_id;
  std::string doc_id;

  auto operator<=>(const GroupKey&) const = default;
  // "en-cs/DA/systemA/doc1", used in diagnostics.
  std::string label() const;
};

GroupKey group_key(const AnnotatedSegment& seg);

namespace detail {
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};
}  // namespace detail

// Ordered, immutable collection of AnnotatedSegments. Row order is the order
// of construction (file order for parsed corpora); the group index maps each
// (lang_pair, scheme, system_id, doc_id) to its segment positions sorted by
// seg_index. Safe to read from multiple threads.
class Corpus {
 public:
  Corpus() = default;

  // Validates ids are unique, span_size >= 1 and norm_score in [0,1];
  // throws integrity_error otherwise.
  static Corpus from_segments(std::vector<AnnotatedSegment> segments);

  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  const std::vector<AnnotatedSegment>& segments() const { return segments_; }
  const AnnotatedSegment& at(std::size_t i) const { return segments_.at(i); }

  // nullptr when the id is unknown.
  const AnnotatedSegment* find(std::string_view id) const;

  // Positions into segments(), per group, sorted by (seg_index, position).
  const std::map<GroupKey, std::vector<std::size_t>>& index() const {
    return index_;
  }

  bool operator==(const Corpus& other) const {
    return segments_ == other.segments_;
  }

 private:
  std::vector<AnnotatedSegment> segments_;
  std::unordered_map<std::string, std::size_t, detail::StringHash,
                     std::equal_to<>>
      by_id_;
  std::map<GroupKey, std::vector<std::size_t>> index_;
};

struct SegmentGroup {
  GroupKey key;
  std::vector<const AnnotatedSegment*> segments;  // ascending seg_index
};

// One group per (lang_pair, scheme, system_id, doc_id) in key order, each
// sorted ascending by seg_index. Throws integrity_error when a seg_index
// repeats within a group.
std::vector<SegmentGroup> group_and_sort(const Corpus& corpus);

}  // namespace longspan
