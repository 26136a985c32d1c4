#include "longspan/corpus.hpp"

#include <algorithm>

#include "longspan/errors.hpp"

namespace longspan {

std::string GroupKey::label() const {
  std::string out = lang_pair;
  out += '/';
  out += to_string(scheme);
  out += '/';
  out += system_id;
  out += '/';
  out += doc_id;
  return out;
}

GroupKey group_key(const AnnotatedSegment& seg) {
  return GroupKey{seg.lang_pair, seg.scheme, seg.system_id, seg.doc_id};
}

Corpus Corpus::from_segments(std::vector<AnnotatedSegment> segments) {
  Corpus corpus;
  corpus.segments_ = std::move(segments);
  corpus.by_id_.reserve(corpus.segments_.size());
  for (std::size_t i = 0; i < corpus.segments_.size(); ++i) {
    const AnnotatedSegment& seg = corpus.segments_[i];
    if (seg.span_size < 1) {
      throw integrity_error("segment '" + seg.id + "': span_size must be >= 1");
    }
    if (seg.norm_score &&
        (!(*seg.norm_score >= 0.0) || !(*seg.norm_score <= 1.0))) {
      throw integrity_error("segment '" + seg.id +
                            "': norm_score outside [0,1]");
    }
    const auto [it, inserted] = corpus.by_id_.emplace(seg.id, i);
    (void)it;
    if (!inserted) {
      throw integrity_error("duplicate segment id '" + seg.id + "'");
    }
    corpus.index_[group_key(seg)].push_back(i);
  }
  // Sort each group by seg_index, stable on input position so duplicate
  // indices keep a deterministic order until group_and_sort rejects them.
  for (auto& [key, positions] : corpus.index_) {
    (void)key;
    std::stable_sort(positions.begin(), positions.end(),
                     [&](std::size_t a, std::size_t b) {
                       return corpus.segments_[a].seg_index <
                              corpus.segments_[b].seg_index;
                     });
  }
  return corpus;
}

const AnnotatedSegment* Corpus::find(std::string_view id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &segments_[it->second];
}

std::vector<SegmentGroup> group_and_sort(const Corpus& corpus) {
  std::vector<SegmentGroup> groups;
  groups.reserve(corpus.index().size());
  for (const auto& [key, positions] : corpus.index()) {
    SegmentGroup group;
    group.key = key;
    group.segments.reserve(positions.size());
    for (std::size_t pos : positions) {
      const AnnotatedSegment& seg = corpus.at(pos);
      if (!group.segments.empty() &&
          group.segments.back()->seg_index == seg.seg_index) {
        throw integrity_error("duplicate seg_index " +
                              std::to_string(seg.seg_index) + " in group " +
                              key.label());
      }
      group.segments.push_back(&seg);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace longspan
