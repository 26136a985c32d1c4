#include "longspan/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "longspan/errors.hpp"
#include "longspan/util.hpp"

namespace longspan {

namespace {

struct Accum {
  double min = 0.0;
  double max = 0.0;
  std::uint64_t n = 0;

  void add(double x) {
    if (n == 0) {
      min = max = x;
    } else {
      min = std::min(min, x);
      max = std::max(max, x);
    }
    ++n;
  }
};

}  // namespace

std::string BoundsKey::label() const {
  std::string out(to_string(scheme));
  out += '/';
  out += lang_pair;
  return out;
}

BoundsMap fit_bounds(const Corpus& corpus, BoundsGrouping grouping) {
  // Accumulate at the requested scope, then key the result per
  // (scheme, lang_pair) so lookups do not depend on the fitting scope.
  std::map<BoundsKey, Accum> per_pair;
  std::map<Scheme, Accum> per_scheme;
  Accum global;
  for (const AnnotatedSegment& seg : corpus.segments()) {
    per_pair[BoundsKey{seg.scheme, seg.lang_pair}].add(seg.raw_score);
    if (grouping == BoundsGrouping::scheme) per_scheme[seg.scheme].add(seg.raw_score);
    if (grouping == BoundsGrouping::global) global.add(seg.raw_score);
  }

  BoundsMap out;
  for (const auto& [key, acc] : per_pair) {
    const Accum& src = grouping == BoundsGrouping::scheme_lang_pair ? acc
                       : grouping == BoundsGrouping::scheme ? per_scheme[key.scheme]
                                                            : global;
    out[key] = ScaleBounds{src.min, src.max, key.scheme, key.lang_pair, src.n};
  }
  return out;
}

ScaleBounds fit_bounds_for(const Corpus& corpus, Scheme scheme,
                           std::string_view lang_pair) {
  Accum acc;
  for (const AnnotatedSegment& seg : corpus.segments()) {
    if (seg.scheme == scheme && seg.lang_pair == lang_pair) acc.add(seg.raw_score);
  }
  if (acc.n == 0) {
    throw fit_error("no segments for group " +
                    BoundsKey{scheme, std::string(lang_pair)}.label() +
                    ": cannot fit bounds");
  }
  return ScaleBounds{acc.min, acc.max, scheme, std::string(lang_pair), acc.n};
}

double normalize_value(double x, const ScaleBounds& bounds) {
  if (bounds.degenerate()) {
    throw degenerate_error("scale " + BoundsKey{bounds.scheme, bounds.lang_pair}.label() +
                           " is degenerate (min == max == " +
                           format_double(bounds.min) + ")");
  }
  const double v = (x - bounds.min) / (bounds.max - bounds.min);
  return std::clamp(v, 0.0, 1.0);
}

Corpus normalize_corpus(const Corpus& corpus, const BoundsMap& bounds,
                        DegeneratePolicy policy) {
  std::vector<AnnotatedSegment> out;
  out.reserve(corpus.size());
  for (const AnnotatedSegment& seg : corpus.segments()) {
    const auto it = bounds.find(BoundsKey{seg.scheme, seg.lang_pair});
    if (it == bounds.end()) {
      throw config_error("no bounds for group " +
                         BoundsKey{seg.scheme, seg.lang_pair}.label());
    }
    AnnotatedSegment copy = seg;
    if (it->second.degenerate() && policy == DegeneratePolicy::midpoint) {
      copy.norm_score = 0.5;
    } else {
      copy.norm_score = normalize_value(seg.raw_score, it->second);
    }
    out.push_back(std::move(copy));
  }
  return Corpus::from_segments(std::move(out));
}

void write_bounds_tsv(const BoundsMap& bounds, std::ostream& out) {
  out << "scheme\tlang_pair\tmin\tmax\tn\n";
  for (const auto& [key, b] : bounds) {
    (void)key;
    out << to_string(b.scheme) << '\t' << b.lang_pair << '\t'
        << format_double(b.min) << '\t' << format_double(b.max) << '\t'
        << b.n_observed << '\n';
  }
}

BoundsMap read_bounds_tsv(std::istream& in) {
  BoundsMap out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (!line.empty() && line[0] == '#') continue;
      header_seen = true;  // header row
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 5) {
      throw row_error(line_no, "expected 5 fields in bounds file, got " +
                                   std::to_string(fields.size()));
    }
    const auto scheme = scheme_from_string(fields[0]);
    if (!scheme) {
      throw row_error(line_no, "unknown scheme '" + std::string(fields[0]) + "'");
    }
    const auto min = parse_double(fields[2]);
    const auto max = parse_double(fields[3]);
    const auto n = parse_u64(fields[4]);
    if (!min || !max || !std::isfinite(*min) || !std::isfinite(*max)) {
      throw row_error(line_no, "non-numeric bounds");
    }
    if (*min > *max) throw row_error(line_no, "min greater than max");
    if (!n) throw row_error(line_no, "bad observation count");
    const BoundsKey key{*scheme, std::string(fields[1])};
    if (out.count(key)) {
      throw row_error(line_no, "duplicate bounds for group " + key.label());
    }
    out[key] = ScaleBounds{*min, *max, *scheme, std::string(fields[1]), *n};
  }
  return out;
}

BoundsMap read_bounds_tsv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw schema_error("cannot open bounds file: " + path.string());
  return read_bounds_tsv(in);
}

}  // namespace longspan
