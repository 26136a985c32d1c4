#include "longspan/tsv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "longspan/errors.hpp"
#include "longspan/util.hpp"

namespace longspan {

namespace {

constexpr std::size_t k_no_column = std::numeric_limits<std::size_t>::max();

struct ColumnIndex {
  std::size_t id, lang_pair, scheme, system, doc, seg_index, source, hypothesis;
  std::size_t reference = k_no_column;
  std::size_t raw_score = 0;
  std::size_t norm_score = k_no_column;
  std::size_t span_size = k_no_column;
  std::size_t width = 0;
};

// Reads one physical line, stripping a trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

ColumnIndex resolve_header(std::string_view header_line, const ColumnMap& columns,
                           std::size_t line_no) {
  const auto names = split_tabs(header_line);
  std::unordered_map<std::string_view, std::size_t> positions;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto [it, inserted] = positions.emplace(names[i], i);
    (void)it;
    if (!inserted) {
      throw row_error(line_no, "duplicate column '" + std::string(names[i]) +
                                   "' in header");
    }
  }
  const auto required = [&](const std::string& name) {
    const auto it = positions.find(name);
    if (it == positions.end()) {
      throw schema_error("missing column '" + name + "'");
    }
    return it->second;
  };
  const auto optional = [&](const std::string& name) {
    const auto it = positions.find(name);
    return it == positions.end() ? k_no_column : it->second;
  };

  ColumnIndex idx{};
  idx.id = required(columns.id);
  idx.lang_pair = required(columns.lang_pair);
  idx.scheme = required(columns.scheme);
  idx.system = required(columns.system);
  idx.doc = required(columns.doc);
  idx.seg_index = required(columns.seg_index);
  idx.source = required(columns.source);
  idx.hypothesis = required(columns.hypothesis);
  idx.raw_score = required(columns.raw_score);
  idx.reference = optional(columns.reference);
  idx.norm_score = optional(columns.norm_score);
  idx.span_size = optional(columns.span_size);
  idx.width = names.size();
  return idx;
}

void check_writable_field(std::string_view value, std::string_view column,
                          std::string_view id) {
  if (value.find('\t') != std::string_view::npos ||
      value.find('\n') != std::string_view::npos ||
      value.find('\r') != std::string_view::npos) {
    throw serialization_error("field '" + std::string(column) +
                              "' of segment '" + std::string(id) +
                              "' contains a tab or newline; the TSV format "
                              "has no escaping dialect");
  }
}

}  // namespace

ColumnMap ColumnMap::parse(std::string_view spec) {
  ColumnMap map;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    if (comma == std::string_view::npos) comma = spec.size();
    const std::string_view item = trim(spec.substr(start, comma - start));
    start = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw config_error("column override '" + std::string(item) +
                         "' is not of the form field=header");
    }
    const std::string_view field = trim(item.substr(0, eq));
    const std::string header(trim(item.substr(eq + 1)));
    if (header.empty()) {
      throw config_error("column override for '" + std::string(field) +
                         "' has an empty header name");
    }
    if (field == "id") map.id = header;
    else if (field == "lang_pair") map.lang_pair = header;
    else if (field == "scheme") map.scheme = header;
    else if (field == "system") map.system = header;
    else if (field == "doc") map.doc = header;
    else if (field == "seg_index") map.seg_index = header;
    else if (field == "src") map.source = header;
    else if (field == "mt") map.hypothesis = header;
    else if (field == "ref") map.reference = header;
    else if (field == "raw_score") map.raw_score = header;
    else if (field == "norm_score") map.norm_score = header;
    else if (field == "span_size") map.span_size = header;
    else {
      throw config_error("unknown column field '" + std::string(field) +
                         "' (expected id, lang_pair, scheme, system, doc, "
                         "seg_index, src, mt, ref, raw_score, norm_score, "
                         "span_size)");
    }
  }
  return map;
}

Corpus parse_tsv(std::istream& in, const ColumnMap& columns) {
  std::string line;
  std::size_t line_no = 0;

  // Locate the header: skip leading '#' comment lines (artifacts carry a
  // fingerprint comment). An empty stream is an empty corpus, not an error.
  bool have_header = false;
  while (read_line(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line[0] == '\xEF' &&
        line[1] == '\xBB' && line[2] == '\xBF') {
      line.erase(0, 3);  // UTF-8 BOM
    }
    if (!line.empty() && line[0] == '#') continue;
    have_header = true;
    break;
  }
  if (!have_header) return Corpus{};

  const ColumnIndex idx = resolve_header(line, columns, line_no);

  std::vector<AnnotatedSegment> segments;
  std::unordered_set<std::string> seen_ids;
  while (read_line(in, line)) {
    ++line_no;
    const auto fields = split_tabs(line);
    if (fields.size() != idx.width) {
      throw row_error(line_no, "expected " + std::to_string(idx.width) +
                                   " fields, got " +
                                   std::to_string(fields.size()));
    }

    AnnotatedSegment seg;
    seg.id = std::string(fields[idx.id]);
    if (seg.id.empty()) throw row_error(line_no, "empty id");
    if (!seen_ids.insert(seg.id).second) {
      throw row_error(line_no, "duplicate id '" + seg.id + "'");
    }
    seg.lang_pair = std::string(fields[idx.lang_pair]);

    const auto scheme = scheme_from_string(fields[idx.scheme]);
    if (!scheme) {
      throw row_error(line_no, "unknown scheme '" +
                                   std::string(fields[idx.scheme]) +
                                   "' (expected DA, MQM, SQM or ESA)");
    }
    seg.scheme = *scheme;

    seg.system_id = std::string(fields[idx.system]);
    seg.doc_id = std::string(fields[idx.doc]);

    const auto seg_index = parse_u64(fields[idx.seg_index]);
    if (!seg_index) {
      throw row_error(line_no, "seg_index '" +
                                   std::string(fields[idx.seg_index]) +
                                   "' is not a non-negative integer");
    }
    seg.seg_index = *seg_index;

    seg.source = std::string(fields[idx.source]);
    seg.hypothesis = std::string(fields[idx.hypothesis]);
    if (idx.reference != k_no_column && !fields[idx.reference].empty()) {
      seg.reference = std::string(fields[idx.reference]);
    }

    const auto raw = parse_double(fields[idx.raw_score]);
    if (!raw || !std::isfinite(*raw)) {
      throw row_error(line_no, "score '" + std::string(fields[idx.raw_score]) +
                                   "' is not a finite number");
    }
    seg.raw_score = *raw;

    if (idx.norm_score != k_no_column && !fields[idx.norm_score].empty()) {
      const auto norm = parse_double(fields[idx.norm_score]);
      if (!norm || !std::isfinite(*norm)) {
        throw row_error(line_no, "norm_score '" +
                                     std::string(fields[idx.norm_score]) +
                                     "' is not a finite number");
      }
      if (*norm < 0.0 || *norm > 1.0) {
        throw row_error(line_no, "norm_score " + format_double(*norm) +
                                     " outside [0,1]");
      }
      seg.norm_score = *norm;
    }

    if (idx.span_size != k_no_column && !fields[idx.span_size].empty()) {
      const auto span = parse_u64(fields[idx.span_size]);
      if (!span || *span < 1 ||
          *span > std::numeric_limits<std::uint32_t>::max()) {
        throw row_error(line_no, "span_size '" +
                                     std::string(fields[idx.span_size]) +
                                     "' is not a positive integer");
      }
      seg.span_size = static_cast<std::uint32_t>(*span);
    }

    segments.push_back(std::move(seg));
  }
  return Corpus::from_segments(std::move(segments));
}

Corpus parse_tsv_file(const std::filesystem::path& path,
                      const ColumnMap& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw schema_error("cannot open corpus file: " + path.string());
  return parse_tsv(in, columns);
}

void write_tsv(const Corpus& corpus, std::ostream& out) {
  const ColumnMap d{};
  out << d.id << '\t' << d.lang_pair << '\t' << d.scheme << '\t' << d.system
      << '\t' << d.doc << '\t' << d.seg_index << '\t' << d.source << '\t'
      << d.hypothesis << '\t' << d.reference << '\t' << d.raw_score << '\t'
      << d.norm_score << '\t' << d.span_size << '\n';
  for (const AnnotatedSegment& seg : corpus.segments()) {
    check_writable_field(seg.id, "id", seg.id);
    check_writable_field(seg.lang_pair, "lang_pair", seg.id);
    check_writable_field(seg.system_id, "system", seg.id);
    check_writable_field(seg.doc_id, "doc", seg.id);
    check_writable_field(seg.source, "src", seg.id);
    check_writable_field(seg.hypothesis, "mt", seg.id);
    if (seg.reference) check_writable_field(*seg.reference, "ref", seg.id);

    out << seg.id << '\t' << seg.lang_pair << '\t' << to_string(seg.scheme)
        << '\t' << seg.system_id << '\t' << seg.doc_id << '\t' << seg.seg_index
        << '\t' << seg.source << '\t' << seg.hypothesis << '\t'
        << (seg.reference ? *seg.reference : std::string{}) << '\t'
        << format_double(seg.raw_score) << '\t'
        << (seg.norm_score ? format_double(*seg.norm_score) : std::string{})
        << '\t' << seg.span_size << '\n';
  }
}

void write_tsv_file(const Corpus& corpus, const std::filesystem::path& path,
                    const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw schema_error("cannot write corpus file: " + path.string());
  for (const std::string& c : comments) out << '#' << c << '\n';
  write_tsv(corpus, out);
  out.flush();
  if (!out) throw schema_error("write failed: " + path.string());
}

}  // namespace longspan
