#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "longspan/corpus.hpp"

namespace longspan {

// Maps each segment field to the header name that carries it. The defaults
// match the toolkit's own output; ingesting third-party files (differently
// named columns, extra columns) only needs the names remapped.
// ref, norm_score and span_size are optional: when their column is absent the
// field stays at its default (no reference / no norm_score / span 1).
struct ColumnMap {
  std::string id = "id";
  std::string lang_pair = "lang_pair";
  std::string scheme = "scheme";
  std::string system = "system";
  std::string doc = "doc";
  std::string seg_index = "seg_index";
  std::string source = "src";
  std::string hypothesis = "mt";
  std::string reference = "ref";
  std::string raw_score = "raw_score";
  std::string norm_score = "norm_score";
  std::string span_size = "span_size";

  // Applies overrides of the form "field=header,field=header". Field names
  // are the struct members above. Throws config_error on unknown fields.
  static ColumnMap parse(std::string_view spec);
};

// Reads a UTF-8 TSV corpus. A header row is required; LF and CRLF line
// endings are accepted; lines starting with '#' before the header are
// skipped. An empty stream yields an empty corpus. Throws schema_error when a
// required mapped column is missing from the header, row_error (with the
// 1-based line number) for malformed rows, duplicate ids, or out-of-range
// values.
Corpus parse_tsv(std::istream& in, const ColumnMap& columns = {});
Corpus parse_tsv_file(const std::filesystem::path& path,
                      const ColumnMap& columns = {});

// Writes the corpus with the default header, LF line endings, input row
// order. Text fields containing a tab or newline raise serialization_error;
// no quoting dialect exists. Scores are written as shortest round-trip
// decimals, so parse_tsv(write_tsv(c)) == c.
void write_tsv(const Corpus& corpus, std::ostream& out);
// Convenience: opens the file, writes optional '#'-prefixed comment lines
// first (pass lines without the leading '#'), then the corpus.
void write_tsv_file(const Corpus& corpus, const std::filesystem::path& path,
                    const std::vector<std::string>& comments = {});

}  // namespace longspan
