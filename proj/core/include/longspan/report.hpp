#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "longspan/corpus.hpp"
#include "longspan/scorers.hpp"
#include "longspan/stats.hpp"

namespace longspan {

enum class ReportLevel { segment, system };

// Which gold score the correlations run against. auto_detect picks the
// normalized score when every segment carries one, the raw score otherwise.
enum class GoldField { auto_detect, raw, norm };

// Grouping keys for segment-level reports. With both set, one group per
// (lang_pair, scheme); with neither, a single "all" group.
struct GroupBySpec {
  bool lang_pair = true;
  bool scheme = true;
};

struct ReportRow {
  std::string group;
  std::string metric;  // "pearson", "spearman", or "skipped"
  std::optional<double> coefficient;
  std::size_t n = 0;  // points correlated; groups averaged for "avg." rows
  std::string note;   // reason, for skipped rows
};

struct EvalReport {
  ReportLevel level = ReportLevel::segment;
  std::string scorer_name;
  std::string gold;  // "raw_score" or "norm_score"
  std::vector<ReportRow> rows;
  std::optional<Histogram> histogram;
  std::string config_fingerprint;  // hex digest, empty outside pipeline runs
};

// Pearson + Spearman per group over (gold, predicted) segment pairs, plus an
// unweighted "avg." row per metric when two or more groups contributed.
// Groups with fewer than 2 segments become "skipped" rows. Pairs are taken
// in segment-id order, so the result is independent of corpus row order.
EvalReport segment_report(const ScoreVector& pred, const Corpus& corpus,
                          const GroupBySpec& group_by = {},
                          GoldField gold = GoldField::auto_detect);

// Within each (lang_pair, scheme): per-system mean predicted and mean gold
// score, then Pearson + Spearman across systems. A group with fewer than two
// systems raises degenerate_error.
EvalReport system_report(const ScoreVector& pred, const Corpus& corpus,
                         GoldField gold = GoldField::auto_detect);

// Metadata as '#key=value' comment lines, then 'group metric coefficient n
// note' rows, full precision. Extra comment lines from the caller land after
// the metadata.
void write_report_tsv(const EvalReport& report, std::ostream& out,
                      const std::vector<std::string>& comments = {});
void write_report_tsv_file(const EvalReport& report, const std::string& path,
                           const std::vector<std::string>& comments = {});

// Aligned human-readable table, coefficients at 3 decimal places; includes
// the attached histogram when present.
std::string render_report_table(const EvalReport& report);

}  // namespace longspan
