#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "longspan/chrf.hpp"
#include "longspan/corpus.hpp"

namespace longspan {

// Predicted quality scores joined to segments by id. All scores are finite;
// the range hint declares the scorer's native output range for downstream
// binning and display.
struct ScoreVector {
  std::map<std::string, double> entries;
  std::string scorer_name;
  double range_lo = 0.0;
  double range_hi = 1.0;
};

struct ChrfScorer {
  ChrfParams params;
};

// One child process per invocation, driven over the line protocol: we write
// "#longspan-scorer-v1" then one "id<TAB>src<TAB>mt<TAB>ref" line per segment
// (ref empty when absent) to its stdin, and read "id<TAB>score" lines from
// its stdout. Output order is irrelevant; the join is by id.
struct ExternalScorerConfig {
  std::string command;  // run via /bin/sh -c
  // Unset: LONGSPAN_SCORER_TIMEOUT_SECS if present, otherwise 600.
  std::optional<std::uint64_t> timeout_secs;
  std::string name = "external";
};

std::uint64_t effective_scorer_timeout(const ExternalScorerConfig& config);

// Scores every segment with chrF over (hypothesis, reference). Work fans out
// over `jobs` threads (0 = available cores); the result is identical for any
// job count. Throws integrity_error naming the first segment that lacks a
// reference.
ScoreVector score_corpus(const Corpus& corpus, const ChrfScorer& scorer,
                         unsigned jobs = 0);

// Spawns the child, streams the corpus in, joins its output by id and checks
// exact coverage. Nonzero child exit or a signal raises scorer_error carrying
// captured stderr; malformed output lines raise protocol_error; exceeding the
// timeout kills the child and raises timeout_error.
ScoreVector run_external_scorer(const ExternalScorerConfig& config,
                                const Corpus& corpus);

// Reads a two-column "id<TAB>score" TSV (no header; '#' comment lines and
// blank lines are skipped) and joins it against the corpus. Malformed or
// non-finite lines raise row_error; duplicate ids raise integrity_error;
// unknown or missing ids raise integrity/coverage errors.
ScoreVector load_external_scores(std::istream& in, const Corpus& corpus,
                                 std::string scorer_name = "file");
ScoreVector load_external_scores_file(const std::string& path,
                                      const Corpus& corpus);

// "id<TAB>score" lines in id order, scores in shortest round-trip form.
// Comment lines, if any, are written first with a leading '#'.
void write_scores_tsv(const ScoreVector& scores, std::ostream& out,
                      const std::vector<std::string>& comments = {});
void write_scores_tsv_file(const ScoreVector& scores, const std::string& path,
                           const std::vector<std::string>& comments = {});

// Entries must cover the corpus exactly: an id absent from the corpus raises
// integrity_error; corpus ids absent from the entries raise coverage_error
// listing the missing ids (truncated past 20).
void check_coverage(const std::map<std::string, double>& entries,
                    const Corpus& corpus);

}  // namespace longspan
