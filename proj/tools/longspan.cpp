#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "longspan/augment.hpp"
#include "longspan/chrf.hpp"
#include "longspan/corpus.hpp"
#include "longspan/errors.hpp"
#include "longspan/normalize.hpp"
#include "longspan/report.hpp"
#include "longspan/scorers.hpp"
#include "longspan/split.hpp"
#include "longspan/stats.hpp"
#include "longspan/tsv.hpp"
#include "longspan/util.hpp"
#include "longspan/version.hpp"

namespace fs = std::filesystem;
using namespace longspan;

namespace {

// ---------------------------------------------------------------- helpers

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool parse_bool_value(const std::string& value, const std::string& key) {
  const std::string v = lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw config_error(key + ": expected true or false, got '" + value + "'");
}

double parse_double_value(const std::string& value, const std::string& key) {
  const auto d = parse_double(value);
  if (!d) throw config_error(key + ": expected a number, got '" + value + "'");
  return *d;
}

std::uint64_t parse_u64_value(const std::string& value,
                              const std::string& key) {
  const auto n = parse_u64(value);
  if (!n) {
    throw config_error(key + ": expected a non-negative integer, got '" +
                       value + "'");
  }
  return *n;
}

std::vector<int> parse_k_list(const std::string& text, const std::string& key) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item{trim(text.substr(pos, comma - pos))};
    if (!item.empty()) {
      const auto n = parse_u64(item);
      if (!n || *n > 1000) {
        throw config_error(key + ": bad span width '" + item + "'");
      }
      out.push_back(static_cast<int>(*n));
    }
    pos = comma + 1;
  }
  if (out.empty()) throw config_error(key + ": no span widths given");
  return out;
}

// Config values are trimmed, so whitespace separators use escapes:
// \s space, \t tab, \n newline, \\ backslash.
std::string unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    ++i;
    switch (s[i]) {
      case 's': out.push_back(' '); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case '\\': out.push_back('\\'); break;
      default:
        out.push_back('\\');
        out.push_back(s[i]);
    }
  }
  return out;
}

BoundsGrouping grouping_from(const std::string& value,
                             const std::string& key) {
  const std::string v = lower(value);
  if (v == "scheme_lang_pair") return BoundsGrouping::scheme_lang_pair;
  if (v == "scheme") return BoundsGrouping::scheme;
  if (v == "global") return BoundsGrouping::global;
  throw config_error(key +
                     ": expected scheme_lang_pair, scheme or global, got '" +
                     value + "'");
}

DegeneratePolicy policy_from(const std::string& value,
                             const std::string& key) {
  const std::string v = lower(value);
  if (v == "error") return DegeneratePolicy::error;
  if (v == "midpoint") return DegeneratePolicy::midpoint;
  throw config_error(key + ": expected error or midpoint, got '" + value +
                     "'");
}

SplitUnit unit_from(const std::string& value, const std::string& key) {
  const std::string v = lower(value);
  if (v == "segment") return SplitUnit::segment;
  if (v == "document") return SplitUnit::document;
  throw config_error(key + ": expected segment or document, got '" + value +
                     "'");
}

GoldField gold_from(const std::string& value, const std::string& key) {
  const std::string v = lower(value);
  if (v == "auto") return GoldField::auto_detect;
  if (v == "raw") return GoldField::raw;
  if (v == "norm") return GoldField::norm;
  throw config_error(key + ": expected auto, raw or norm, got '" + value +
                     "'");
}

enum class Level { segment, system, both };

Level level_from(const std::string& value, const std::string& key) {
  const std::string v = lower(value);
  if (v == "segment") return Level::segment;
  if (v == "system") return Level::system;
  if (v == "both") return Level::both;
  throw config_error(key + ": expected segment, system or both, got '" +
                     value + "'");
}

GroupBySpec group_by_from(const std::string& value, const std::string& key) {
  GroupBySpec spec{false, false};
  if (lower(value) == "none") return spec;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = std::min(value.find(',', pos), value.size());
    const std::string item = lower(std::string(trim(value.substr(pos, comma - pos))));
    if (item == "lang_pair") {
      spec.lang_pair = true;
    } else if (item == "scheme") {
      spec.scheme = true;
    } else if (!item.empty()) {
      throw config_error(key + ": expected lang_pair, scheme or none, got '" +
                         item + "'");
    }
    pos = comma + 1;
  }
  return spec;
}

struct ScorerChoice {
  enum class Kind { chrf, file, command };
  Kind kind = Kind::chrf;
  std::string arg;
};

ScorerChoice scorer_from(const std::string& value, const std::string& key) {
  if (lower(value) == "chrf") return {ScorerChoice::Kind::chrf, ""};
  if (value.starts_with("file:")) {
    return {ScorerChoice::Kind::file, value.substr(5)};
  }
  if (value.starts_with("cmd:")) {
    return {ScorerChoice::Kind::command, value.substr(4)};
  }
  throw config_error(key + ": expected chrf, file:PATH or cmd:COMMAND, got '" +
                     value + "'");
}

std::string scorer_description(const ScorerChoice& choice,
                               const ChrfParams& chrf_params) {
  switch (choice.kind) {
    case ScorerChoice::Kind::chrf:
      return "chrf[max_n=" + std::to_string(chrf_params.max_n) +
             ",beta=" + format_double(chrf_params.beta) +
             (chrf_params.strip_whitespace ? ",strip_whitespace" : "") + "]";
    case ScorerChoice::Kind::file:
      return "file:" + choice.arg;
    case ScorerChoice::Kind::command:
      return "cmd:" + choice.arg;
  }
  return "";
}

ScoreVector compute_scores(const Corpus& corpus, const ScorerChoice& choice,
                           const ChrfParams& chrf_params,
                           std::optional<std::uint64_t> timeout_secs,
                           unsigned jobs) {
  switch (choice.kind) {
    case ScorerChoice::Kind::chrf:
      return score_corpus(corpus, ChrfScorer{chrf_params}, jobs);
    case ScorerChoice::Kind::file:
      return load_external_scores_file(choice.arg, corpus);
    case ScorerChoice::Kind::command: {
      ExternalScorerConfig cfg;
      cfg.command = choice.arg;
      cfg.timeout_secs = timeout_secs;
      cfg.name = "cmd:" + choice.arg;
      return run_external_scorer(cfg, corpus);
    }
  }
  throw argument_error("unreachable scorer kind");
}

ColumnMap column_map_from(const std::string& spec) {
  return spec.empty() ? ColumnMap{} : ColumnMap::parse(spec);
}

// Canonical settings digest embedded in every artifact a command writes.
std::string settings_fingerprint(
    const std::map<std::string, std::string>& settings) {
  std::string canon;
  for (const auto& [k, v] : settings) {
    canon += k;
    canon += '=';
    canon += v;
    canon += '\n';
  }
  return hex16(fnv1a64(canon));
}

std::vector<std::string> artifact_comments(const std::string& fingerprint) {
  return {"fingerprint=" + fingerprint,
          "generator=longspan " + std::string(k_version)};
}

void write_bounds_file(const BoundsMap& bounds, const fs::path& path,
                       const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw schema_error("cannot open for writing: " + path.string());
  for (const auto& c : comments) out << '#' << c << '\n';
  write_bounds_tsv(bounds, out);
  out.flush();
  if (!out) throw schema_error("write failed: " + path.string());
}

void write_histogram_file(const Histogram& hist, const fs::path& path,
                          const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw schema_error("cannot open for writing: " + path.string());
  write_histogram_tsv(hist, out, comments);
  out.flush();
  if (!out) throw schema_error("write failed: " + path.string());
}

void write_esa_scores_file(const ScoreVector& scores, const fs::path& path,
                           const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw schema_error("cannot open for writing: " + path.string());
  for (const auto& c : comments) out << '#' << c << '\n';
  for (const auto& [id, score] : scores.entries) {
    out << id << '\t' << rescale_esa(score) << '\n';
  }
  out.flush();
  if (!out) throw schema_error("write failed: " + path.string());
}

// Strips a trailing ".tsv" so derived artifact names read base.segment.tsv
// rather than base.tsv.segment.tsv.
std::string report_base(const std::string& path) {
  if (path.ends_with(".tsv")) return path.substr(0, path.size() - 4);
  return path;
}

// ---------------------------------------------------------------- ingest

struct IngestOpts {
  std::string input;
  std::string output;
  std::string column_map;
};

void cmd_ingest(const IngestOpts& opts) {
  const Corpus corpus =
      parse_tsv_file(opts.input, column_map_from(opts.column_map));
  const std::map<std::string, std::string> settings = {
      {"command", "ingest"},
      {"column_map", opts.column_map},
      {"input", opts.input},
  };
  write_tsv_file(corpus, opts.output,
                 artifact_comments(settings_fingerprint(settings)));
  std::cout << "ingested " << corpus.size() << " segment(s) -> "
            << opts.output << "\n";
}

// ------------------------------------------------------------- normalize

struct NormalizeOpts {
  std::string input;
  std::string output;
  std::string column_map;
  std::string bounds_in;    // fit from input when empty
  std::string bounds_out;   // optional
  std::string grouping = "scheme_lang_pair";
  std::string degenerate = "error";
};

void cmd_normalize(const NormalizeOpts& opts) {
  const Corpus corpus =
      parse_tsv_file(opts.input, column_map_from(opts.column_map));
  const BoundsGrouping grouping = grouping_from(opts.grouping, "--grouping");
  const DegeneratePolicy policy = policy_from(opts.degenerate, "--degenerate");

  const BoundsMap bounds = opts.bounds_in.empty()
                               ? fit_bounds(corpus, grouping)
                               : read_bounds_tsv_file(opts.bounds_in);
  const Corpus normalized = normalize_corpus(corpus, bounds, policy);

  const std::map<std::string, std::string> settings = {
      {"command", "normalize"},
      {"column_map", opts.column_map},
      {"input", opts.input},
      {"bounds", opts.bounds_in.empty() ? ":fit" : opts.bounds_in},
      {"grouping", opts.grouping},
      {"degenerate", opts.degenerate},
  };
  const auto comments = artifact_comments(settings_fingerprint(settings));
  write_tsv_file(normalized, opts.output, comments);
  if (!opts.bounds_out.empty()) {
    write_bounds_file(bounds, opts.bounds_out, comments);
  }
  std::cout << "normalized " << normalized.size() << " segment(s) over "
            << bounds.size() << " scale group(s) -> " << opts.output << "\n";
}

// --------------------------------------------------------------- augment

struct AugmentOpts {
  std::string input;
  std::string output;
  std::string column_map;
  std::string k = "2,3,4,5";
  int stride = 1;
  std::string separator = "\\s";
  bool no_originals = false;
  std::string score_field = "raw";
};

AugmentConfig augment_config_from(const std::string& k, int stride,
                                  const std::string& separator,
                                  bool include_originals,
                                  const std::string& score_field,
                                  const std::string& key_prefix) {
  AugmentConfig config;
  config.k_values = parse_k_list(k, key_prefix + "k");
  config.stride = stride;
  config.separator = unescape(separator);
  config.include_originals = include_originals;
  const std::string field = lower(score_field);
  if (field == "raw") {
    config.score_field = ScoreField::raw;
  } else if (field == "norm") {
    config.score_field = ScoreField::normalized;
  } else {
    throw config_error(key_prefix + "score_field: expected raw or norm, got '" +
                       score_field + "'");
  }
  config.validate();
  return config;
}

void cmd_augment(const AugmentOpts& opts) {
  const Corpus corpus =
      parse_tsv_file(opts.input, column_map_from(opts.column_map));
  const AugmentConfig config = augment_config_from(
      opts.k, opts.stride, opts.separator, !opts.no_originals,
      opts.score_field, "--");
  const Corpus augmented = augment_corpus(corpus, config);

  const std::map<std::string, std::string> settings = {
      {"command", "augment"},
      {"column_map", opts.column_map},
      {"input", opts.input},
      {"k", opts.k},
      {"stride", std::to_string(opts.stride)},
      {"separator", opts.separator},
      {"include_originals", opts.no_originals ? "false" : "true"},
      {"score_field", opts.score_field},
  };
  write_tsv_file(augmented, opts.output,
                 artifact_comments(settings_fingerprint(settings)));
  std::cout << "augmented " << corpus.size() << " -> " << augmented.size()
            << " segment(s) -> " << opts.output << "\n";
}

// ----------------------------------------------------------------- split

struct SplitOpts {
  std::string input;
  std::string prefix;
  std::string column_map;
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
  std::uint64_t seed = 0;
  std::string unit = "segment";
};

void cmd_split(const SplitOpts& opts) {
  const Corpus corpus =
      parse_tsv_file(opts.input, column_map_from(opts.column_map));
  SplitSpec spec;
  spec.train = opts.train;
  spec.dev = opts.dev;
  spec.test = opts.test;
  spec.seed = opts.seed;
  spec.unit = unit_from(opts.unit, "--unit");
  const SplitResult result = split_corpus(corpus, spec);
  for (const auto& warning : result.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }

  const std::map<std::string, std::string> settings = {
      {"command", "split"},
      {"column_map", opts.column_map},
      {"input", opts.input},
      {"train", format_double(opts.train)},
      {"dev", format_double(opts.dev)},
      {"test", format_double(opts.test)},
      {"seed", std::to_string(opts.seed)},
      {"unit", opts.unit},
  };
  const auto comments = artifact_comments(settings_fingerprint(settings));
  write_tsv_file(result.train, opts.prefix + ".train.tsv", comments);
  write_tsv_file(result.dev, opts.prefix + ".dev.tsv", comments);
  write_tsv_file(result.test, opts.prefix + ".test.tsv", comments);
  std::cout << "split " << corpus.size() << " segment(s) -> "
            << result.train.size() << " train / " << result.dev.size()
            << " dev / " << result.test.size() << " test (" << opts.prefix
            << ".{train,dev,test}.tsv)\n";
}

// ----------------------------------------------------------------- score

struct ScoreOpts {
  std::string input;
  std::string output;
  std::string column_map;
  std::string scorer = "chrf";
  int max_n = 6;
  double beta = 2.0;
  bool strip_whitespace = false;
  std::optional<std::uint64_t> timeout_secs;
  bool esa = false;
  unsigned jobs = 0;
};

void cmd_score(const ScoreOpts& opts) {
  const Corpus corpus =
      parse_tsv_file(opts.input, column_map_from(opts.column_map));
  const ScorerChoice choice = scorer_from(opts.scorer, "--scorer");
  ChrfParams chrf_params;
  chrf_params.max_n = opts.max_n;
  chrf_params.beta = opts.beta;
  chrf_params.strip_whitespace = opts.strip_whitespace;

  const ScoreVector scores =
      compute_scores(corpus, choice, chrf_params, opts.timeout_secs, opts.jobs);

  const std::map<std::string, std::string> settings = {
      {"command", "score"},
      {"column_map", opts.column_map},
      {"input", opts.input},
      {"scorer", scorer_description(choice, chrf_params)},
      {"esa", opts.esa ? "true" : "false"},
  };
  const auto comments = artifact_comments(settings_fingerprint(settings));
  if (opts.esa) {
    write_esa_scores_file(scores, opts.output, comments);
  } else {
    write_scores_tsv_file(scores, opts.output, comments);
  }
  std::cout << "scored " << scores.entries.size() << " segment(s) with "
            << scores.scorer_name << " -> " << opts.output << "\n";
}

// ------------------------------------------------------------- correlate

struct CorrelateOpts {
  std::string input;
  std::string scores;
  std::string output;
  std::string column_map;
  std::string level = "both";
  std::string group_by = "lang_pair,scheme";
  std::string gold = "auto";
};

void cmd_correlate(const CorrelateOpts& opts) {
  const Corpus corpus =
      parse_tsv_file(opts.input, column_map_from(opts.column_map));
  const ScoreVector scores = load_external_scores_file(opts.scores, corpus);
  const Level level = level_from(opts.level, "--level");
  const GroupBySpec group_by = group_by_from(opts.group_by, "--group-by");
  const GoldField gold = gold_from(opts.gold, "--gold");

  const std::map<std::string, std::string> settings = {
      {"command", "correlate"},
      {"column_map", opts.column_map},
      {"input", opts.input},
      {"scores", opts.scores},
      {"level", opts.level},
      {"group_by", opts.group_by},
      {"gold", opts.gold},
  };
  const std::string fingerprint = settings_fingerprint(settings);

  std::vector<std::string> written;
  const auto emit = [&](ReportLevel report_level) {
    EvalReport report =
        report_level == ReportLevel::segment
            ? segment_report(scores, corpus, group_by, gold)
            : system_report(scores, corpus, gold);
    report.config_fingerprint = fingerprint;
    std::string path = opts.output;
    if (level == Level::both) {
      path = report_base(opts.output) +
             (report_level == ReportLevel::segment ? ".segment.tsv"
                                                   : ".system.tsv");
    }
    write_report_tsv_file(report, path);
    written.push_back(path);
    std::cout << render_report_table(report);
  };

  if (level != Level::system) emit(ReportLevel::segment);
  if (level != Level::segment) emit(ReportLevel::system);
  std::cout << "wrote " << join(written, ", ") << "\n";
}

// ------------------------------------------------------------------ hist

struct HistOpts {
  std::string scores;
  std::string output;
  std::size_t bins = 20;
  double lo = 0.0;
  double hi = 1.0;
};

void cmd_hist(const HistOpts& opts) {
  std::ifstream in(opts.scores, std::ios::binary);
  if (!in) throw schema_error("cannot open score file: " + opts.scores);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() > 2) {
      throw row_error(line_no, "expected a score or id<TAB>score, got " +
                                   std::to_string(fields.size()) + " fields");
    }
    const auto score = parse_double(fields.back());
    if (!score) {
      throw row_error(line_no, "unparseable score '" +
                                   std::string(fields.back()) + "'");
    }
    values.push_back(*score);
  }

  const Histogram hist = histogram(values, opts.bins, opts.lo, opts.hi);
  const std::map<std::string, std::string> settings = {
      {"command", "hist"},
      {"scores", opts.scores},
      {"bins", std::to_string(opts.bins)},
      {"lo", format_double(opts.lo)},
      {"hi", format_double(opts.hi)},
  };
  write_histogram_file(hist, opts.output,
                       artifact_comments(settings_fingerprint(settings)));
  std::cout << "histogram of " << values.size() << " score(s) into "
            << hist.bins.size() << " bin(s) -> " << opts.output << "\n";
}

// ------------------------------------------------------------------- run

const std::map<std::string, std::string> k_run_defaults = {
    {"input", ""},
    {"column_map", ""},
    {"order", "augment_then_split"},
    {"normalize.enabled", "true"},
    {"normalize.grouping", "scheme_lang_pair"},
    {"normalize.degenerate", "error"},
    {"normalize.bounds", ""},
    {"augment.enabled", "true"},
    {"augment.k", "2,3,4,5"},
    {"augment.stride", "1"},
    {"augment.separator", "\\s"},
    {"augment.include_originals", "true"},
    {"augment.score_field", "auto"},
    {"split.enabled", "true"},
    {"split.train", "0.8"},
    {"split.dev", "0.1"},
    {"split.test", "0.1"},
    {"split.seed", "0"},
    {"split.unit", "segment"},
    {"scorer", "chrf"},
    {"chrf.max_n", "6"},
    {"chrf.beta", "2"},
    {"chrf.strip_whitespace", "false"},
    {"scorer.timeout_secs", ""},
    {"gold", "auto"},
    {"level", "both"},
    {"esa", "false"},
    {"hist.enabled", "true"},
    {"hist.bins", "20"},
    {"hist.lo", "0"},
    {"hist.hi", "1"},
    {"out_dir", ""},
    {"jobs", "0"},
};

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file: " + path);
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string_view::npos) {
      throw config_error(path + ":" + std::to_string(line_no) +
                         ": expected key = value");
    }
    const std::string key{trim(stripped.substr(0, eq))};
    const std::string value{trim(stripped.substr(eq + 1))};
    if (key.empty()) {
      throw config_error(path + ":" + std::to_string(line_no) + ": empty key");
    }
    values[key] = value;
  }
  return values;
}

struct RunOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string input;
  std::string out_dir;
  unsigned jobs = 0;
  bool jobs_given = false;
  bool force = false;
};

std::map<std::string, std::string> effective_run_config(const RunOpts& opts) {
  std::map<std::string, std::string> config = k_run_defaults;
  const auto apply = [&](const std::string& key, const std::string& value,
                         const std::string& origin) {
    if (!config.count(key)) {
      throw config_error(origin + ": unknown config key '" + key + "'");
    }
    config[key] = value;
  };
  if (!opts.config_path.empty()) {
    for (const auto& [key, value] : load_config_file(opts.config_path)) {
      apply(key, value, opts.config_path);
    }
  }
  for (const auto& set : opts.sets) {
    const std::size_t eq = set.find('=');
    if (eq == std::string::npos) {
      throw config_error("--set expects key=value, got '" + set + "'");
    }
    apply(std::string(trim(set.substr(0, eq))),
          std::string(trim(set.substr(eq + 1))), "--set");
  }
  if (!opts.input.empty()) config["input"] = opts.input;
  if (!opts.out_dir.empty()) config["out_dir"] = opts.out_dir;
  if (opts.jobs_given) config["jobs"] = std::to_string(opts.jobs);

  if (config["input"].empty()) {
    throw config_error("no input: pass --input or set input= in the config");
  }
  if (config["out_dir"].empty()) {
    throw config_error(
        "no output directory: pass --out-dir or set out_dir= in the config");
  }
  return config;
}

// The digest covers everything that shapes artifact bytes. out_dir and jobs
// are excluded on purpose: where artifacts land and how many workers compute
// them must not change what they contain.
std::string run_fingerprint(const std::map<std::string, std::string>& config) {
  std::map<std::string, std::string> canon = config;
  canon.erase("out_dir");
  canon.erase("jobs");
  canon["toolkit_version"] = k_version;
  return settings_fingerprint(canon);
}

std::string manifest_fingerprint(const fs::path& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split_tabs(line);
    if (fields.size() == 2 && fields[0] == "config_fingerprint") {
      return std::string(fields[1]);
    }
  }
  return "";
}

void cmd_run(const RunOpts& opts) {
  const std::map<std::string, std::string> config = effective_run_config(opts);
  const std::string fingerprint = run_fingerprint(config);
  const auto comments = artifact_comments(fingerprint);
  const fs::path out_dir = config.at("out_dir");
  const unsigned jobs =
      static_cast<unsigned>(parse_u64_value(config.at("jobs"), "jobs"));

  fs::create_directories(out_dir);
  const fs::path manifest_path = out_dir / "manifest.tsv";
  if (fs::exists(manifest_path) && !opts.force) {
    const std::string previous = manifest_fingerprint(manifest_path);
    if (!previous.empty() && previous != fingerprint) {
      throw config_error(
          "output directory " + out_dir.string() +
          " holds artifacts of a different configuration (fingerprint " +
          previous + ", this run " + fingerprint +
          "); use --force to overwrite");
    }
  }

  std::vector<std::pair<std::string, std::string>> checksums;
  const auto note_input = [&](const std::string& path) {
    checksums.emplace_back("checksum:" + path, hex16(fnv1a64_file(path)));
  };

  // ingest
  const std::string input = config.at("input");
  note_input(input);
  Corpus corpus = parse_tsv_file(input, column_map_from(config.at("column_map")));
  write_tsv_file(corpus, out_dir / "corpus.tsv", comments);
  std::cout << "ingest: " << corpus.size() << " segment(s)\n";

  // normalize
  const bool normalize_enabled =
      parse_bool_value(config.at("normalize.enabled"), "normalize.enabled");
  if (normalize_enabled) {
    BoundsMap bounds;
    if (config.at("normalize.bounds").empty()) {
      bounds = fit_bounds(corpus, grouping_from(config.at("normalize.grouping"),
                                                "normalize.grouping"));
    } else {
      note_input(config.at("normalize.bounds"));
      bounds = read_bounds_tsv_file(config.at("normalize.bounds"));
    }
    corpus = normalize_corpus(
        corpus, bounds,
        policy_from(config.at("normalize.degenerate"), "normalize.degenerate"));
    write_bounds_file(bounds, out_dir / "bounds.tsv", comments);
    write_tsv_file(corpus, out_dir / "normalized.tsv", comments);
    std::cout << "normalize: " << bounds.size() << " scale group(s)\n";
  }

  // augment + split, in the configured order
  const bool augment_enabled =
      parse_bool_value(config.at("augment.enabled"), "augment.enabled");
  const bool split_enabled =
      parse_bool_value(config.at("split.enabled"), "split.enabled");
  std::string score_field = config.at("augment.score_field");
  if (lower(score_field) == "auto") {
    score_field = normalize_enabled ? "norm" : "raw";
  }
  AugmentConfig augment_config;
  if (augment_enabled) {
    augment_config = augment_config_from(
        config.at("augment.k"),
        static_cast<int>(parse_u64_value(config.at("augment.stride"),
                                         "augment.stride")),
        config.at("augment.separator"),
        parse_bool_value(config.at("augment.include_originals"),
                         "augment.include_originals"),
        score_field, "augment.");
  }
  SplitSpec split_spec;
  if (split_enabled) {
    split_spec.train = parse_double_value(config.at("split.train"), "split.train");
    split_spec.dev = parse_double_value(config.at("split.dev"), "split.dev");
    split_spec.test = parse_double_value(config.at("split.test"), "split.test");
    split_spec.seed = parse_u64_value(config.at("split.seed"), "split.seed");
    split_spec.unit = unit_from(config.at("split.unit"), "split.unit");
  }

  const std::string order = lower(config.at("order"));
  if (order != "augment_then_split" && order != "split_then_augment") {
    throw config_error(
        "order: expected augment_then_split or split_then_augment, got '" +
        config.at("order") + "'");
  }

  Corpus eval_corpus;
  if (order == "augment_then_split") {
    if (augment_enabled) {
      const std::size_t before = corpus.size();
      corpus = augment_corpus(corpus, augment_config);
      write_tsv_file(corpus, out_dir / "augmented.tsv", comments);
      std::cout << "augment: " << before << " -> " << corpus.size()
                << " segment(s)\n";
    }
    if (split_enabled) {
      SplitResult result = split_corpus(corpus, split_spec);
      for (const auto& warning : result.warnings) {
        std::cerr << "warning: " << warning << "\n";
      }
      write_tsv_file(result.train, out_dir / "split.train.tsv", comments);
      write_tsv_file(result.dev, out_dir / "split.dev.tsv", comments);
      write_tsv_file(result.test, out_dir / "split.test.tsv", comments);
      std::cout << "split: " << result.train.size() << " train / "
                << result.dev.size() << " dev / " << result.test.size()
                << " test\n";
      eval_corpus = std::move(result.test);
    } else {
      eval_corpus = std::move(corpus);
    }
  } else {
    if (split_enabled) {
      SplitResult result = split_corpus(corpus, split_spec);
      for (const auto& warning : result.warnings) {
        std::cerr << "warning: " << warning << "\n";
      }
      if (augment_enabled) {
        result.train = augment_corpus(result.train, augment_config);
        result.dev = augment_corpus(result.dev, augment_config);
        result.test = augment_corpus(result.test, augment_config);
      }
      write_tsv_file(result.train, out_dir / "split.train.tsv", comments);
      write_tsv_file(result.dev, out_dir / "split.dev.tsv", comments);
      write_tsv_file(result.test, out_dir / "split.test.tsv", comments);
      std::cout << "split: " << result.train.size() << " train / "
                << result.dev.size() << " dev / " << result.test.size()
                << " test" << (augment_enabled ? " (augmented per split)" : "")
                << "\n";
      eval_corpus = std::move(result.test);
    } else if (augment_enabled) {
      const std::size_t before = corpus.size();
      corpus = augment_corpus(corpus, augment_config);
      write_tsv_file(corpus, out_dir / "augmented.tsv", comments);
      std::cout << "augment: " << before << " -> " << corpus.size()
                << " segment(s)\n";
      eval_corpus = std::move(corpus);
    } else {
      eval_corpus = std::move(corpus);
    }
  }

  // score
  const ScorerChoice choice = scorer_from(config.at("scorer"), "scorer");
  if (choice.kind == ScorerChoice::Kind::file) note_input(choice.arg);
  ChrfParams chrf_params;
  chrf_params.max_n = static_cast<int>(
      parse_u64_value(config.at("chrf.max_n"), "chrf.max_n"));
  chrf_params.beta = parse_double_value(config.at("chrf.beta"), "chrf.beta");
  chrf_params.strip_whitespace = parse_bool_value(
      config.at("chrf.strip_whitespace"), "chrf.strip_whitespace");
  std::optional<std::uint64_t> timeout_secs;
  if (!config.at("scorer.timeout_secs").empty()) {
    timeout_secs =
        parse_u64_value(config.at("scorer.timeout_secs"), "scorer.timeout_secs");
  }
  const ScoreVector scores =
      compute_scores(eval_corpus, choice, chrf_params, timeout_secs, jobs);
  write_scores_tsv_file(scores, (out_dir / "scores.tsv").string(), comments);
  if (parse_bool_value(config.at("esa"), "esa")) {
    write_esa_scores_file(scores, out_dir / "scores.esa.tsv", comments);
  }
  std::cout << "score: " << scores.entries.size() << " segment(s) with "
            << scorer_description(choice, chrf_params) << "\n";

  // correlate
  const Level level = level_from(config.at("level"), "level");
  const GoldField gold = gold_from(config.at("gold"), "gold");
  const auto emit = [&](ReportLevel report_level) {
    EvalReport report = report_level == ReportLevel::segment
                            ? segment_report(scores, eval_corpus, {}, gold)
                            : system_report(scores, eval_corpus, gold);
    report.config_fingerprint = fingerprint;
    const fs::path path =
        out_dir / (report_level == ReportLevel::segment ? "report.segment.tsv"
                                                        : "report.system.tsv");
    write_report_tsv_file(report, path.string());
    std::cout << render_report_table(report);
  };
  if (level != Level::system) emit(ReportLevel::segment);
  if (level != Level::segment) emit(ReportLevel::system);

  // histogram of predicted scores
  if (parse_bool_value(config.at("hist.enabled"), "hist.enabled")) {
    std::vector<double> values;
    values.reserve(scores.entries.size());
    for (const auto& [id, score] : scores.entries) {
      (void)id;
      values.push_back(score);
    }
    const Histogram hist = histogram(
        values, parse_u64_value(config.at("hist.bins"), "hist.bins"),
        parse_double_value(config.at("hist.lo"), "hist.lo"),
        parse_double_value(config.at("hist.hi"), "hist.hi"));
    write_histogram_file(hist, out_dir / "hist.tsv", comments);
  }

  // manifest, last: its presence marks a completed run
  {
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) {
      throw schema_error("cannot open for writing: " + manifest_path.string());
    }
    out << "key\tvalue\n";
    out << "toolkit_version\t" << k_version << '\n';
    out << "config_fingerprint\t" << fingerprint << '\n';
    std::sort(checksums.begin(), checksums.end());
    for (const auto& [key, value] : checksums) {
      out << key << '\t' << value << '\n';
    }
    for (const auto& [key, value] : config) {
      if (key == "out_dir" || key == "jobs") continue;
      out << "config:" << key << '\t' << value << '\n';
    }
    out.flush();
    if (!out) throw schema_error("write failed: " + manifest_path.string());
  }
  std::cout << "run complete -> " << out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus toolkit for long-span MT quality evaluation"};
  app.set_version_flag("--version", std::string(k_version));
  app.require_subcommand(1);

  IngestOpts ingest_opts;
  auto* ingest = app.add_subcommand(
      "ingest", "parse a TSV corpus and rewrite it in canonical form");
  ingest->add_option("-i,--input", ingest_opts.input, "input corpus TSV")
      ->required();
  ingest->add_option("-o,--output", ingest_opts.output, "output corpus TSV")
      ->required();
  ingest->add_option("--column-map", ingest_opts.column_map,
                     "header overrides, e.g. id=segid,src=source");

  NormalizeOpts normalize_opts;
  auto* normalize = app.add_subcommand(
      "normalize", "min-max normalize raw scores into norm_score");
  normalize->add_option("-i,--input", normalize_opts.input, "input corpus TSV")
      ->required();
  normalize
      ->add_option("-o,--output", normalize_opts.output, "output corpus TSV")
      ->required();
  normalize->add_option("--column-map", normalize_opts.column_map,
                        "header overrides");
  normalize->add_option("--bounds", normalize_opts.bounds_in,
                        "bounds TSV to apply (default: fit from the input)");
  normalize->add_option("--save-bounds", normalize_opts.bounds_out,
                        "write the bounds used to this TSV");
  normalize->add_option("--grouping", normalize_opts.grouping,
                        "fit scope: scheme_lang_pair, scheme or global");
  normalize->add_option("--degenerate", normalize_opts.degenerate,
                        "collapsed-scale policy: error or midpoint");

  AugmentOpts augment_opts;
  auto* augment = app.add_subcommand(
      "augment", "add sliding-window multi-segment spans");
  augment->add_option("-i,--input", augment_opts.input, "input corpus TSV")
      ->required();
  augment->add_option("-o,--output", augment_opts.output, "output corpus TSV")
      ->required();
  augment->add_option("--column-map", augment_opts.column_map,
                      "header overrides");
  augment->add_option("--k", augment_opts.k, "span widths (default 2,3,4,5)");
  augment->add_option("--stride", augment_opts.stride,
                      "window step (default 1)");
  augment->add_option("--separator", augment_opts.separator,
                      "text joiner, escapes \\s \\t \\n (default \\s)");
  augment->add_flag("--no-originals", augment_opts.no_originals,
                    "emit only the spans, not the input segments");
  augment->add_option("--score-field", augment_opts.score_field,
                      "score to average: raw or norm (default raw)");

  SplitOpts split_opts;
  auto* split = app.add_subcommand(
      "split", "seeded train/dev/test partition");
  split->add_option("-i,--input", split_opts.input, "input corpus TSV")
      ->required();
  split->add_option("-o,--output", split_opts.prefix,
                    "output prefix; writes PREFIX.{train,dev,test}.tsv")
      ->required();
  split->add_option("--column-map", split_opts.column_map, "header overrides");
  split->add_option("--train", split_opts.train, "train ratio (default 0.8)");
  split->add_option("--dev", split_opts.dev, "dev ratio (default 0.1)");
  split->add_option("--test", split_opts.test, "test ratio (default 0.1)");
  split->add_option("--seed", split_opts.seed, "shuffle seed (default 0)");
  split->add_option("--unit", split_opts.unit,
                    "unit kept whole: segment or document");

  ScoreOpts score_opts;
  auto* score = app.add_subcommand(
      "score", "score segments with chrf, a score file, or a child process");
  score->add_option("-i,--input", score_opts.input, "input corpus TSV")
      ->required();
  score->add_option("-o,--output", score_opts.output, "output scores TSV")
      ->required();
  score->add_option("--column-map", score_opts.column_map, "header overrides");
  score->add_option("--scorer", score_opts.scorer,
                    "chrf, file:PATH or cmd:COMMAND (default chrf)");
  score->add_option("--max-n", score_opts.max_n,
                    "chrf n-gram order cap (default 6)");
  score->add_option("--beta", score_opts.beta,
                    "chrf recall weight (default 2)");
  score->add_flag("--strip-whitespace", score_opts.strip_whitespace,
                  "drop whitespace before chrf n-gram extraction");
  score->add_option("--timeout", score_opts.timeout_secs,
                    "external scorer timeout in seconds");
  score->add_flag("--esa", score_opts.esa,
                  "write clamped 0-100 integer scores");
  score->add_option("-j,--jobs", score_opts.jobs,
                    "worker threads, 0 = all cores");

  CorrelateOpts correlate_opts;
  auto* correlate = app.add_subcommand(
      "correlate", "Pearson/Spearman of predicted vs gold scores");
  correlate->add_option("-i,--input", correlate_opts.input, "input corpus TSV")
      ->required();
  correlate->add_option("--scores", correlate_opts.scores,
                        "predicted scores TSV (id<TAB>score)")
      ->required();
  correlate->add_option("-o,--output", correlate_opts.output, "report TSV")
      ->required();
  correlate->add_option("--column-map", correlate_opts.column_map,
                        "header overrides");
  correlate->add_option("--level", correlate_opts.level,
                        "segment, system or both (default both)");
  correlate->add_option("--group-by", correlate_opts.group_by,
                        "segment-level grouping keys (default lang_pair,scheme)");
  correlate->add_option("--gold", correlate_opts.gold,
                        "gold field: auto, raw or norm (default auto)");

  HistOpts hist_opts;
  auto* hist = app.add_subcommand(
      "hist", "score distribution as plot-ready bin counts");
  hist->add_option("--scores", hist_opts.scores,
                   "scores TSV (id<TAB>score)")
      ->required();
  hist->add_option("-o,--output", hist_opts.output, "output bins TSV")
      ->required();
  hist->add_option("--bins", hist_opts.bins, "bin count (default 20)");
  hist->add_option("--lo", hist_opts.lo, "range low edge (default 0)");
  hist->add_option("--hi", hist_opts.hi, "range high edge (default 1)");

  RunOpts run_opts;
  auto* run = app.add_subcommand(
      "run", "full pipeline into an output directory, with manifest");
  run->add_option("-c,--config", run_opts.config_path,
                  "key = value config file");
  run->add_option("--set", run_opts.sets, "override one config key (key=value)");
  run->add_option("-i,--input", run_opts.input, "input corpus TSV");
  run->add_option("-o,--out-dir", run_opts.out_dir, "artifact directory");
  run->add_option("-j,--jobs", run_opts.jobs, "worker threads, 0 = all cores");
  run->add_flag("--force", run_opts.force,
                "overwrite artifacts of a different configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    run_opts.jobs_given = run->count("--jobs") > 0;
    if (app.got_subcommand(ingest)) {
      cmd_ingest(ingest_opts);
    } else if (app.got_subcommand(normalize)) {
      cmd_normalize(normalize_opts);
    } else if (app.got_subcommand(augment)) {
      cmd_augment(augment_opts);
    } else if (app.got_subcommand(split)) {
      cmd_split(split_opts);
    } else if (app.got_subcommand(score)) {
      cmd_score(score_opts);
    } else if (app.got_subcommand(correlate)) {
      cmd_correlate(correlate_opts);
    } else if (app.got_subcommand(hist)) {
      cmd_hist(hist_opts);
    } else if (app.got_subcommand(run)) {
      cmd_run(run_opts);
    }
    return 0;
  } catch (const longspan::error& e) {
    std::cerr << "longspan: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "longspan: " << e.what() << "\n";
    return 1;
  }
}
