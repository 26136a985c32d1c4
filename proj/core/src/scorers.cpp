#include "longspan/scorers.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <thread>
#include <utility>

#include "longspan/errors.hpp"
#include "longspan/util.hpp"
#include "score_lines.hpp"

namespace longspan {

void check_coverage(const std::map<std::string, double>& entries,
                    const Corpus& corpus) {
  for (const auto& [id, score] : entries) {
    (void)score;
    if (corpus.find(id) == nullptr) {
      throw integrity_error("score for unknown segment id '" + id + "'");
    }
  }
  std::vector<std::string> missing;
  for (const auto& seg : corpus.segments()) {
    if (!entries.contains(seg.id)) missing.push_back(seg.id);
  }
  if (!missing.empty()) {
    constexpr std::size_t max_listed = 20;
    std::string msg = std::to_string(missing.size()) +
                      " corpus segment(s) have no score: ";
    for (std::size_t i = 0; i < missing.size() && i < max_listed; ++i) {
      if (i > 0) msg += ", ";
      msg += missing[i];
    }
    if (missing.size() > max_listed) msg += ", ...";
    throw coverage_error(msg, std::move(missing));
  }
}

ScoreVector score_corpus(const Corpus& corpus, const ChrfScorer& scorer,
                         unsigned jobs) {
  scorer.params.validate();
  for (const auto& seg : corpus.segments()) {
    if (!seg.reference) {
      throw integrity_error("segment '" + seg.id +
                            "' has no reference, required by chrf");
    }
  }

  const std::size_t n = corpus.size();
  std::vector<double> values(n);
  unsigned n_jobs = jobs != 0 ? jobs : std::thread::hardware_concurrency();
  if (n_jobs == 0) n_jobs = 1;
  n_jobs = static_cast<unsigned>(
      std::min<std::size_t>(n_jobs, std::max<std::size_t>(n, 1)));

  const auto score_one = [&](std::size_t i) {
    const AnnotatedSegment& seg = corpus.at(i);
    values[i] = chrf_score(seg.hypothesis, *seg.reference, scorer.params);
  };

  if (n_jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) score_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(n_jobs);
    for (unsigned w = 0; w < n_jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n;
             i = next.fetch_add(1)) {
          score_one(i);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  ScoreVector result;
  result.scorer_name = "chrf";
  for (std::size_t i = 0; i < n; ++i) {
    result.entries.emplace(corpus.at(i).id, values[i]);
  }
  return result;
}

ScoreVector load_external_scores(std::istream& in, const Corpus& corpus,
                                 std::string scorer_name) {
  const auto lines = detail::parse_score_lines(
      in, [](std::size_t line_no, const std::string& msg) {
        throw row_error(line_no, msg);
      });

  ScoreVector result;
  result.scorer_name = std::move(scorer_name);
  for (const auto& entry : lines) {
    const auto [it, inserted] = result.entries.emplace(entry.id, entry.score);
    (void)it;
    if (!inserted) {
      throw integrity_error("duplicate id '" + entry.id +
                            "' in score file (line " +
                            std::to_string(entry.line_no) + ")");
    }
  }
  check_coverage(result.entries, corpus);
  return result;
}

ScoreVector load_external_scores_file(const std::string& path,
                                      const Corpus& corpus) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw schema_error("cannot open score file: " + path);
  return load_external_scores(in, corpus, path);
}

void write_scores_tsv(const ScoreVector& scores, std::ostream& out,
                      const std::vector<std::string>& comments) {
  for (const auto& comment : comments) out << '#' << comment << '\n';
  for (const auto& [id, score] : scores.entries) {
    out << id << '\t' << format_double(score) << '\n';
  }
}

void write_scores_tsv_file(const ScoreVector& scores, const std::string& path,
                           const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw schema_error("cannot open for writing: " + path);
  write_scores_tsv(scores, out, comments);
  out.flush();
  if (!out) throw schema_error("write failed: " + path);
}

}  // namespace longspan
