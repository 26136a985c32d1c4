#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "longspan/chrf.hpp"
#include "longspan/errors.hpp"
#include "longspan/scorers.hpp"
#include "longspan/util.hpp"
#include "support/gen.hpp"
#include "support/proc.hpp"

using namespace longspan;

namespace {

double toy_hash_score(const std::string& id) {
  return static_cast<double>(fnv1a64(id) % 10000) / 9999.0;
}

ExternalScorerConfig toy(const std::string& mode) {
  ExternalScorerConfig config;
  config.command = proc::toy_scorer_path();
  if (!mode.empty()) config.command += " " + mode;
  config.timeout_secs = 30;
  return config;
}

}  // namespace

TEST_CASE("chrf scoring covers the corpus with per-segment scores") {
  const Corpus c = gen::corpus(31, {});
  const ScoreVector scores = score_corpus(c, ChrfScorer{});
  CHECK(scores.scorer_name == "chrf");
  CHECK(scores.entries.size() == c.size());
  for (const auto& seg : c.segments()) {
    const auto it = scores.entries.find(seg.id);
    REQUIRE(it != scores.entries.end());
    CHECK(it->second == chrf_score(seg.hypothesis, *seg.reference));
  }
}

TEST_CASE("chrf scoring is independent of the job count") {
  const Corpus c = gen::corpus(32, {.docs = 3, .systems = 2, .segs_per_doc = 25});
  const ScoreVector one = score_corpus(c, ChrfScorer{}, 1);
  const ScoreVector four = score_corpus(c, ChrfScorer{}, 4);
  const ScoreVector nine = score_corpus(c, ChrfScorer{}, 9);
  CHECK(one.entries == four.entries);
  CHECK(one.entries == nine.entries);
}

TEST_CASE("chrf needs a reference on every segment") {
  gen::CorpusShape shape;
  shape.with_reference = false;
  const Corpus c = gen::corpus(33, shape);
  CHECK_THROWS_AS(score_corpus(c, ChrfScorer{}), integrity_error);
}

TEST_CASE("score files round trip") {
  const Corpus c = gen::corpus(34, {.docs = 1, .systems = 1, .segs_per_doc = 6});
  const ScoreVector scores = score_corpus(c, ChrfScorer{});
  std::ostringstream out;
  write_scores_tsv(scores, out, {"fingerprint=deadbeef"});
  CHECK(out.str().rfind("#fingerprint=deadbeef\n", 0) == 0);
  std::istringstream in(out.str());
  const ScoreVector back = load_external_scores(in, c, "reload");
  CHECK(back.entries == scores.entries);
  CHECK(back.scorer_name == "reload");
}

TEST_CASE("score file problems carry their error class") {
  const Corpus c = gen::corpus(35, {.docs = 1, .systems = 1, .segs_per_doc = 3});
  const std::string id0 = c.at(0).id, id1 = c.at(1).id, id2 = c.at(2).id;
  const auto load = [&](const std::string& text) {
    std::istringstream in(text);
    return load_external_scores(in, c);
  };
  const std::string good =
      id0 + "\t0.5\n" + id1 + "\t0.25\n" + id2 + "\t0.75\n";
  CHECK(load(good).entries.size() == 3);

  CHECK_THROWS_AS(load(id0 + "\t0.5\nno tab here\n"), row_error);
  CHECK_THROWS_AS(load(good + id0 + "\tnot-a-number\n"), row_error);
  CHECK_THROWS_AS(load(good + id0 + "\tinf\n"), row_error);
  CHECK_THROWS_AS(load(good + "\t0.5\n"), row_error);  // empty id
  CHECK_THROWS_AS(load(good + id0 + "\t0.5\n"), integrity_error);  // duplicate
  CHECK_THROWS_AS(load(good + "ghost\t0.5\n"), integrity_error);   // unknown

  try {
    load(id0 + "\t0.5\n");
    FAIL("expected coverage_error");
  } catch (const coverage_error& e) {
    REQUIRE(e.missing_ids().size() == 2);
    CHECK(e.missing_ids()[0] == id1);
    CHECK(e.missing_ids()[1] == id2);
  }
}

TEST_CASE("long missing-id lists are truncated in the message only") {
  const Corpus c = gen::corpus(36, {.docs = 1, .systems = 1, .segs_per_doc = 30});
  try {
    check_coverage({}, c);
    FAIL("expected coverage_error");
  } catch (const coverage_error& e) {
    CHECK(e.missing_ids().size() == 30);
    CHECK(std::string(e.what()).find(", ...") != std::string::npos);
  }
}

TEST_CASE("external scorer round trip joins by id") {
  const Corpus c = gen::corpus(37, {.docs = 2, .systems = 2, .segs_per_doc = 5});
  const ScoreVector scores = run_external_scorer(toy(""), c);
  CHECK(scores.scorer_name == "external");
  CHECK(scores.entries.size() == c.size());
  for (const auto& [id, score] : scores.entries) {
    CHECK(score == toy_hash_score(id));
  }
}

TEST_CASE("output order from the child does not matter") {
  const Corpus c = gen::corpus(38, {.docs = 1, .systems = 2, .segs_per_doc = 7});
  const ScoreVector forward = run_external_scorer(toy(""), c);
  const ScoreVector reversed = run_external_scorer(toy("reverse"), c);
  CHECK(forward.entries == reversed.entries);
}

TEST_CASE("constant scorer scores every segment the same") {
  const Corpus c = gen::corpus(39, {.docs = 1, .systems = 1, .segs_per_doc = 4});
  const ScoreVector scores = run_external_scorer(toy("const:0.25"), c);
  for (const auto& [id, score] : scores.entries) {
    (void)id;
    CHECK(score == 0.25);
  }
}

TEST_CASE("failing child surfaces its stderr") {
  const Corpus c = gen::corpus(40, {.docs = 1, .systems = 1, .segs_per_doc = 3});
  try {
    run_external_scorer(toy("fail"), c);
    FAIL("expected scorer_error");
  } catch (const scorer_error& e) {
    const std::string what = e.what();
    CHECK(what.find("status 1") != std::string::npos);
    CHECK(what.find("refusing to score") != std::string::npos);
  }
}

TEST_CASE("malformed child output is a protocol problem") {
  const Corpus c = gen::corpus(41, {.docs = 1, .systems = 1, .segs_per_doc = 3});
  CHECK_THROWS_AS(run_external_scorer(toy("malformed"), c), protocol_error);
}

TEST_CASE("duplicate ids from the child are a protocol problem") {
  const Corpus c = gen::corpus(42, {.docs = 1, .systems = 1, .segs_per_doc = 3});
  ExternalScorerConfig config;
  config.command =
      "awk -F'\\t' 'NR>1 { print $1\"\\t0.5\"; print $1\"\\t0.5\" }'";
  config.timeout_secs = 30;
  CHECK_THROWS_AS(run_external_scorer(config, c), protocol_error);
}

TEST_CASE("a child that skips a segment fails coverage") {
  const Corpus c = gen::corpus(43, {.docs = 1, .systems = 1, .segs_per_doc = 4});
  const std::string dropped = c.at(0).id;
  ExternalScorerConfig config;
  config.command = "awk -F'\\t' 'NR>1 && $1 != \"" + dropped +
                   "\" { print $1\"\\t0.5\" }'";
  config.timeout_secs = 30;
  try {
    run_external_scorer(config, c);
    FAIL("expected coverage_error");
  } catch (const coverage_error& e) {
    REQUIRE(e.missing_ids().size() == 1);
    CHECK(e.missing_ids()[0] == dropped);
  }
}

TEST_CASE("a child inventing ids fails the join") {
  const Corpus c = gen::corpus(44, {.docs = 1, .systems = 1, .segs_per_doc = 2});
  ExternalScorerConfig config;
  config.command =
      "awk -F'\\t' 'NR>1 { print $1\"\\t0.5\" } END { print \"ghost\\t0.5\" }'";
  config.timeout_secs = 30;
  CHECK_THROWS_AS(run_external_scorer(config, c), integrity_error);
}

TEST_CASE("slow children are killed at the deadline") {
  const Corpus c = gen::corpus(45, {.docs = 1, .systems = 1, .segs_per_doc = 2});
  ExternalScorerConfig config;
  config.command = proc::toy_scorer_path() + " sleep:20";
  config.timeout_secs = 1;
  CHECK_THROWS_AS(run_external_scorer(config, c), timeout_error);
}

TEST_CASE("fields with tabs cannot cross the wire") {
  std::vector<AnnotatedSegment> segs;
  AnnotatedSegment seg;
  seg.id = "x";
  seg.source = "has\ttab";
  seg.hypothesis = "h";
  segs.push_back(seg);
  const Corpus c = Corpus::from_segments(segs);
  CHECK_THROWS_AS(run_external_scorer(toy(""), c), serialization_error);
}

TEST_CASE("timeout resolution order is config, environment, default") {
  ::unsetenv("LONGSPAN_SCORER_TIMEOUT_SECS");
  ExternalScorerConfig config;
  CHECK(effective_scorer_timeout(config) == 600);

  ::setenv("LONGSPAN_SCORER_TIMEOUT_SECS", "123", 1);
  CHECK(effective_scorer_timeout(config) == 123);

  config.timeout_secs = 45;
  CHECK(effective_scorer_timeout(config) == 45);

  config.timeout_secs.reset();
  ::setenv("LONGSPAN_SCORER_TIMEOUT_SECS", "zero", 1);
  CHECK_THROWS_AS(effective_scorer_timeout(config), config_error);
  ::setenv("LONGSPAN_SCORER_TIMEOUT_SECS", "0", 1);
  CHECK_THROWS_AS(effective_scorer_timeout(config), config_error);
  ::unsetenv("LONGSPAN_SCORER_TIMEOUT_SECS");
}

TEST_CASE("an empty command is rejected before spawning") {
  const Corpus c = gen::corpus(46, {.docs = 1, .systems = 1, .segs_per_doc = 1});
  CHECK_THROWS_AS(run_external_scorer(ExternalScorerConfig{}, c), config_error);
}
