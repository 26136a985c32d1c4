#include <doctest.h>

#include <random>
#include <string>

#include "longspan/chrf.hpp"
#include "longspan/errors.hpp"
#include "support/oracles.hpp"

using namespace longspan;

TEST_CASE("identical text scores one") {
  CHECK(chrf_score("hello world", "hello world") == 1.0);
  CHECK(chrf_score("a", "a") == 1.0);
}

TEST_CASE("empty inputs have pinned scores") {
  CHECK(chrf_score("", "") == 1.0);
  CHECK(chrf_score("", "reference") == 0.0);
  CHECK(chrf_score("hypothesis", "") == 0.0);
}

TEST_CASE("hand-checked value at width two") {
  // Orders: unigrams match 2 of 3 (P = R = 2/3), bigrams 1 of 2 (P = R = 1/2).
  // Averaged precision = recall = 7/12, and F equals them when they agree.
  CHECK(chrf_score("abc", "abd", 2, 2.0) ==
        doctest::Approx(7.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("beta weighs recall against precision") {
  // hyp "aa" vs ref "a": P = 1/2, R = 1.
  CHECK(chrf_score("aa", "a", 1, 2.0) ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(chrf_score("aa", "a", 1, 0.5) ==
        doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(chrf_score("aa", "a", 1, 1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("orders beyond the reference length are skipped") {
  // The reference has no trigrams, so max_n 6 degrades to max_n 2.
  CHECK(chrf_score("abcd", "ab", 6, 2.0) == chrf_score("abcd", "ab", 2, 2.0));
  // A one-character reference still produces a defined score.
  CHECK(chrf_score("abcd", "a", 6, 2.0) == chrf_score("abcd", "a", 1, 2.0));
}

TEST_CASE("whitespace participates unless stripped") {
  CHECK(chrf_score("a b", "ab", 1, 2.0) ==
        doctest::Approx(10.0 / 11.0).epsilon(1e-15));
  ChrfParams strip;
  strip.max_n = 1;
  strip.strip_whitespace = true;
  CHECK(chrf_score("a b", "ab", strip) == 1.0);
  CHECK(chrf_score("a\tb\nc", " abc ", strip) == 1.0);
}

TEST_CASE("n-grams count code points, not bytes") {
  // Two-byte characters behave exactly like one-byte ones.
  CHECK(chrf_score("\xd0\x96", "\xd0\x96\xd0\x96", 2, 2.0) ==
        chrf_score("x", "xx", 2, 2.0));
  CHECK(chrf_score("\xd0\x96\xd0\x97", "\xd0\x96\xd0\x97", 6, 2.0) == 1.0);
}

TEST_CASE("defaults are width six and beta two") {
  const char* hyp = "the quick brown fox";
  const char* ref = "the quack brown fax";
  CHECK(chrf_score(hyp, ref) == chrf_score(hyp, ref, 6, 2.0));
  CHECK(chrf_score(hyp, ref) != chrf_score(hyp, ref, 2, 2.0));
}

TEST_CASE("score stays inside the unit interval") {
  std::mt19937_64 rng(17);
  const char alphabet[] = {'a', 'b', 'c', ' '};
  for (int trial = 0; trial < 500; ++trial) {
    std::string hyp, ref;
    const std::size_t hl = rng() % 12, rl = rng() % 12;
    for (std::size_t i = 0; i < hl; ++i) hyp += alphabet[rng() % 4];
    for (std::size_t i = 0; i < rl; ++i) ref += alphabet[rng() % 4];
    const double s = chrf_score(hyp, ref, 3, 2.0);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("agrees exactly with byte-level counting on ascii") {
  std::mt19937_64 rng(23);
  const char alphabet[] = {'a', 'b', 'c', 'd', ' '};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string hyp, ref;
    const std::size_t hl = rng() % 10, rl = rng() % 10;
    for (std::size_t i = 0; i < hl; ++i) hyp += alphabet[rng() % 5];
    for (std::size_t i = 0; i < rl; ++i) ref += alphabet[rng() % 5];
    const int max_n = 1 + static_cast<int>(rng() % 4);
    CHECK(chrf_score(hyp, ref, max_n, 2.0) ==
          oracles::chrf(hyp, ref, max_n, 2.0));
  }
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(chrf_score("a", "b", 0, 2.0), argument_error);
  CHECK_THROWS_AS(chrf_score("a", "b", 6, 0.0), argument_error);
  CHECK_THROWS_AS(chrf_score("a", "b", 6, -1.0), argument_error);
}
