#include "longspan/chrf.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "longspan/errors.hpp"
#include "longspan/utf8.hpp"

namespace longspan {

namespace {

bool is_ascii_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f';
}

std::u32string prepare(std::string_view text, bool strip_whitespace) {
  std::vector<char32_t> scalars = decode_scalars(text);
  std::u32string out;
  out.reserve(scalars.size());
  for (char32_t c : scalars) {
    if (strip_whitespace && is_ascii_space(c)) continue;
    out.push_back(c);
  }
  return out;
}

std::unordered_map<std::u32string, std::size_t> ngram_counts(
    const std::u32string& text, std::size_t n) {
  std::unordered_map<std::u32string, std::size_t> counts;
  if (text.size() < n) return counts;
  for (std::size_t i = 0; i + n <= text.size(); ++i) {
    ++counts[text.substr(i, n)];
  }
  return counts;
}

}  // namespace

void ChrfParams::validate() const {
  if (max_n < 1) throw argument_error("chrf max_n must be >= 1");
  if (!(beta > 0.0)) throw argument_error("chrf beta must be > 0");
}

double chrf_score(std::string_view hypothesis, std::string_view reference,
                  const ChrfParams& params) {
  params.validate();

  const std::u32string hyp = prepare(hypothesis, params.strip_whitespace);
  const std::u32string ref = prepare(reference, params.strip_whitespace);
  if (hyp.empty() && ref.empty()) return 1.0;
  if (hyp.empty() || ref.empty()) return 0.0;

  double precision_sum = 0.0;
  double recall_sum = 0.0;
  int orders_used = 0;
  for (int n = 1; n <= params.max_n; ++n) {
    const std::size_t order = static_cast<std::size_t>(n);
    if (ref.size() < order) break;  // no reference n-grams at this or higher n
    const auto ref_counts = ngram_counts(ref, order);
    const auto hyp_counts = ngram_counts(hyp, order);

    std::size_t matched = 0;
    std::size_t hyp_total = 0;
    std::size_t ref_total = 0;
    for (const auto& [gram, count] : hyp_counts) {
      hyp_total += count;
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    for (const auto& [gram, count] : ref_counts) ref_total += count;

    precision_sum += hyp_total > 0
                         ? static_cast<double>(matched) /
                               static_cast<double>(hyp_total)
                         : 0.0;
    recall_sum +=
        static_cast<double>(matched) / static_cast<double>(ref_total);
    ++orders_used;
  }

  const double precision = precision_sum / orders_used;
  const double recall = recall_sum / orders_used;
  const double beta_sq = params.beta * params.beta;
  const double denom = beta_sq * precision + recall;
  if (denom == 0.0) return 0.0;
  return std::clamp((1.0 + beta_sq) * precision * recall / denom, 0.0, 1.0);
}

double chrf_score(std::string_view hypothesis, std::string_view reference,
                  int max_n, double beta) {
  ChrfParams params;
  params.max_n = max_n;
  params.beta = beta;
  return chrf_score(hypothesis, reference, params);
}

}  // namespace longspan
