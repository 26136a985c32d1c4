#pragma once

// Reference computations the library is checked against. Each is written the
// most direct way possible (plain loops, textbook formulas, byte-level
// counting) and deliberately shares no code with the library implementations.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracles {

// Plain sum loop in extended precision.
inline double weighted_mean(const std::vector<double>& scores,
                            const std::vector<std::uint64_t>& weights) {
  long double num = 0.0L;
  long double den = 0.0L;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    num += static_cast<long double>(weights[i]) * scores[i];
    den += static_cast<long double>(weights[i]);
  }
  return static_cast<double>(num / den);
}

// Two-pass textbook Pearson: means first, then moment sums.
inline double pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double num = 0.0, dx2 = 0.0, dy2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (x[i] - mean_x) * (y[i] - mean_y);
    dx2 += (x[i] - mean_x) * (x[i] - mean_x);
    dy2 += (y[i] - mean_y) * (y[i] - mean_y);
  }
  return num / std::sqrt(dx2 * dy2);
}

// Rank by counting: rank_i = |{v_j < v_i}| + (|{v_j == v_i}| + 1) / 2.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++less;
      if (v[j] == v[i]) ++equal;
    }
    out[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
  }
  return out;
}

inline double spearman(const std::vector<double>& x,
                       const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

// Byte-substring n-gram F-score; valid for single-byte alphabets.
inline double chrf(const std::string& hyp, const std::string& ref, int max_n,
                   double beta) {
  if (hyp.empty() && ref.empty()) return 1.0;
  if (hyp.empty() || ref.empty()) return 0.0;

  double precision_sum = 0.0, recall_sum = 0.0;
  int used = 0;
  for (int n = 1; n <= max_n; ++n) {
    const std::size_t order = static_cast<std::size_t>(n);
    if (ref.size() < order) break;
    std::map<std::string, std::size_t> ref_counts, hyp_counts;
    for (std::size_t i = 0; i + order <= ref.size(); ++i) {
      ++ref_counts[ref.substr(i, order)];
    }
    for (std::size_t i = 0; i + order <= hyp.size(); ++i) {
      ++hyp_counts[hyp.substr(i, order)];
    }
    std::size_t matched = 0, hyp_total = 0, ref_total = 0;
    for (const auto& [gram, count] : hyp_counts) {
      hyp_total += count;
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) {
        matched += count < it->second ? count : it->second;
      }
    }
    for (const auto& [gram, count] : ref_counts) ref_total += count;
    precision_sum += hyp_total > 0 ? static_cast<double>(matched) /
                                         static_cast<double>(hyp_total)
                                   : 0.0;
    recall_sum += static_cast<double>(matched) / static_cast<double>(ref_total);
    ++used;
  }
  const double precision = precision_sum / used;
  const double recall = recall_sum / used;
  const double beta_sq = beta * beta;
  const double denom = beta_sq * precision + recall;
  if (denom == 0.0) return 0.0;
  double f = (1.0 + beta_sq) * precision * recall / denom;
  if (f < 0.0) f = 0.0;
  if (f > 1.0) f = 1.0;
  return f;
}

// Sliding windows of width k over n contiguous positions, stepping stride.
inline std::size_t window_count(std::size_t n, std::size_t k,
                                std::size_t stride) {
  if (n < k) return 0;
  return (n - k) / stride + 1;
}

}  // namespace oracles
