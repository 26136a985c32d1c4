#pragma once

#include <string_view>

namespace longspan {

// Character n-gram F-score parameters. Defaults follow the metric's common
// convention: orders 1..6 averaged, recall weighted by beta=2. Whitespace
// characters count as ordinary characters unless strip_whitespace is set.
struct ChrfParams {
  int max_n = 6;
  double beta = 2.0;
  bool strip_whitespace = false;

  void validate() const;  // throws argument_error
};

// F_beta over character n-gram precision/recall, averaged across orders
// 1..max_n. Orders where the reference has no n-grams are skipped. Both
// strings empty scores 1.0; exactly one empty scores 0.0. Operates on
// Unicode scalar values, not bytes.
double chrf_score(std::string_view hypothesis, std::string_view reference,
                  const ChrfParams& params = {});

double chrf_score(std::string_view hypothesis, std::string_view reference,
                  int max_n, double beta);

}  // namespace longspan
