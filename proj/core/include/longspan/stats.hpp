#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace longspan {

// Sample Pearson r, one-pass co-moment accumulation. Throws argument_error on
// mismatched lengths, n < 2 or non-finite values; throws degenerate_error
// when either vector is constant (correlation undefined, never NaN).
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson over fractional (average) ranks; ties share the mean of the ranks
// they span. Same error contract as pearson.
double spearman(std::span<const double> x, std::span<const double> y);

// 1-based ranks; equal values all receive the mean of their rank run.
std::vector<double> fractional_ranks(std::span<const double> values);

// clamp(score, 0, 1) * 100 rounded half-away-from-zero: monotone from
// [0,1] onto {0..100}. Throws argument_error on non-finite input.
int rescale_esa(double score);

struct HistogramBin {
  double lo;
  double hi;
  std::uint64_t count;
};

struct Histogram {
  double lo;
  double hi;
  std::vector<HistogramBin> bins;
  std::uint64_t total() const;
};

// Equal-width bins over [lo, hi]; out-of-range values land in the edge bins,
// so counts always sum to the input length. Throws argument_error when
// bins < 1, lo >= hi, or a score is non-finite.
Histogram histogram(std::span<const double> scores, std::size_t bins,
                    double lo, double hi);

// "bin_lo<TAB>bin_hi<TAB>count" lines preceded by a header row; comment
// lines, if any, are written first with a leading '#'.
void write_histogram_tsv(const Histogram& hist, std::ostream& out,
                         const std::vector<std::string>& comments = {});

}  // namespace longspan
