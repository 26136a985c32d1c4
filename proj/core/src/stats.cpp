#include "longspan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "longspan/errors.hpp"
#include "longspan/util.hpp"

namespace longspan {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y,
                const char* op) {
  if (x.size() != y.size()) {
    throw argument_error(std::string(op) + ": length mismatch (" +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw argument_error(std::string(op) + ": need at least 2 points, got " +
                         std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw argument_error(std::string(op) + ": non-finite value at index " +
                           std::to_string(i));
    }
  }
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [&](double e) { return e == v.front(); });
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "pearson");

  double mean_x = 0.0, mean_y = 0.0;
  double m2_x = 0.0, m2_y = 0.0, co = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    mean_x += dx / n;
    mean_y += dy / n;
    m2_x += dx * (x[i] - mean_x);
    m2_y += dy * (y[i] - mean_y);
    co += dx * (y[i] - mean_y);
  }

  if (m2_x == 0.0) {
    throw degenerate_error("pearson undefined: first input is constant");
  }
  if (m2_y == 0.0) {
    throw degenerate_error("pearson undefined: second input is constant");
  }
  return std::clamp(co / std::sqrt(m2_x * m2_y), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) hold equal values; their shared rank is the
    // mean of 1-based ranks i+1 .. j+1.
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "spearman");
  if (is_constant(x)) {
    throw degenerate_error("spearman undefined: first input is constant");
  }
  if (is_constant(y)) {
    throw degenerate_error("spearman undefined: second input is constant");
  }
  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);
  return pearson(rx, ry);
}

int rescale_esa(double score) {
  if (!std::isfinite(score)) {
    throw argument_error("rescale_esa: non-finite score");
  }
  return static_cast<int>(std::llround(std::clamp(score, 0.0, 1.0) * 100.0));
}

std::uint64_t Histogram::total() const {
  std::uint64_t sum = 0;
  for (const auto& bin : bins) sum += bin.count;
  return sum;
}

Histogram histogram(std::span<const double> scores, std::size_t bins,
                    double lo, double hi) {
  if (bins < 1) throw argument_error("histogram: bins must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw argument_error("histogram: need finite lo < hi");
  }

  Histogram hist;
  hist.lo = lo;
  hist.hi = hi;
  hist.bins.reserve(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double bin_lo = lo + width * static_cast<double>(b);
    const double bin_hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    hist.bins.push_back({bin_lo, bin_hi, 0});
  }

  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw argument_error("histogram: non-finite score");
    }
    const double t = (s - lo) / (hi - lo) * static_cast<double>(bins);
    std::size_t idx;
    if (t <= 0.0) {
      idx = 0;
    } else if (t >= static_cast<double>(bins)) {
      idx = bins - 1;
    } else {
      idx = static_cast<std::size_t>(t);
    }
    ++hist.bins[idx].count;
  }
  return hist;
}

void write_histogram_tsv(const Histogram& hist, std::ostream& out,
                         const std::vector<std::string>& comments) {
  for (const auto& comment : comments) out << '#' << comment << '\n';
  out << "bin_lo\tbin_hi\tcount\n";
  for (const auto& bin : hist.bins) {
    out << format_double(bin.lo) << '\t' << format_double(bin.hi) << '\t'
        << bin.count << '\n';
  }
}

}  // namespace longspan
