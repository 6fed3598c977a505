#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rlens/error.hpp"

namespace rlens {

/// Median with the usual midpoint convention for even counts.
inline double median(std::vector<double> values) {
  if (values.empty()) throw DataError("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

/// Quantile by linear interpolation between order statistics (q in [0,1]).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("quantile: empty input");
  if (q < 0.0 || q > 1.0) throw ContractError("quantile: q outside [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return values[lo];
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

/// The robustness indicator over a population of ensembles: the
/// ceil(0.1*N)-th largest score (nearest-rank 90th percentile). Needs at
/// least 10 scores.
inline double best_decile(std::vector<double> scores) {
  if (scores.size() < 10) {
    throw DataError("best_decile: need at least 10 scores, got " + std::to_string(scores.size()));
  }
  std::sort(scores.begin(), scores.end(), std::greater<double>());
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(0.1 * static_cast<double>(scores.size())));
  return scores[rank - 1];
}

inline double mean(const std::vector<double>& values) {
  if (values.empty()) throw DataError("mean: empty input");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

/// Sample standard deviation (n-1 denominator).
inline double sample_std(const std::vector<double>& values) {
  if (values.size() < 2) throw DataError("sample_std: need at least 2 values");
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

/// Relative standard deviation std(x)/mean(x), sign preserved as computed.
/// Reports that compare stability across arms use the magnitude; see
/// analysis.hpp.
inline double rsd(const std::vector<double>& values) {
  if (values.size() < 2) throw DataError("rsd: need at least 2 values");
  const double m = mean(values);
  if (m == 0.0) throw DataError("rsd: undefined for zero mean");
  return sample_std(values) / m;
}

}  // namespace rlens
