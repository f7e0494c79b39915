#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "instforge/scoring.hpp"

// Independent re-derivations used to check library results.
namespace instforge::testing {

struct StatsOracle {
  double mean;
  double median;
  double std;
};

/// Population moments from sum and sum of squares; median by selection.
inline StatsOracle stats_oracle(std::vector<int> xs) {
  const double n = static_cast<double>(xs.size());
  double s1 = 0, s2 = 0;
  for (int x : xs) {
    s1 += x;
    s2 += static_cast<double>(x) * x;
  }
  const double mean = s1 / n;
  const double var = std::max(0.0, s2 / n - mean * mean);
  const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(xs.size() / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  double median = *mid;
  if (xs.size() % 2 == 0) median = (median + *std::max_element(xs.begin(), mid)) / 2.0;
  return {mean, median, std::sqrt(var)};
}

/// Kept iff the three met counts sum to at least 3 * threshold (integer
/// arithmetic, no division).
inline bool keep_oracle(const std::array<int, 3>& counts, int threshold) {
  return counts[0] + counts[1] + counts[2] >= 3 * threshold;
}

inline CriteriaAssessment random_assessment(std::mt19937_64& rng) {
  CriteriaAssessment a;
  for (int c = 1; c <= kCriteriaCount; ++c) {
    if (rng() % 2) a.met.insert(c);
  }
  return a;
}

}  // namespace instforge::testing
