#pragma once

// Shared generators and property checkers for the unit and acceptance
// suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "monofit/families.hpp"
#include "monofit/monotone_fit.hpp"
#include "monofit/rng.hpp"
#include "monofit/table.hpp"

namespace testsupport {

inline monofit::ObservationTable make_table(std::vector<std::vector<double>> values) {
  monofit::ObservationTable table;
  table.levels.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    table.levels.push_back({std::to_string(i + 1), std::move(values[i])});
  return table;
}

// Observable draw with plenty of exact repeats, so tie handling in the
// fitters gets exercised.  Exponential-style values are quarter-integers
// (exactly representable).
inline double quantized_observable(const monofit::FamilySpec& family, monofit::Rng& rng) {
  switch (family.kind()) {
    case monofit::FamilyKind::Bernoulli:
      return rng.next_double() < 0.5 ? 1.0 : 0.0;
    case monofit::FamilyKind::Poisson:
    case monofit::FamilyKind::Geometric:
      return static_cast<double>(rng.next_u64() % 5);
    case monofit::FamilyKind::NormalFixedSigma:
      return static_cast<double>(rng.next_u64() % 17) * 0.25 - 2.0;
    case monofit::FamilyKind::Exponential:
      return static_cast<double>(rng.next_u64() % 16 + 1) * 0.25;
  }
  return 0.0;
}

inline monofit::ObservationTable random_table(const monofit::FamilySpec& family,
                                              monofit::Rng& rng, int max_levels,
                                              int max_per_level) {
  const int m = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_levels));
  monofit::ObservationTable table;
  table.levels.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    monofit::Level& level = table.levels[static_cast<std::size_t>(i)];
    level.label = std::to_string(i + 1);
    const int n =
        1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_per_level));
    for (int j = 0; j < n; ++j) level.values.push_back(quantized_observable(family, rng));
  }
  return table;
}

inline double sample_log_likelihood(const monofit::FamilySpec& family,
                                    const std::vector<double>& sample, double theta) {
  double total = 0.0;
  for (double x : sample) {
    const double lp = monofit::log_pdf(family, x, theta);
    if (lp == -std::numeric_limits<double>::infinity()) return lp;
    total += lp;
  }
  return total;
}

// Unimodal-likelihood grid check: strictly increasing up to the sample
// mean and strictly decreasing beyond it, to additive tolerance 1e-12 on
// the log scale.  Returns an empty string on pass.
inline std::string check_unimodality(const monofit::FamilySpec& family,
                                     const std::vector<double>& sample) {
  const double mean =
      std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(sample.size());
  if (!family.contains_theta(mean)) return "sample mean outside Theta";

  double lo = 0.0;
  double hi = 1.0;
  switch (family.kind()) {
    case monofit::FamilyKind::Bernoulli:
      lo = 0.0;
      hi = 1.0;
      break;
    case monofit::FamilyKind::Poisson:
    case monofit::FamilyKind::Geometric:
      lo = 0.0;
      hi = 2.0 * mean + 3.0;
      break;
    case monofit::FamilyKind::NormalFixedSigma:
      lo = mean - 3.0 * family.sigma();
      hi = mean + 3.0 * family.sigma();
      break;
    case monofit::FamilyKind::Exponential:
      lo = mean / 8.0;
      hi = 4.0 * mean;
      break;
  }

  constexpr double kTol = 1e-12;
  const double fractions[] = {0.0, 0.2, 0.5, 0.8, 1.0};

  std::vector<double> below;
  for (double f : fractions) below.push_back(lo + (mean - lo) * f);
  below.push_back(mean);
  std::sort(below.begin(), below.end());
  below.erase(std::unique(below.begin(), below.end()), below.end());
  for (std::size_t k = 1; k < below.size(); ++k) {
    const double l1 = sample_log_likelihood(family, sample, below[k - 1]);
    const double l2 = sample_log_likelihood(family, sample, below[k]);
    if (!(l1 < l2 + kTol))
      return "not increasing below the mean: L(" + std::to_string(below[k - 1]) +
             ")=" + std::to_string(l1) + " vs L(" + std::to_string(below[k]) +
             ")=" + std::to_string(l2);
  }

  std::vector<double> above;
  above.push_back(mean);
  for (double f : fractions) above.push_back(mean + (hi - mean) * f);
  std::sort(above.begin(), above.end());
  above.erase(std::unique(above.begin(), above.end()), above.end());
  for (std::size_t k = 1; k < above.size(); ++k) {
    const double l1 = sample_log_likelihood(family, sample, above[k - 1]);
    const double l2 = sample_log_likelihood(family, sample, above[k]);
    if (!(l2 < l1 + kTol))
      return "not decreasing above the mean: L(" + std::to_string(above[k - 1]) +
             ")=" + std::to_string(l1) + " vs L(" + std::to_string(above[k]) +
             ")=" + std::to_string(l2);
  }
  return {};
}

// A random observable sample of size 1..20 for the grid checks.
inline std::vector<double> random_sample(const monofit::FamilySpec& family,
                                         monofit::Rng& rng) {
  const int t = 1 + static_cast<int>(rng.next_u64() % 20);
  std::vector<double> sample;
  sample.reserve(static_cast<std::size_t>(t));
  for (int s = 0; s < t; ++s) sample.push_back(quantized_observable(family, rng));
  return sample;
}

// Random non-decreasing parameter vector covering the data's range.
inline std::vector<double> random_nondecreasing_theta(const monofit::FamilySpec& family,
                                                      const monofit::ObservationTable& table,
                                                      monofit::Rng& rng) {
  double lo = 0.0;
  double hi = 1.0;
  double max_value = 0.0;
  for (const auto& level : table.levels)
    for (double x : level.values) max_value = std::max(max_value, std::fabs(x));
  switch (family.kind()) {
    case monofit::FamilyKind::Bernoulli:
      lo = 0.0;
      hi = 1.0;
      break;
    case monofit::FamilyKind::Poisson:
    case monofit::FamilyKind::Geometric:
      lo = 0.0;
      hi = 1.5 * max_value + 1.0;
      break;
    case monofit::FamilyKind::NormalFixedSigma:
      lo = -max_value - 2.0;
      hi = max_value + 2.0;
      break;
    case monofit::FamilyKind::Exponential:
      lo = 0.01;
      hi = 1.5 * max_value + 1.0;
      break;
  }
  std::vector<double> theta(static_cast<std::size_t>(table.level_count()));
  for (double& t : theta) t = lo + (hi - lo) * rng.next_double();
  std::sort(theta.begin(), theta.end());
  return theta;
}

}  // namespace testsupport
