#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "monofit/families.hpp"
#include "monofit/table.hpp"

namespace monofit {

// Cumulative observation sums and counts over levels.  mean(a, b) is the
// sample mean of all observations in levels a..b (0-based, inclusive).
class PrefixStats {
 public:
  explicit PrefixStats(const ObservationTable& table);

  int level_count() const { return static_cast<int>(cum_count_.size()) - 1; }
  double sum(int a, int b) const;
  std::int64_t count(int a, int b) const;
  double mean(int a, int b) const;

 private:
  void require_range(int a, int b) const;

  std::vector<double> cum_sum_;          // cum_sum_[k] = sum over levels [0, k)
  std::vector<std::int64_t> cum_count_;  // cum_count_[k] = count over levels [0, k)
};

enum class Direction { NonDecreasing, NonIncreasing };

struct FittedBlock {
  int first = 0;  // level range, 0-based inclusive
  int last = 0;
  double sum = 0.0;        // total of the observations in the block
  std::int64_t count = 0;  // number of observations in the block
  double tau = 0.0;        // block value = sum / count

  bool operator==(const FittedBlock&) const = default;
};

// Monotone compound estimate: consecutive blocks partition the levels and
// carry strictly monotone block values in the declared direction.
struct MonotoneEstimate {
  Direction direction = Direction::NonDecreasing;
  std::vector<FittedBlock> blocks;

  int level_count() const { return blocks.empty() ? 0 : blocks.back().last + 1; }

  // Expanded per-level parameter vector: phi[i] = tau of the block
  // containing level i.
  std::vector<double> phi() const;

  bool operator==(const MonotoneEstimate&) const = default;
};

struct BlockScan {
  int last = 0;  // largest level attaining the minimum running mean
  double sum = 0.0;
  std::int64_t count = 0;

  double mean() const { return sum / static_cast<double>(count); }
};

// Scans levels [first..m-1] for the longest prefix minimizing the running
// mean; ties go to the larger end index.  Means are compared by
// cross-multiplied sums, so tie detection is exact whenever observations
// are exactly representable (0/1 and small-integer data in particular).
BlockScan block_end(const PrefixStats& stats, int first);

// The unique maximum-likelihood non-decreasing compound estimate for any
// family satisfying the unimodal-likelihood contract.  Never consults a
// FamilySpec: the block decomposition depends only on level means.
MonotoneEstimate fit_nondecreasing(const ObservationTable& table);

// Dual fit: reverses the level order, fits non-decreasing, and maps block
// indices back to the original orientation.
MonotoneEstimate fit_nonincreasing(const ObservationTable& table);

// Classical pool-adjacent-violators on the same exact comparison rule.
// Cross-check implementation for fit_nondecreasing.
MonotoneEstimate fit_nondecreasing_pava(const ObservationTable& table);

// Compound log-likelihood sum_i sum_j ln f(x_ij | phi_i), or -infinity if
// any factor is zero.  Throws StructuralError on a phi/table length
// mismatch and DomainError if any phi_i lies outside Theta.
double log_likelihood(const FamilySpec& family, std::span<const double> phi,
                      const ObservationTable& table);

// Exhaustive oracle for small instances (m <= 12): enumerates all
// consecutive-block partitions, sets block values to block means, keeps
// candidates with strictly increasing values, and returns the one
// maximizing the compound log-likelihood.  Fails loudly if the maximizer
// is not strictly unique.
MonotoneEstimate brute_force_fit(const ObservationTable& table, const FamilySpec& family);

// Same, choosing the Bernoulli family automatically for 0/1 data.
MonotoneEstimate brute_force_fit(const ObservationTable& table);

}  // namespace monofit
