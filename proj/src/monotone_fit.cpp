#include "monofit/monotone_fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "monofit/errors.hpp"

namespace monofit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// mean(s1/c1) strictly less than mean(s2/c2), by cross-multiplied sums.
// Exact whenever the sums and products are exactly representable.
bool mean_less(double s1, std::int64_t c1, double s2, std::int64_t c2) {
  return s1 * static_cast<double>(c2) < s2 * static_cast<double>(c1);
}

void require_strictly_increasing(const std::vector<FittedBlock>& blocks) {
  for (std::size_t r = 1; r < blocks.size(); ++r) {
    if (!mean_less(blocks[r - 1].sum, blocks[r - 1].count, blocks[r].sum, blocks[r].count))
      throw std::logic_error(
          "monotone fit produced non-increasing adjacent block values; "
          "this indicates an arithmetic bug");
  }
}

MonotoneEstimate reverse_estimate(const MonotoneEstimate& est, int m) {
  MonotoneEstimate out;
  out.direction = Direction::NonIncreasing;
  out.blocks.reserve(est.blocks.size());
  for (auto it = est.blocks.rbegin(); it != est.blocks.rend(); ++it)
    out.blocks.push_back({m - 1 - it->last, m - 1 - it->first, it->sum, it->count, it->tau});
  return out;
}

}  // namespace

PrefixStats::PrefixStats(const ObservationTable& table) {
  check_shape(table);
  const int m = table.level_count();
  cum_sum_.resize(static_cast<std::size_t>(m) + 1, 0.0);
  cum_count_.resize(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 0; i < m; ++i) {
    const auto& values = table.levels[static_cast<std::size_t>(i)].values;
    double s = 0.0;
    for (double x : values) s += x;
    cum_sum_[static_cast<std::size_t>(i) + 1] = cum_sum_[static_cast<std::size_t>(i)] + s;
    cum_count_[static_cast<std::size_t>(i) + 1] =
        cum_count_[static_cast<std::size_t>(i)] + static_cast<std::int64_t>(values.size());
  }
}

void PrefixStats::require_range(int a, int b) const {
  if (a < 0 || b < a || b >= level_count())
    throw StructuralError("level range [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] out of bounds for " + std::to_string(level_count()) +
                          " levels");
}

double PrefixStats::sum(int a, int b) const {
  require_range(a, b);
  return cum_sum_[static_cast<std::size_t>(b) + 1] - cum_sum_[static_cast<std::size_t>(a)];
}

std::int64_t PrefixStats::count(int a, int b) const {
  require_range(a, b);
  return cum_count_[static_cast<std::size_t>(b) + 1] - cum_count_[static_cast<std::size_t>(a)];
}

double PrefixStats::mean(int a, int b) const {
  return sum(a, b) / static_cast<double>(count(a, b));
}

std::vector<double> MonotoneEstimate::phi() const {
  std::vector<double> out(static_cast<std::size_t>(level_count()));
  for (const auto& block : blocks)
    for (int i = block.first; i <= block.last; ++i) out[static_cast<std::size_t>(i)] = block.tau;
  return out;
}

BlockScan block_end(const PrefixStats& stats, int first) {
  const int m = stats.level_count();
  BlockScan best{first, stats.sum(first, first), stats.count(first, first)};
  for (int k = first + 1; k < m; ++k) {
    const double s = stats.sum(first, k);
    const std::int64_t c = stats.count(first, k);
    // running mean <= current minimum: extend (ties break to larger k)
    if (!mean_less(best.sum, best.count, s, c)) best = {k, s, c};
  }
  return best;
}

MonotoneEstimate fit_nondecreasing(const ObservationTable& table) {
  const PrefixStats stats(table);
  const int m = stats.level_count();
  MonotoneEstimate est;
  est.direction = Direction::NonDecreasing;
  int first = 0;
  while (first < m) {
    const BlockScan scan = block_end(stats, first);
    est.blocks.push_back({first, scan.last, scan.sum, scan.count, scan.mean()});
    first = scan.last + 1;
  }
  require_strictly_increasing(est.blocks);
  return est;
}

MonotoneEstimate fit_nonincreasing(const ObservationTable& table) {
  check_shape(table);
  return reverse_estimate(fit_nondecreasing(table.reversed()), table.level_count());
}

MonotoneEstimate fit_nondecreasing_pava(const ObservationTable& table) {
  check_shape(table);
  const int m = table.level_count();
  struct Pooled {
    int first;
    double sum;
    std::int64_t count;
  };
  std::vector<Pooled> stack;
  stack.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& values = table.levels[static_cast<std::size_t>(i)].values;
    double s = 0.0;
    for (double x : values) s += x;
    Pooled cur{i, s, static_cast<std::int64_t>(values.size())};
    // merge while the previous block's mean is >= the current one's
    while (!stack.empty() &&
           !mean_less(stack.back().sum, stack.back().count, cur.sum, cur.count)) {
      cur.first = stack.back().first;
      cur.sum += stack.back().sum;
      cur.count += stack.back().count;
      stack.pop_back();
    }
    stack.push_back(cur);
  }
  MonotoneEstimate est;
  est.direction = Direction::NonDecreasing;
  est.blocks.reserve(stack.size());
  for (std::size_t r = 0; r < stack.size(); ++r) {
    const int last = r + 1 < stack.size() ? stack[r + 1].first - 1 : m - 1;
    est.blocks.push_back({stack[r].first, last, stack[r].sum, stack[r].count,
                          stack[r].sum / static_cast<double>(stack[r].count)});
  }
  require_strictly_increasing(est.blocks);
  return est;
}

double log_likelihood(const FamilySpec& family, std::span<const double> phi,
                      const ObservationTable& table) {
  check_shape(table);
  if (static_cast<int>(phi.size()) != table.level_count())
    throw StructuralError("parameter vector has " + std::to_string(phi.size()) +
                          " entries for " + std::to_string(table.level_count()) + " levels");
  for (double value : phi) family.require_theta(value);
  double total = 0.0;
  for (int i = 0; i < table.level_count(); ++i) {
    for (double x : table.levels[static_cast<std::size_t>(i)].values) {
      const double lp = log_pdf(family, x, phi[static_cast<std::size_t>(i)]);
      if (lp == kNegInf) return kNegInf;
      total += lp;
    }
  }
  return total;
}

MonotoneEstimate brute_force_fit(const ObservationTable& table, const FamilySpec& family) {
  check_shape(table);
  const int m = table.level_count();
  if (m > 12)
    throw ConfigError("brute_force_fit: " + std::to_string(m) +
                      " levels exceeds the exhaustive-search limit of 12");
  const PrefixStats stats(table);

  std::vector<FittedBlock> candidate;
  std::vector<FittedBlock> best_blocks;
  std::vector<double> phi(static_cast<std::size_t>(m));
  double best_ll = kNegInf;
  double second_ll = kNegInf;
  bool have_best = false;

  // bit i of mask set = cut between level i and i+1
  const std::uint32_t mask_limit = static_cast<std::uint32_t>(1) << (m - 1);
  for (std::uint32_t mask = 0; mask < mask_limit; ++mask) {
    candidate.clear();
    int first = 0;
    bool increasing = true;
    for (int i = 0; i < m; ++i) {
      if (i + 1 == m || (mask >> i) & 1u) {
        const double s = stats.sum(first, i);
        const std::int64_t c = stats.count(first, i);
        if (!candidate.empty() &&
            !mean_less(candidate.back().sum, candidate.back().count, s, c)) {
          increasing = false;
          break;
        }
        candidate.push_back({first, i, s, c, s / static_cast<double>(c)});
        first = i + 1;
      }
    }
    if (!increasing) continue;
    for (const auto& block : candidate)
      for (int i = block.first; i <= block.last; ++i)
        phi[static_cast<std::size_t>(i)] = block.tau;
    const double ll = log_likelihood(family, phi, table);
    if (!have_best || ll > best_ll) {
      second_ll = have_best ? best_ll : kNegInf;
      best_ll = ll;
      best_blocks = candidate;
      have_best = true;
    } else if (ll > second_ll) {
      second_ll = ll;
    }
  }

  if (!have_best)
    throw std::logic_error("brute_force_fit: no strictly increasing candidate exists");
  if (best_ll == kNegInf)
    throw ValidationError(std::string("brute_force_fit: data has zero likelihood under the ") +
                          family.name() + " family for every candidate");
  if (!(best_ll > second_ll))
    throw std::logic_error("brute_force_fit: maximizer is not unique");
  return {Direction::NonDecreasing, std::move(best_blocks)};
}

MonotoneEstimate brute_force_fit(const ObservationTable& table) {
  check_shape(table);
  for (const auto& level : table.levels)
    for (double x : level.values)
      if (x != 0.0 && x != 1.0)
        throw ConfigError(
            "brute_force_fit without a family requires 0/1 data; pass a FamilySpec");
  return brute_force_fit(table, FamilySpec::bernoulli());
}

}  // namespace monofit
