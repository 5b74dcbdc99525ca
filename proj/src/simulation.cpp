#include "monofit/simulation.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "monofit/errors.hpp"

namespace monofit {

namespace {

std::vector<std::int64_t> level_counts(const ObservationTable& table) {
  std::vector<std::int64_t> counts;
  counts.reserve(table.levels.size());
  for (const auto& level : table.levels)
    counts.push_back(static_cast<std::int64_t>(level.values.size()));
  return counts;
}

std::vector<std::string> level_labels(const ObservationTable& table) {
  std::vector<std::string> labels;
  labels.reserve(table.levels.size());
  for (const auto& level : table.levels) labels.push_back(level.label);
  return labels;
}

void check_hypothesis(const HypothesisSpec& hyp) {
  if (hyp.theta.empty()) throw ConfigError("hypothesis has no levels");
  if (hyp.theta.size() != hyp.counts.size() || hyp.theta.size() != hyp.labels.size())
    throw ConfigError("hypothesis theta/counts/labels lengths disagree");
  for (double t : hyp.theta) hyp.family.require_theta(t);
  for (std::int64_t n : hyp.counts)
    if (n < 1) throw ConfigError("hypothesis level count must be >= 1");
}

void require_binary(const ObservationTable& table, const char* what) {
  for (const auto& level : table.levels)
    for (double x : level.values)
      if (x != 0.0 && x != 1.0)
        throw ConfigError(std::string(what) + " requires 0/1 observations");
}

}  // namespace

HypothesisSpec null_constant_hypothesis(const FamilySpec& family,
                                        const ObservationTable& templ) {
  check_shape(templ);
  const double mean = templ.grand_mean();
  family.require_theta(mean);
  return {family,
          std::vector<double>(static_cast<std::size_t>(templ.level_count()), mean),
          level_counts(templ), level_labels(templ)};
}

HypothesisSpec alternative_fit_hypothesis(const FamilySpec& family,
                                          const ObservationTable& templ) {
  const MonotoneEstimate fit = fit_nondecreasing(templ);
  HypothesisSpec hyp{family, fit.phi(), level_counts(templ), level_labels(templ)};
  check_hypothesis(hyp);
  return hyp;
}

ObservationTable generate_table(const HypothesisSpec& hypothesis, Rng& rng) {
  check_hypothesis(hypothesis);
  ObservationTable table;
  table.levels.resize(hypothesis.theta.size());
  for (std::size_t i = 0; i < hypothesis.theta.size(); ++i) {
    Level& level = table.levels[i];
    level.label = hypothesis.labels[i];
    level.values.reserve(static_cast<std::size_t>(hypothesis.counts[i]));
    for (std::int64_t j = 0; j < hypothesis.counts[i]; ++j)
      level.values.push_back(sample(hypothesis.family, hypothesis.theta[i], rng));
  }
  return table;
}

double delta_statistic(const ObservationTable& table) {
  const MonotoneEstimate f = fit_nondecreasing(table);
  const MonotoneEstimate g = fit_nonincreasing(table);
  const double f_spread = f.blocks.back().tau - f.blocks.front().tau;
  const double g_spread = g.blocks.front().tau - g.blocks.back().tau;
  return f_spread - g_spread;
}

double log_count_multiplicity(const ObservationTable& table) {
  check_shape(table);
  require_binary(table, "log_count_multiplicity");
  double total = 0.0;
  for (int i = 0; i < table.level_count(); ++i) {
    const double n = static_cast<double>(table.levels[static_cast<std::size_t>(i)].values.size());
    const double d = table.level_sum(i);
    total += std::lgamma(n + 1.0) - std::lgamma(d + 1.0) - std::lgamma(n - d + 1.0);
  }
  return total;
}

SimulationReport run_study(const ObservationTable& observed_table,
                           const HypothesisSpec& hypothesis, Statistic statistic,
                           std::int64_t replicates, std::uint64_t master_seed,
                           const StudyOptions& options) {
  check_shape(observed_table);
  check_hypothesis(hypothesis);
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (observed_table.level_count() != static_cast<int>(hypothesis.theta.size()))
    throw ConfigError("observed table and hypothesis disagree on the number of levels");

  const bool loglik_statistic = statistic != Statistic::Delta;
  if (loglik_statistic && options.count_likelihood) {
    if (hypothesis.family.kind() != FamilyKind::Bernoulli)
      throw ConfigError(
          "count likelihood applies to the bernoulli family only; "
          "score by value likelihood instead");
    require_binary(observed_table, "count likelihood");
  }

  auto statistic_of = [&](const ObservationTable& table) -> double {
    switch (statistic) {
      case Statistic::Delta:
        return delta_statistic(table);
      case Statistic::LogLikAtHypothesis: {
        double ll = log_likelihood(hypothesis.family, hypothesis.theta, table);
        if (options.count_likelihood) ll += log_count_multiplicity(table);
        return ll;
      }
      case Statistic::LogLikRefit: {
        const MonotoneEstimate fit = fit_nondecreasing(table);
        double ll = log_likelihood(hypothesis.family, fit.phi(), table);
        if (options.count_likelihood) ll += log_count_multiplicity(table);
        return ll;
      }
    }
    throw ConfigError("unknown statistic");
  };

  SimulationReport report;
  report.replicate_count = replicates;
  report.master_seed = master_seed;
  report.observed = statistic_of(observed_table);
  report.statistics.resize(static_cast<std::size_t>(replicates));

  // Slot r is written by whichever worker owns replicate r; substream
  // derivation from (master_seed, r) makes the result schedule-independent.
  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      Rng rng = Rng::substream(master_seed, static_cast<std::uint64_t>(r));
      const ObservationTable table = generate_table(hypothesis, rng);
      report.statistics[static_cast<std::size_t>(r)] = statistic_of(table);
    }
  };

  const int threads = options.threads;
  if (threads <= 1 || replicates == 1) {
    run_range(0, replicates);
  } else {
    const std::int64_t worker_count = std::min<std::int64_t>(threads, replicates);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(worker_count));
    pool.reserve(static_cast<std::size_t>(worker_count));
    const std::int64_t chunk = (replicates + worker_count - 1) / worker_count;
    for (std::int64_t w = 0; w < worker_count; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min(replicates, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& failure : failures)
      if (failure) std::rethrow_exception(failure);
  }

  for (double value : report.statistics) {
    if (value < report.observed)
      ++report.count_below;
    else
      ++report.count_at_or_above;
  }
  report.quantile_rank =
      static_cast<double>(report.count_below) / static_cast<double>(replicates);
  return report;
}

}  // namespace monofit
