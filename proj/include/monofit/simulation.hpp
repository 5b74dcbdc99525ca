#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monofit/families.hpp"
#include "monofit/monotone_fit.hpp"
#include "monofit/rng.hpp"
#include "monofit/table.hpp"

namespace monofit {

// Sampling model for replicate tables: per-level parameters plus the
// level structure (counts and labels) copied from a template table.
struct HypothesisSpec {
  FamilySpec family;
  std::vector<double> theta;
  std::vector<std::int64_t> counts;
  std::vector<std::string> labels;
};

// theta constant at the template's grand mean.
HypothesisSpec null_constant_hypothesis(const FamilySpec& family,
                                        const ObservationTable& templ);

// theta = the template's fitted non-decreasing estimate, expanded per level.
HypothesisSpec alternative_fit_hypothesis(const FamilySpec& family,
                                          const ObservationTable& templ);

// A table with the template's structure, each value drawn from
// f(.|theta_i).  Deterministic given the rng state.
ObservationTable generate_table(const HypothesisSpec& hypothesis, Rng& rng);

// Spread of the non-decreasing fit minus spread of the non-increasing fit
// between the extreme levels: (f_m - f_1) - (g_1 - g_m).
double delta_statistic(const ObservationTable& table);

enum class Statistic {
  Delta,
  LogLikAtHypothesis,  // log-likelihood at the fixed hypothesis parameters
  LogLikRefit,         // log-likelihood at each table's own non-decreasing fit
};

struct StudyOptions {
  // Score log-likelihood statistics by the likelihood of each level's
  // success COUNT (adds the log binomial coefficient, which varies across
  // tables) instead of the ordered 0/1 values alone.  Bernoulli only.
  bool count_likelihood = false;
  int threads = 1;
};

struct SimulationReport {
  std::int64_t replicate_count = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> statistics;  // slot r holds replicate r's statistic
  double observed = 0.0;
  std::int64_t count_below = 0;  // replicates strictly below observed
  std::int64_t count_at_or_above = 0;
  double quantile_rank = 0.0;  // count_below / replicate_count
};

// Runs the significance study: for each replicate r an independent
// substream is derived from (master_seed, r), a table is generated under
// the hypothesis, and the statistic recorded in slot r.  Replicates may
// be evaluated concurrently; the report is bit-identical for any thread
// count.
SimulationReport run_study(const ObservationTable& observed_table,
                           const HypothesisSpec& hypothesis, Statistic statistic,
                           std::int64_t replicates, std::uint64_t master_seed,
                           const StudyOptions& options = {});

// Log of the number of distinct orderings consistent with each level's
// success count: sum_i ln C(n_i, d_i) for a 0/1 table.  The bridge
// between per-observation and per-count log-likelihoods.
double log_count_multiplicity(const ObservationTable& table);

}  // namespace monofit
