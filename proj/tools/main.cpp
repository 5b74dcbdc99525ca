// monofit: maximum-likelihood monotone response estimates for grouped data.
//
// Subcommands:
//   fit       fit a non-decreasing (or non-increasing) compound estimate
//   simulate  Monte-Carlo significance study with deterministic seeding
//   selftest  cross-check the fitter against the exhaustive oracle

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "monofit/datasets.hpp"
#include "monofit/errors.hpp"
#include "monofit/families.hpp"
#include "monofit/io.hpp"
#include "monofit/monotone_fit.hpp"
#include "monofit/rng.hpp"
#include "monofit/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // validation, domain, configuration errors
constexpr int kExitUsage = 2;    // unknown flags, missing arguments

monofit::TableFormat parse_format(const std::string& name) {
  if (name == "aggregate") return monofit::TableFormat::Aggregate;
  if (name == "long") return monofit::TableFormat::Long;
  throw monofit::ConfigError("unknown format '" + name + "'");
}

std::optional<monofit::FamilySpec> make_family(const std::string& name,
                                               std::optional<double> sigma) {
  if (name.empty()) {
    if (sigma) throw monofit::ConfigError("--sigma requires --family normal");
    return std::nullopt;
  }
  return monofit::FamilySpec::from_name(name, sigma);
}

struct FitArgs {
  std::string input;
  std::string format = "aggregate";
  std::string direction = "nondecreasing";
  std::string family;
  std::optional<double> sigma;
  std::string emit = "blocks";
  bool json = false;
};

int run_fit(const FitArgs& args) {
  const monofit::ObservationTable table =
      monofit::load_table(args.input, parse_format(args.format));
  const auto family = make_family(args.family, args.sigma);
  if (family) monofit::validate_observable(*family, table);

  monofit::MonotoneEstimate estimate;
  if (args.direction == "nondecreasing")
    estimate = monofit::fit_nondecreasing(table);
  else if (args.direction == "nonincreasing")
    estimate = monofit::fit_nonincreasing(table);
  else
    throw monofit::ConfigError("unknown direction '" + args.direction + "'");

  monofit::FitReportOptions options;
  options.json = args.json;
  options.family = family;
  if (args.emit == "blocks")
    options.emit = monofit::FitEmit::Blocks;
  else if (args.emit == "phi")
    options.emit = monofit::FitEmit::Phi;
  else if (args.emit == "plotdata")
    options.emit = monofit::FitEmit::PlotData;
  else
    throw monofit::ConfigError("unknown emit mode '" + args.emit + "'");

  monofit::emit_fit(std::cout, estimate, table, options);
  return kExitOk;
}

struct SimulateArgs {
  std::string input;
  std::string format = "aggregate";
  std::string family = "bernoulli";
  std::optional<double> sigma;
  std::string hypothesis = "null-constant";
  std::string statistic = "delta";
  std::string loglik_of = "counts";
  bool refit = false;
  std::int64_t replicates = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool json = false;
};

int run_simulate(const SimulateArgs& args) {
  const monofit::ObservationTable table =
      monofit::load_table(args.input, parse_format(args.format));
  const auto family = make_family(args.family, args.sigma);
  monofit::validate_observable(*family, table);

  monofit::HypothesisSpec hypothesis = [&] {
    if (args.hypothesis == "null-constant")
      return monofit::null_constant_hypothesis(*family, table);
    if (args.hypothesis == "alternative-fit")
      return monofit::alternative_fit_hypothesis(*family, table);
    throw monofit::ConfigError("unknown hypothesis '" + args.hypothesis + "'");
  }();

  monofit::StudyOptions options;
  options.threads = args.threads;
  monofit::Statistic statistic;
  if (args.statistic == "delta") {
    statistic = monofit::Statistic::Delta;
  } else if (args.statistic == "loglik") {
    statistic = args.refit ? monofit::Statistic::LogLikRefit
                           : monofit::Statistic::LogLikAtHypothesis;
    if (args.loglik_of == "counts")
      options.count_likelihood = true;
    else if (args.loglik_of == "values")
      options.count_likelihood = false;
    else
      throw monofit::ConfigError("unknown --loglik-of mode '" + args.loglik_of + "'");
  } else {
    throw monofit::ConfigError("unknown statistic '" + args.statistic + "'");
  }

  const monofit::SimulationReport report = monofit::run_study(
      table, hypothesis, statistic, args.replicates, args.seed, options);

  monofit::ReportMeta meta;
  meta.statistic = args.statistic == "delta"
                       ? "delta"
                       : (args.refit ? "loglik-refit" : "loglik") +
                             std::string(options.count_likelihood ? "-counts" : "-values");
  meta.hypothesis = args.hypothesis;
  meta.family = family->name();
  meta.json = args.json;
  monofit::emit_report(std::cout, report, meta);
  return kExitOk;
}

struct SelftestArgs {
  std::int64_t tables = 1000;
  std::uint64_t seed = 20260808;
  int max_levels = 8;
};

int run_selftest(const SelftestArgs& args) {
  using namespace monofit;
  if (args.max_levels < 1 || args.max_levels > 12)
    throw ConfigError("--max-levels must be in [1, 12]");
  const FamilySpec families[] = {FamilySpec::bernoulli(), FamilySpec::poisson(),
                                 FamilySpec::exponential()};
  std::int64_t checked = 0;
  for (std::int64_t t = 0; t < args.tables; ++t) {
    Rng rng = Rng::substream(args.seed, static_cast<std::uint64_t>(t));
    const FamilySpec& family = families[t % 3];
    const int m = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(args.max_levels));
    ObservationTable table;
    table.levels.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      Level& level = table.levels[static_cast<std::size_t>(i)];
      level.label = std::to_string(i + 1);
      const int n = 1 + static_cast<int>(rng.next_u64() % 4);
      for (int j = 0; j < n; ++j) {
        switch (family.kind()) {
          case FamilyKind::Bernoulli:
            level.values.push_back(rng.next_double() < 0.5 ? 1.0 : 0.0);
            break;
          case FamilyKind::Poisson:
            level.values.push_back(static_cast<double>(rng.next_u64() % 7));
            break;
          default:
            level.values.push_back(0.05 + 4.0 * rng.next_double());
            break;
        }
      }
    }
    const MonotoneEstimate fast = fit_nondecreasing(table);
    const MonotoneEstimate pava = fit_nondecreasing_pava(table);
    const MonotoneEstimate oracle = brute_force_fit(table, family);
    if (fast.blocks.size() != oracle.blocks.size() || fast.blocks.size() != pava.blocks.size())
      throw std::logic_error("selftest: block count mismatch on table " + std::to_string(t));
    for (std::size_t r = 0; r < fast.blocks.size(); ++r) {
      const bool same_range = fast.blocks[r].first == oracle.blocks[r].first &&
                              fast.blocks[r].last == oracle.blocks[r].last &&
                              fast.blocks[r].first == pava.blocks[r].first &&
                              fast.blocks[r].last == pava.blocks[r].last;
      const bool same_tau = std::abs(fast.blocks[r].tau - oracle.blocks[r].tau) <= 1e-12 &&
                            std::abs(fast.blocks[r].tau - pava.blocks[r].tau) <= 1e-12;
      if (!same_range || !same_tau)
        throw std::logic_error("selftest: block mismatch on table " + std::to_string(t));
    }
    ++checked;
  }
  std::cout << "selftest ok: " << checked
            << " random tables, fitter == exhaustive oracle == pava" << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum-likelihood monotone response estimates"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit a monotone compound estimate");
  fit->add_option("--input", fit_args.input, "input CSV path")->required();
  fit->add_option("--format", fit_args.format, "aggregate|long");
  fit->add_option("--direction", fit_args.direction, "nondecreasing|nonincreasing");
  fit->add_option("--family", fit_args.family,
                  "bernoulli|poisson|geometric|normal|exponential (adds log-likelihood)");
  fit->add_option("--sigma", fit_args.sigma, "sigma for the normal family");
  fit->add_option("--emit", fit_args.emit, "blocks|phi|plotdata");
  fit->add_flag("--json", fit_args.json, "JSON output");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo significance study");
  simulate->add_option("--input", sim_args.input, "template table CSV path")->required();
  simulate->add_option("--format", sim_args.format, "aggregate|long");
  simulate->add_option("--family", sim_args.family, "sampling family (default bernoulli)");
  simulate->add_option("--sigma", sim_args.sigma, "sigma for the normal family");
  simulate->add_option("--hypothesis", sim_args.hypothesis, "null-constant|alternative-fit");
  simulate->add_option("--statistic", sim_args.statistic, "delta|loglik");
  simulate->add_option("--loglik-of", sim_args.loglik_of,
                       "counts|values: score tables by the likelihood of per-level "
                       "success counts or of the 0/1 values (counts differ by the "
                       "binomial coefficient, which varies across tables)");
  simulate->add_flag("--refit", sim_args.refit,
                     "loglik variant: refit each table instead of using the fixed "
                     "hypothesis parameters");
  simulate->add_option("--replicates", sim_args.replicates, "number of replicates");
  simulate->add_option("--seed", sim_args.seed, "master seed");
  simulate->add_option("--threads", sim_args.threads, "worker threads (result-invariant)");
  simulate->add_flag("--json", sim_args.json, "JSON output");

  SelftestArgs self_args;
  CLI::App* selftest = app.add_subcommand("selftest", "oracle-equivalence self test");
  selftest->add_option("--tables", self_args.tables, "number of random tables");
  selftest->add_option("--seed", self_args.seed, "master seed");
  selftest->add_option("--max-levels", self_args.max_levels, "max levels per table (<= 12)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fit->parsed()) return run_fit(fit_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (selftest->parsed()) return run_selftest(self_args);
  } catch (const std::exception& e) {
    std::cerr << "monofit: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
