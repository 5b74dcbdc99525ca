#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "monofit/datasets.hpp"
#include "monofit/errors.hpp"
#include "monofit/monotone_fit.hpp"

#include "support.hpp"

using namespace monofit;
using testsupport::make_table;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_same_blocks(const MonotoneEstimate& a, const MonotoneEstimate& b, double tau_tol) {
  REQUIRE(a.blocks.size() == b.blocks.size());
  for (std::size_t r = 0; r < a.blocks.size(); ++r) {
    CHECK(a.blocks[r].first == b.blocks[r].first);
    CHECK(a.blocks[r].last == b.blocks[r].last);
    CHECK(std::fabs(a.blocks[r].tau - b.blocks[r].tau) <= tau_tol);
  }
}

}  // namespace

TEST_CASE("prefix stats") {
  const auto single = make_table({{0, 0, 1}});
  const PrefixStats stats(single);
  CHECK(stats.mean(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(stats.count(0, 0) == 3);

  const auto two = make_table({{1, 1}, {0}});
  const PrefixStats stats2(two);
  CHECK(stats2.mean(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(stats2.sum(0, 1) == 2.0);

  CHECK_THROWS_AS(stats2.mean(0, 2), StructuralError);
  CHECK_THROWS_AS(stats2.mean(-1, 0), StructuralError);
  CHECK_THROWS_AS(stats2.mean(1, 0), StructuralError);

  const PrefixStats sat(datasets::sat_noshow());
  CHECK(sat.level_count() == 35);
  CHECK(sat.sum(0, 34) == 26.0);
  CHECK(sat.count(0, 34) == 152);
  CHECK(sat.mean(0, 34) == 26.0 / 152.0);
}

TEST_CASE("block_end") {
  SUBCASE("exact tie extends to the largest index") {
    // level means 3, 1, 2: running means 3, 2, 2 -> min 2 attained at both
    // k=1 and k=2; the tie goes to k=2.
    const PrefixStats stats(make_table({{3}, {1}, {2}}));
    const BlockScan scan = block_end(stats, 0);
    CHECK(scan.last == 2);
    CHECK(scan.mean() == 2.0);
    CHECK(scan.sum == 6.0);
    CHECK(scan.count == 3);
  }
  SUBCASE("scan from an interior level") {
    // level means 1, 3, 2: from level 1 the running means are 3, 2.5
    const PrefixStats stats(make_table({{1}, {3}, {2}}));
    const BlockScan scan = block_end(stats, 1);
    CHECK(scan.last == 2);
    CHECK(scan.mean() == 2.5);
  }
  SUBCASE("single level") {
    const PrefixStats stats(make_table({{4, 6}}));
    const BlockScan scan = block_end(stats, 0);
    CHECK(scan.last == 0);
    CHECK(scan.mean() == 5.0);
  }
}

TEST_CASE("fit_nondecreasing: small cases") {
  SUBCASE("already increasing means stay singleton blocks") {
    const auto est = fit_nondecreasing(make_table({{0.25}, {0.5}, {0.75}}));
    REQUIRE(est.blocks.size() == 3);
    CHECK(est.phi() == std::vector<double>{0.25, 0.5, 0.75});
  }
  SUBCASE("3,1,2 pools into one block") {
    const auto est = fit_nondecreasing(make_table({{3}, {1}, {2}}));
    REQUIRE(est.blocks.size() == 1);
    CHECK(est.blocks[0].first == 0);
    CHECK(est.blocks[0].last == 2);
    CHECK(est.blocks[0].tau == 2.0);
    CHECK(est.phi() == std::vector<double>{2.0, 2.0, 2.0});
  }
  SUBCASE("single level") {
    const auto est = fit_nondecreasing(make_table({{0, 1, 1, 1}}));
    REQUIRE(est.blocks.size() == 1);
    CHECK(est.blocks[0].tau == 0.75);
  }
  SUBCASE("empty input is rejected") {
    ObservationTable empty;
    CHECK_THROWS_AS(fit_nondecreasing(empty), StructuralError);
    ObservationTable empty_level;
    empty_level.levels = {{"a", {}}};
    CHECK_THROWS_AS(fit_nondecreasing(empty_level), StructuralError);
  }
}

TEST_CASE("fit_nondecreasing: no-show dataset reproduces the 8 blocks") {
  const auto est = fit_nondecreasing(datasets::sat_noshow());
  REQUIRE(est.blocks.size() == 8);
  const struct {
    std::int64_t count;
    double sum;
    double tau;
  } expected[] = {
      {15, 0.0, 0.0},         {69, 9.0, 9.0 / 69.0}, {35, 5.0, 5.0 / 35.0},
      {5, 1.0, 1.0 / 5.0},    {3, 1.0, 1.0 / 3.0},   {19, 7.0, 7.0 / 19.0},
      {5, 2.0, 2.0 / 5.0},    {1, 1.0, 1.0},
  };
  for (std::size_t r = 0; r < 8; ++r) {
    CHECK(est.blocks[r].count == expected[r].count);
    CHECK(est.blocks[r].sum == expected[r].sum);
    CHECK(est.blocks[r].tau == expected[r].tau);
  }
  // Block boundaries by label.
  const auto& table = datasets::sat_noshow();
  CHECK(table.levels[static_cast<std::size_t>(est.blocks[0].first)].label == "330");
  CHECK(table.levels[static_cast<std::size_t>(est.blocks[0].last)].label == "430");
  CHECK(table.levels[static_cast<std::size_t>(est.blocks[1].last)].label == "530");
  CHECK(table.levels[static_cast<std::size_t>(est.blocks[7].first)].label == "800");
}

TEST_CASE("fit_nonincreasing") {
  SUBCASE("no-show dataset pools to the constant grand mean") {
    const auto est = fit_nonincreasing(datasets::sat_noshow());
    REQUIRE(est.blocks.size() == 1);
    CHECK(est.direction == Direction::NonIncreasing);
    CHECK(est.blocks[0].first == 0);
    CHECK(est.blocks[0].last == 34);
    CHECK(est.blocks[0].tau == 26.0 / 152.0);
  }
  SUBCASE("strictly decreasing means stay singleton blocks") {
    const auto est = fit_nonincreasing(make_table({{0.75}, {0.5}, {0.25}}));
    REQUIRE(est.blocks.size() == 3);
    CHECK(est.phi() == std::vector<double>{0.75, 0.5, 0.25});
    CHECK(est.blocks[0].first == 0);
    CHECK(est.blocks[0].last == 0);
  }
  SUBCASE("1,3,2 pools into constant 2") {
    const auto est = fit_nonincreasing(make_table({{1}, {3}, {2}}));
    REQUIRE(est.blocks.size() == 1);
    CHECK(est.blocks[0].tau == 2.0);
  }
}

TEST_CASE("log_likelihood") {
  const auto sat = datasets::sat_noshow();
  const FamilySpec bern = FamilySpec::bernoulli();
  SUBCASE("constant rate on the no-show dataset") {
    const std::vector<double> phi(35, 26.0 / 152.0);
    // 26 ln(26/152) + 126 ln(126/152), by independent scalar arithmetic
    const double expected = 26.0 * std::log(26.0 / 152.0) + 126.0 * std::log(126.0 / 152.0);
    CHECK(log_likelihood(bern, phi, sat) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(log_likelihood(bern, phi, sat) ==
          doctest::Approx(-69.54780890418925).epsilon(1e-12));
  }
  SUBCASE("zero-probability factor forces -infinity") {
    std::vector<double> phi(35, 26.0 / 152.0);
    phi[6] = 0.0;  // level 440 contains a no-show
    CHECK(log_likelihood(bern, phi, sat) == kNegInf);
  }
  SUBCASE("single observation at its mean equals log_pdf") {
    const auto table = make_table({{3.0}});
    const FamilySpec pois = FamilySpec::poisson();
    const std::vector<double> phi{3.0};
    CHECK(log_likelihood(pois, phi, table) == log_pdf(pois, 3.0, 3.0));
  }
  SUBCASE("length mismatch and domain errors") {
    const std::vector<double> short_phi(34, 0.1);
    CHECK_THROWS_AS(log_likelihood(bern, short_phi, sat), StructuralError);
    std::vector<double> bad(35, 0.1);
    bad[0] = 1.5;
    CHECK_THROWS_AS(log_likelihood(bern, bad, sat), DomainError);
  }
}

TEST_CASE("brute force oracle") {
  SUBCASE("single level") {
    const auto est = brute_force_fit(make_table({{0, 1, 1}}));
    REQUIRE(est.blocks.size() == 1);
    CHECK(est.blocks[0].tau == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("level-count limit") {
    std::vector<std::vector<double>> big(13, std::vector<double>{1.0});
    CHECK_THROWS_AS(brute_force_fit(make_table(big)), ConfigError);
  }
  SUBCASE("family required for non-binary data") {
    CHECK_THROWS_AS(brute_force_fit(make_table({{2.0}, {3.0}})), ConfigError);
    CHECK_NOTHROW(brute_force_fit(make_table({{2.0}, {3.0}}), FamilySpec::poisson()));
  }
  SUBCASE("matches the fitter on the first 8 no-show levels") {
    ObservationTable head;
    const auto sat = datasets::sat_noshow();
    head.levels.assign(sat.levels.begin(), sat.levels.begin() + 8);
    check_same_blocks(fit_nondecreasing(head), brute_force_fit(head), 0.0);
  }
}

TEST_CASE("property: fitter == oracle == pava on random tables") {
  const FamilySpec families[] = {FamilySpec::bernoulli(), FamilySpec::poisson(),
                                 FamilySpec::exponential()};
  for (int trial = 0; trial < 600; ++trial) {
    Rng rng = Rng::substream(99, static_cast<std::uint64_t>(trial));
    const FamilySpec& family = families[trial % 3];
    const auto table = testsupport::random_table(family, rng, 8, 4);
    const auto fast = fit_nondecreasing(table);
    check_same_blocks(fast, brute_force_fit(table, family), 1e-12);
    check_same_blocks(fast, fit_nondecreasing_pava(table), 1e-12);
  }
}

TEST_CASE("property: family invariance of the argmax on 0/1 data") {
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng = Rng::substream(123, static_cast<std::uint64_t>(trial));
    const auto table = testsupport::random_table(FamilySpec::bernoulli(), rng, 7, 4);
    const auto plain = fit_nondecreasing(table);
    check_same_blocks(plain, brute_force_fit(table, FamilySpec::bernoulli()), 0.0);
    check_same_blocks(plain, brute_force_fit(table, FamilySpec::poisson()), 0.0);
  }
}

TEST_CASE("property: maximality over random non-decreasing candidates") {
  const FamilySpec families[] = {FamilySpec::bernoulli(), FamilySpec::poisson(),
                                 FamilySpec::exponential()};
  for (int trial = 0; trial < 60; ++trial) {
    Rng rng = Rng::substream(321, static_cast<std::uint64_t>(trial));
    const FamilySpec& family = families[trial % 3];
    const auto table = testsupport::random_table(family, rng, 8, 4);
    const auto fit = fit_nondecreasing(table);
    const double best = log_likelihood(family, fit.phi(), table);
    for (int k = 0; k < 200; ++k) {
      const auto lambda = testsupport::random_nondecreasing_theta(family, table, rng);
      CHECK(log_likelihood(family, lambda, table) <= best + 1e-9);
    }
  }
}

TEST_CASE("property: block structure invariants on random tables") {
  for (int trial = 0; trial < 400; ++trial) {
    Rng rng = Rng::substream(555, static_cast<std::uint64_t>(trial));
    const FamilySpec family =
        trial % 2 == 0 ? FamilySpec::bernoulli() : FamilySpec::poisson();
    const auto table = testsupport::random_table(family, rng, 10, 4);
    const PrefixStats stats(table);
    const auto est = fit_nondecreasing(table);

    // blocks partition the levels
    CHECK(est.blocks.front().first == 0);
    CHECK(est.blocks.back().last == table.level_count() - 1);
    for (std::size_t r = 1; r < est.blocks.size(); ++r)
      CHECK(est.blocks[r].first == est.blocks[r - 1].last + 1);

    for (std::size_t r = 0; r < est.blocks.size(); ++r) {
      const auto& block = est.blocks[r];
      // kappa identity: the block value is the block mean
      CHECK(block.tau == stats.mean(block.first, block.last));
      // strict increase
      if (r > 0) CHECK(est.blocks[r - 1].tau < block.tau);
      // suffix means never exceed the block mean
      for (int t = block.first + 1; t <= block.last; ++t)
        CHECK(stats.mean(t, block.last) <= block.tau + 1e-12);
    }

    // phi is non-decreasing
    const auto phi = est.phi();
    for (std::size_t i = 1; i < phi.size(); ++i) CHECK(phi[i - 1] <= phi[i]);

    // pooling preserves the grand mean
    double weighted = 0.0;
    for (const auto& block : est.blocks) weighted += block.tau * static_cast<double>(block.count);
    weighted /= static_cast<double>(table.observation_count());
    CHECK(weighted == doctest::Approx(table.grand_mean()).epsilon(1e-12));

    // reversal duality, exactly
    const auto dual = fit_nonincreasing(table);
    const auto re_reversed = fit_nondecreasing(table.reversed());
    REQUIRE(dual.blocks.size() == re_reversed.blocks.size());
    const int m = table.level_count();
    for (std::size_t r = 0; r < dual.blocks.size(); ++r) {
      const auto& d = dual.blocks[r];
      const auto& s = re_reversed.blocks[re_reversed.blocks.size() - 1 - r];
      CHECK(d.first == m - 1 - s.last);
      CHECK(d.last == m - 1 - s.first);
      CHECK(d.tau == s.tau);
    }
    // and the dual's block values strictly decrease
    for (std::size_t r = 1; r < dual.blocks.size(); ++r)
      CHECK(dual.blocks[r].tau < dual.blocks[r - 1].tau);
  }
}
