#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "covercheck/cover.hpp"
#include "covercheck/experiments.hpp"

using namespace covercheck;

TEST_CASE("clopper_pearson: zero-failure closed form") {
  // With no failures the exact bound is 1 - alpha^(1/trials).
  CHECK(clopper_pearson_upper(200, 0) ==
        doctest::Approx(1.0 - std::pow(0.05, 1.0 / 200)).epsilon(1e-9));
  CHECK(clopper_pearson_upper(200, 0) == doctest::Approx(0.0148670392).epsilon(1e-6));
  CHECK(clopper_pearson_upper(10, 10) == 1.0);
  CHECK(clopper_pearson_lower(10, 0) == 0.0);
}

TEST_CASE("clopper_pearson: bounds bracket the empirical rate") {
  for (int trials : {20, 100, 400}) {
    for (int f = 0; f <= trials; f += trials / 4) {
      double hat = static_cast<double>(f) / trials;
      double up = clopper_pearson_upper(trials, f);
      double lo = clopper_pearson_lower(trials, f);
      CHECK(lo <= hat + 1e-12);
      CHECK(up >= hat - 1e-12);
      CHECK(lo <= up);
    }
  }
  // Doubling the trials halves the zero-failure bound width.
  double ratio = clopper_pearson_upper(200, 0) / clopper_pearson_upper(100, 0);
  CHECK(ratio > 0.35);
  CHECK(ratio < 0.65);
}

TEST_CASE("run_mc: the split interval fails every trial at r below the gap") {
  ExperimentConfig cfg;
  cfg.space = Space::two_interval(M_SQRT1_2);
  cfg.rate = rate_params_for(cfg.space, 1.0);
  cfg.n_grid = {5, 20};
  cfg.trials = 20;
  cfg.seed = 7;
  cfg.mode = CheckMode::Arrangement;
  cfg.radius.kind = RadiusSpec::Kind::Fixed;
  cfg.radius.value = 0.25;
  auto tallies = run_mc(cfg);
  REQUIRE(tallies.size() == 2);
  for (const auto& t : tallies) {
    CHECK(t.failures == t.trials);
    CHECK(t.inconclusive == 0);
    CHECK(t.rate_hat == 1.0);
    CHECK(t.ci_upper == 1.0);
  }
}

TEST_CASE("run_mc: deterministic given the seed") {
  ExperimentConfig cfg;
  cfg.space = Space::interval();
  cfg.rate = rate_params_for(cfg.space, 1.0);
  cfg.n_grid = {10, 40};
  cfg.trials = 30;
  cfg.seed = 99;
  cfg.mode = CheckMode::Connected;
  cfg.radius.kind = RadiusSpec::Kind::Fixed;
  cfg.radius.value = 0.18;
  auto a = run_mc(cfg);
  auto b = run_mc(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].failures == b[i].failures);
    CHECK(a[i].inconclusive == b[i].inconclusive);
    CHECK(a[i].r == b[i].r);
  }

  std::ostringstream csv;
  write_tallies_csv(csv, a);
  std::string first_line = csv.str().substr(0, csv.str().find('\n'));
  CHECK(first_line ==
        "family,n,r,trials,failures,inconclusive,rate_hat,ci_upper,eps_n,r_formula,"
        "seconds");
  CHECK(tallies_to_json(a).front() == '[');
}

TEST_CASE("run_mc: rejects bad configs") {
  ExperimentConfig cfg;
  cfg.space = Space::interval();
  cfg.rate = rate_params_for(cfg.space, 1.0);
  cfg.n_grid = {40, 10};
  CHECK_THROWS_AS(run_mc(cfg), std::invalid_argument);
}

TEST_CASE("common random numbers: no verdict flips along increasing radii") {
  Space in = Space::interval();
  const int n = 60, trials = 25;
  for (int t = 0; t < trials; ++t) {
    bool was_ok = false;
    for (double r : {0.02, 0.05, 0.1, 0.2, 0.4}) {
      SplitMix64 rng = SplitMix64::keyed(5, 0x5EECULL, t);
      BallCover cover = sample_cover(in, n, r, rng);
      bool ok = check_connected(cover).verdict == Verdict::Disintegrable;
      if (was_ok) CHECK(ok);
      was_ok = ok;
    }
  }
}

TEST_CASE("critical_radius: brackets the 50% level and scales down with n") {
  Space in = Space::interval();
  auto res = critical_radius(in, 50, 60, 0.01, 11);
  CHECK(res.hi - res.lo <= 0.01 + 1e-12);
  CHECK(res.lo > 0);
  CHECK(res.hi < 1.0);

  // Certain failure below the minimal covering radius of a fixed sample.
  SplitMix64 rng = SplitMix64::keyed(11, 0x5EECULL, 0);
  BallCover tiny = sample_cover(in, 50, 1e-4, rng);
  CHECK(check_connected(tiny).verdict == Verdict::NotDisintegrable);

  auto res200 = critical_radius(in, 200, 60, 0.01, 11);
  CHECK(res200.mid < res.mid);  // larger samples need smaller radii

  CHECK_THROWS_AS(critical_radius(in, 50, 60, 0.01, 11, CheckMode::Auto, 0.4, 0.41),
                  std::invalid_argument);
}

TEST_CASE("doubling trials shrinks the zero-failure interval as expected") {
  // Run the full pipeline at a radius with certain success so failures stay 0.
  ExperimentConfig cfg;
  cfg.space = Space::interval();
  cfg.rate = rate_params_for(cfg.space, 1.0);
  cfg.n_grid = {8};
  cfg.seed = 3;
  cfg.mode = CheckMode::Connected;
  cfg.radius.kind = RadiusSpec::Kind::Fixed;
  cfg.radius.value = 1.0;

  cfg.trials = 100;
  auto a = run_mc(cfg);
  cfg.trials = 200;
  auto b = run_mc(cfg);
  REQUIRE(a[0].failures + a[0].inconclusive == 0);
  REQUIRE(b[0].failures + b[0].inconclusive == 0);
  double ratio = b[0].ci_upper / a[0].ci_upper;
  CHECK(ratio > 0.35);
  CHECK(ratio < 0.65);
}
