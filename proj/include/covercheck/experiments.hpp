#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "covercheck/bounds.hpp"
#include "covercheck/feasibility.hpp"
#include "covercheck/space.hpp"

namespace covercheck {

struct RadiusSpec {
  enum class Kind { RateFormula, Fixed, Multiplier };
  Kind kind = Kind::RateFormula;
  double value = 1.0;  // fixed radius, or multiplier on the rate formula
};

struct ExperimentConfig {
  Space space = Space::interval();
  std::string family_label;  // defaults to the space kind
  RateParams rate;
  std::vector<long> n_grid;
  int trials = 100;
  std::uint64_t seed = 0;
  CheckMode mode = CheckMode::Auto;
  RadiusSpec radius;
  CheckParams check_params;
};

/// One (n, r) cell of a Monte Carlo run. The one-sided 95% upper confidence
/// bound is exact Clopper-Pearson on failures + inconclusive (conservative).
struct TrialTally {
  std::string family;
  long n = 0;
  double r = 0;
  int trials = 0;
  int failures = 0;      // NotDisintegrable verdicts
  int inconclusive = 0;  // Inconclusive verdicts and resource-limit aborts
  double rate_hat = 0;   // failures / trials
  double ci_upper = 1;
  double eps_n = 0;      // rate_eps at this n
  double r_formula = 0;  // rate_r at this n (even when overridden)
  double seconds = 0;
};

/// Runs trials sequentially with per-trial streams keyed by
/// (seed, cell index, trial index); deterministic given the seed.
std::vector<TrialTally> run_mc(const ExperimentConfig& config);

/// Exact one-sided Clopper-Pearson bounds for a binomial proportion.
double clopper_pearson_upper(int trials, int failures, double confidence = 0.95);
double clopper_pearson_lower(int trials, int failures, double confidence = 0.95);

struct CriticalRadiusResult {
  double lo = 0, hi = 0;
  double mid = 0;
  int probes = 0;
};

/// Bisection for the radius at which the disintegrability frequency crosses
/// one half, with common random numbers across radii (per-trial verdicts are
/// monotone in r, so the empirical frequency is too). Throws
/// std::invalid_argument when [r_lo, r_hi] does not bracket the 50% level.
CriticalRadiusResult critical_radius(const Space& space, int n, int trials, double tol,
                                     std::uint64_t seed,
                                     CheckMode mode = CheckMode::Auto,
                                     double r_lo = 1e-4, double r_hi = 0);

void write_tallies_csv(std::ostream& os, const std::vector<TrialTally>& tallies);
std::string tallies_to_json(const std::vector<TrialTally>& tallies);

}  // namespace covercheck
