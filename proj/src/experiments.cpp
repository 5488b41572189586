#include "covercheck/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "covercheck/cover.hpp"
#include "covercheck/errors.hpp"

namespace covercheck {

namespace {

// log P(X <= f) for X ~ Binomial(trials, p), summed in log space.
double log_binom_cdf(int trials, int f, double p) {
  if (p <= 0) return 0.0;
  if (p >= 1) return f >= trials ? 0.0 : -std::numeric_limits<double>::infinity();
  double lp = std::log(p), lq = std::log1p(-p);
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(f + 1);
  for (int k = 0; k <= f; ++k) {
    double lt = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
                std::lgamma(trials - k + 1.0) + k * lp + (trials - k) * lq;
    terms[k] = lt;
    lmax = std::max(lmax, lt);
  }
  double s = 0;
  for (double lt : terms) s += std::exp(lt - lmax);
  return lmax + std::log(s);
}

double radius_for(const ExperimentConfig& cfg, long n) {
  switch (cfg.radius.kind) {
    case RadiusSpec::Kind::Fixed: return cfg.radius.value;
    case RadiusSpec::Kind::Multiplier: return cfg.radius.value * rate_r(cfg.rate, n);
    case RadiusSpec::Kind::RateFormula: return rate_r(cfg.rate, n);
  }
  return rate_r(cfg.rate, n);
}

}  // namespace

double clopper_pearson_upper(int trials, int failures, double confidence) {
  if (trials <= 0) throw std::invalid_argument("clopper_pearson needs trials >= 1");
  if (failures >= trials) return 1.0;
  const double alpha = 1.0 - confidence;
  // Smallest p with P(X <= failures | p) <= alpha.
  double lo = static_cast<double>(failures) / trials, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (log_binom_cdf(trials, failures, mid) > std::log(alpha)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double clopper_pearson_lower(int trials, int failures, double confidence) {
  if (trials <= 0) throw std::invalid_argument("clopper_pearson needs trials >= 1");
  if (failures <= 0) return 0.0;
  const double alpha = 1.0 - confidence;
  // Largest p with P(X >= failures | p) <= alpha.
  double lo = 0.0, hi = static_cast<double>(failures) / trials;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double tail = 1.0 - std::exp(log_binom_cdf(trials, failures - 1, mid));
    if (tail < alpha) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<TrialTally> run_mc(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("run_mc needs trials >= 1");
  for (std::size_t i = 0; i + 1 < config.n_grid.size(); ++i)
    if (config.n_grid[i] >= config.n_grid[i + 1])
      throw std::invalid_argument("run_mc needs an increasing n grid");

  std::vector<TrialTally> out;
  for (std::size_t cell = 0; cell < config.n_grid.size(); ++cell) {
    const long n = config.n_grid[cell];
    TrialTally tally;
    tally.family =
        config.family_label.empty() ? to_string(config.space.kind()) : config.family_label;
    tally.n = n;
    tally.r = radius_for(config, n);
    try {
      tally.r_formula = rate_r(config.rate, n);
    } catch (const std::invalid_argument&) {
      tally.r_formula = 0;  // families without a radius schedule
    }
    tally.eps_n = rate_eps(config.rate, n);
    tally.trials = config.trials;

    auto t0 = std::chrono::steady_clock::now();
    for (int trial = 0; trial < config.trials; ++trial) {
      SplitMix64 rng = SplitMix64::keyed(config.seed, cell, trial);
      BallCover cover =
          sample_cover(config.space, static_cast<int>(n), tally.r, rng);
      try {
        CheckOutcome outcome = run_check(cover, config.mode, config.check_params);
        if (outcome.verdict == Verdict::NotDisintegrable) ++tally.failures;
        else if (outcome.verdict == Verdict::Inconclusive) ++tally.inconclusive;
      } catch (const ResourceLimitError&) {
        ++tally.inconclusive;  // recorded, never dropped
      }
    }
    auto t1 = std::chrono::steady_clock::now();
    tally.seconds = std::chrono::duration<double>(t1 - t0).count();
    tally.rate_hat = static_cast<double>(tally.failures) / tally.trials;
    tally.ci_upper =
        clopper_pearson_upper(tally.trials, tally.failures + tally.inconclusive);
    out.push_back(std::move(tally));
  }
  return out;
}

CriticalRadiusResult critical_radius(const Space& space, int n, int trials, double tol,
                                     std::uint64_t seed, CheckMode mode, double r_lo,
                                     double r_hi) {
  if (n < 1 || trials < 1 || tol <= 0)
    throw std::invalid_argument("critical_radius needs n, trials >= 1 and tol > 0");
  if (r_hi <= 0) r_hi = space.diameter();

  // Common random numbers: trial t draws the same sample at every radius, so
  // each trial's verdict flips at most once along r.
  auto success_rate = [&](double r) {
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      SplitMix64 rng = SplitMix64::keyed(seed, 0x5EECULL, t);
      BallCover cover = sample_cover(space, n, r, rng);
      if (run_check(cover, mode).verdict == Verdict::Disintegrable) ++ok;
    }
    return static_cast<double>(ok) / trials;
  };

  CriticalRadiusResult res;
  res.probes = 2;
  if (success_rate(r_lo) >= 0.5 || success_rate(r_hi) < 0.5)
    throw std::invalid_argument("critical_radius: [r_lo, r_hi] does not bracket 50%");
  double lo = r_lo, hi = r_hi;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    ++res.probes;
    if (success_rate(mid) >= 0.5) hi = mid;
    else lo = mid;
  }
  res.lo = lo;
  res.hi = hi;
  res.mid = 0.5 * (lo + hi);
  return res;
}

void write_tallies_csv(std::ostream& os, const std::vector<TrialTally>& tallies) {
  os << "family,n,r,trials,failures,inconclusive,rate_hat,ci_upper,eps_n,r_formula,"
        "seconds\n";
  char buf[256];
  for (const auto& t : tallies) {
    std::snprintf(buf, sizeof buf, "%s,%ld,%.12g,%d,%d,%d,%.12g,%.12g,%.12g,%.12g,%.3f\n",
                  t.family.c_str(), t.n, t.r, t.trials, t.failures, t.inconclusive,
                  t.rate_hat, t.ci_upper, t.eps_n, t.r_formula, t.seconds);
    os << buf;
  }
}

std::string tallies_to_json(const std::vector<TrialTally>& tallies) {
  std::ostringstream os;
  os << "[";
  char buf[384];
  for (std::size_t i = 0; i < tallies.size(); ++i) {
    const auto& t = tallies[i];
    std::snprintf(buf, sizeof buf,
                  "%s{\"family\":\"%s\",\"n\":%ld,\"r\":%.12g,\"trials\":%d,"
                  "\"failures\":%d,\"inconclusive\":%d,\"rate_hat\":%.12g,"
                  "\"ci_upper\":%.12g,\"eps_n\":%.12g,\"r_formula\":%.12g,"
                  "\"seconds\":%.3f}",
                  i ? "," : "", t.family.c_str(), t.n, t.r, t.trials, t.failures,
                  t.inconclusive, t.rate_hat, t.ci_upper, t.eps_n, t.r_formula,
                  t.seconds);
    os << buf;
  }
  os << "]";
  return os.str();
}

}  // namespace covercheck
