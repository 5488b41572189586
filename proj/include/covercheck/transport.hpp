#pragma once

#include <vector>

#include "covercheck/certificate.hpp"
#include "covercheck/space.hpp"

namespace covercheck {

enum class WMethod { QuantileExact, CertificateUpper, MatchingDiscrete };
const char* to_string(WMethod m);

struct WassersteinResult {
  double p = 1;
  double value = 0;
  WMethod method = WMethod::QuantileExact;
  /// Reported approximation slack. Zero for exact evaluations; for the
  /// cell-midpoint certificate route on cubes this is the worst half cell
  /// diameter and the true coupling cost lies within it.
  double error_bound = 0;
  /// False when the value is only a proven upper bound (circle with p > 1,
  /// matching at finite resolution).
  bool exact = true;
};

/// W_p between mu and the empirical measure of the sample, p in [1, 8].
/// Interval: closed-form quantile integral, exact. Circle: exact CDF-median
/// value for p = 1; for p > 1 the minimum of the unrolled problem over
/// candidate cuts (every atom and gap midpoint, then a golden-section polish),
/// a documented upper bound.
WassersteinResult wasserstein_1d(const Space& space, const std::vector<Point>& sample,
                                 double p);

/// Transport cost of the certificate coupling (each component measure moved
/// onto its center). Exact per-cell integration on 1-D kinds; cell midpoints
/// with a reported error bound on cubes. Always at most r plus the cell slack.
WassersteinResult coupling_cost(const Space& space, const Certificate& cert, double p);

/// Exact assignment cost between m equal-mass quantile atoms of mu and the
/// sample atoms (duplicated m/n times). m <= 512 and n must divide m; cubes
/// need a uniform density and m = k^D.
WassersteinResult wasserstein_matching(const Space& space,
                                       const std::vector<Point>& sample, int m,
                                       double p);

}  // namespace covercheck
