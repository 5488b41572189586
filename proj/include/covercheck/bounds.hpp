#pragma once

#include <optional>
#include <vector>

#include "covercheck/certificate.hpp"
#include "covercheck/cover.hpp"
#include "covercheck/rng.hpp"
#include "covercheck/space.hpp"

namespace covercheck {

/// Parameters of the per-family radius/failure-rate formulas. c and C bound
/// the density relative to uniform probability; alpha is the failure-rate
/// exponent; p only enters the literature comparison curve.
struct RateParams {
  SpaceKind family = SpaceKind::Interval;
  double alpha = 1.0;
  double c = 1.0;
  double C = 1.0;
  int dim = 1;         // cubes
  int edge_count = 1;  // graphs
  double p = 1.0;      // comparison curve only
};

RateParams rate_params_for(const Space& space, double alpha);

/// Closed-form radius schedule of the matching family theorem. n >= 2.
double rate_r(const RateParams& params, long n);

/// Failure-probability schedule: n^{-alpha}, with the graph family picking up
/// its [|E|(|E|-1)]^{|E|-1} prefactor (0^0 read as 1).
double rate_eps(const RateParams& params, long n);

/// Best published high-probability Wasserstein rate shape with all hidden
/// constants set to 1; comparison plots only. n >= 3.
double rate_best_known(const RateParams& params, long n);

/// Lipschitz test functions the gap evaluator understands. Piecewise-linear
/// lists are per component and must be continuous within each component.
struct TestFn {
  enum class Kind { Constant, Spike, ComponentIndicator, PiecewiseLinear, Grid };
  Kind kind = Kind::Constant;
  double value = 0;  // Constant
  double spike_center = 0, spike_delta = 0, spike_slope = 0;
  double scale = 0;  // ComponentIndicator
  std::vector<std::vector<double>> xs, ys;  // PiecewiseLinear
  int grid_res = 1;
  std::vector<double> grid_values;  // Grid (cube)
};

TestFn make_constant(double value);
/// Footnote-style spike: anchored in the widest gap between consecutive order
/// statistics, height L*delta with delta = min(gap/2, sqrt(eps_target / L)),
/// so it vanishes at every sample point and integrates to at most eps_target.
TestFn make_spike(const Space& space, const std::vector<Point>& sample, double L,
                  double eps_target);
TestFn make_component_indicator(double scale);
TestFn make_piecewise_linear(const Space& space, std::vector<std::vector<double>> xs,
                             std::vector<std::vector<double>> ys);
TestFn random_piecewise_linear(const Space& space, SplitMix64& rng, int max_pieces);
TestFn make_grid_fn(const Space& space, int res, std::vector<double> values);

double integral_mu(const Space& space, const TestFn& fn);
double eval_fn(const Space& space, const TestFn& fn, const Point& x);
double global_lipschitz(const Space& space, const TestFn& fn);
/// Lipschitz constant of fn over one ball trace; analytic for the built-in
/// kinds, a conservative pairwise bound for grid functions.
double local_lipschitz(const Space& space, const TestFn& fn, const RegionTrace& trace);

struct AvgCaseGap {
  double lhs = 0;       // |integral of f d mu - empirical average|
  double rhs_avg = 0;   // r * mean local Lipschitz constant over the balls
  double rhs_worst = 0; // global Lipschitz constant * W_1(mu, empirical)
  bool bound_holds = false;  // lhs <= rhs_avg + tolerance
};

AvgCaseGap avg_case_gap(const Space& space, const std::vector<Point>& sample, double r,
                        const TestFn& fn, std::optional<double> w1 = std::nullopt);
AvgCaseGap avg_case_gap(const Space& space, const Certificate& cert, const TestFn& fn,
                        std::optional<double> w1 = std::nullopt);

}  // namespace covercheck
