#pragma once

#include <optional>
#include <string>

#include "covercheck/certificate.hpp"
#include "covercheck/cover.hpp"

namespace covercheck {

enum class Verdict { Disintegrable, NotDisintegrable, Inconclusive };
const char* to_string(Verdict v);

/// A subset violating the subset-mass condition: the union of its balls
/// carries less than |I|/n of the measure, beyond tolerance. For cube
/// sandwich verdicts union_mass is a sound upper bound on the true union
/// mass; it is exact everywhere else.
struct SubsetWitness {
  std::vector<int> subset;  // original center indices, ascending
  double union_mass = 0;
  double required_mass = 0;
};

struct GapReport {
  double inner_deficit = 0;  // unmet demand in the inner (contained-cell) model
  double outer_slack = 0;    // margin separating the outer model from refutation
  double grid_h = 0;
};

struct CheckOutcome {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Certificate> certificate;  // Disintegrable
  std::optional<SubsetWitness> witness;    // NotDisintegrable
  GapReport gap;                           // Inconclusive
};

/// Interval/circle checker that tests only contiguous runs of the ordered
/// centers (cyclic runs plus the full set on the circle). Exact; Disintegrable
/// outcomes carry a certificate (EDF sweep on the interval, flow
/// decomposition on the circle).
CheckOutcome check_connected(const BallCover& cover);

/// Exact checker for every kind with exact ball traces: cuts the space into
/// arrangement cells and solves the cell/ball transportation problem.
/// Witnesses are the balls on the sink side of the canonical min cut,
/// re-verified against union_measure. CubeLinf is limited to D <= 3, n <= 64.
CheckOutcome check_arrangement(const BallCover& cover, long long max_cells = 2'000'000);

/// Sound two-sided grid checker for cubes (the only option for CubeL2): a
/// feasible inner model proves disintegrability, an infeasible outer model
/// refutes it, and the grid is halved up to `refinements` times before giving
/// up with a gap report.
CheckOutcome check_sandwich(const BallCover& cover, double h0, int refinements);

/// Literal enumeration of all 2^n - 1 subsets; oracle of record. n <= 20.
CheckOutcome check_bruteforce(const BallCover& cover);

enum class CheckMode { Connected, Arrangement, Sandwich, Brute, Auto };
CheckMode parse_check_mode(const std::string& name);
const char* to_string(CheckMode m);

struct CheckParams {
  double sandwich_h0 = 0.25;
  int sandwich_refinements = 3;
  long long max_cells = 2'000'000;
};

/// Mode dispatch; Auto picks the cheapest exact checker for the kind and
/// falls back to the sandwich on large or Euclidean cubes.
CheckOutcome run_check(const BallCover& cover, CheckMode mode,
                       const CheckParams& params = {});

}  // namespace covercheck
