#pragma once

#include <string>
#include <utility>
#include <vector>

#include "covercheck/arrangement.hpp"
#include "covercheck/cover.hpp"
#include "covercheck/flow.hpp"

namespace covercheck {

/// Explicit disintegration witness: one finitely-supported probability
/// measure per ball, stored at cell granularity. Each component measure has
/// total mass 1, lives inside its ball, and the measures average back to mu.
struct Certificate {
  double radius = 0;
  std::vector<Point> centers;
  std::vector<Cell> cells;
  /// mu[i] lists (cell index, mass); masses sum to 1 per ball.
  std::vector<std::vector<std::pair<int, double>>> mu;

  int n() const { return static_cast<int>(centers.size()); }
};

struct ValidationReport {
  bool pass = false;
  bool mass_flag = false;     // some component measure does not sum to 1
  bool support_flag = false;  // some cell escapes its ball
  bool average_flag = false;  // the average of the components mismatches mu
  double worst_mass_err = 0;
  double worst_support_err = 0;
  double tv_err = 0;
};

/// Earliest-deadline-first sweep over a feasible interval cover: walk the
/// support left to right, always feeding the active ball whose right endpoint
/// comes first, stopping each ball at mass 1/n. Feasibility of every
/// contiguous run of the ordered balls makes this complete. Throws
/// std::logic_error (with the starving ball in the message) if the
/// precondition is violated.
Certificate construct_edf(const BallCover& cover);

/// Certificate read off a saturated flow: mu_i(cell) = n * flow(cell -> i).
/// Throws std::logic_error when the flow leaves more than kMassTol unmet.
Certificate decompose_flow(const FlowNetwork& net, const MaxFlowResult& flow,
                           const std::vector<Cell>& cells, const BallCover& cover);

/// Checks the three certificate invariants against the given space and
/// reports the worst violations; never throws.
ValidationReport validate_certificate(const Space& space, const Certificate& cert);

/// FNV-1a digest of the certificate contents (stable across runs).
std::string certificate_digest(const Certificate& cert);

}  // namespace covercheck
