#include "covercheck/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "covercheck/errors.hpp"

namespace covercheck {

namespace {

std::vector<int> all_indices(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

SubsetWitness make_witness(std::vector<int> subset, double union_mass, int n) {
  std::sort(subset.begin(), subset.end());
  SubsetWitness w;
  w.required_mass = static_cast<double>(subset.size()) / n;
  w.union_mass = union_mass;
  w.subset = std::move(subset);
  return w;
}

// ---- integer capacities ----------------------------------------------------

// p/q with q <= 2^26 whose double quotient reproduces x bit for bit, found by
// continued fractions. Masses that are not small exact rationals simply fail,
// which routes the network to float mode.
bool rationalize(double x, long long& p, long long& q) {
  const long long qmax = 1LL << 26;
  if (x < 0 || x > 1.0 + 1e-12) return false;
  if (x == 0) {
    p = 0;
    q = 1;
    return true;
  }
  long long h2 = 0, h1 = 1, k2 = 1, k1 = 0;  // convergent recurrences
  double a = x;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(a);
    if (fl > static_cast<double>(qmax)) break;
    long long ai = static_cast<long long>(fl);
    long long h = ai * h1 + h2, k = ai * k1 + k2;
    if (h > qmax || k > qmax) break;
    if (k > 0 && static_cast<double>(h) / static_cast<double>(k) == x) {
      p = h;
      q = k;
      return true;
    }
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    double rem = a - fl;
    if (rem <= 1e-18) break;
    a = 1.0 / rem;
  }
  return false;
}

long long lcm_capped(long long a, long long b, long long cap) {
  long long g = std::gcd(a, b);
  __int128 l = static_cast<__int128>(a / g) * b;
  if (l > cap) return -1;
  return static_cast<long long>(l);
}

FlowNetwork build_network(const Arrangement& arr, int n_balls) {
  FlowNetwork net;
  net.n_cells = static_cast<int>(arr.cells.size());
  net.n_balls = n_balls;
  net.cell_balls = arr.cell_balls;
  net.cell_mass.reserve(arr.cells.size());
  for (const auto& c : arr.cells) net.cell_mass.push_back(c.mass);

  // Exact mode when every mass is a small exact rational and a common
  // denominator (divisible by n) stays below the cap.
  const long long cap = 1LL << 60;
  long long scale = n_balls;
  std::vector<std::pair<long long, long long>> pq(net.cell_mass.size());
  bool ok = true;
  for (std::size_t i = 0; i < net.cell_mass.size() && ok; ++i) {
    ok = rationalize(net.cell_mass[i], pq[i].first, pq[i].second);
    if (ok) {
      scale = lcm_capped(scale, pq[i].second, cap);
      ok = scale > 0;
    }
  }
  if (ok) {
    net.cell_mass_int.resize(net.cell_mass.size());
    long long total = 0;
    for (std::size_t i = 0; i < net.cell_mass.size(); ++i) {
      net.cell_mass_int[i] = pq[i].first * (scale / pq[i].second);
      total += net.cell_mass_int[i];
    }
    if (total == scale) {
      net.integer_mode = true;
      net.scale = scale;
      return net;
    }
    net.cell_mass_int.clear();
  }
  return net;
}

CheckOutcome outcome_from_flow(const BallCover& cover, const Arrangement& arr,
                               const FlowNetwork& net, const MaxFlowResult& flow,
                               double grid_h, bool outer_bound_witness) {
  CheckOutcome out;
  const int n = cover.n();
  const double deficit = flow.deficit();
  if (deficit <= kMassTol) {
    out.verdict = Verdict::Disintegrable;
    out.certificate = decompose_flow(net, flow, arr.cells, cover);
    return out;
  }
  std::vector<int> balls = min_cut_ball_side(net, flow);
  double union_mass;
  if (outer_bound_witness) {
    // Mass of the cells meeting any ball of the cut: a sound upper bound on
    // the true union mass.
    union_mass = 0;
    std::vector<char> in_cut(n, 0);
    for (int b : balls) in_cut[b] = 1;
    for (int c = 0; c < net.n_cells; ++c)
      for (int b : net.cell_balls[c])
        if (in_cut[b]) {
          union_mass += net.cell_mass[c];
          break;
        }
  } else {
    union_mass = cover.space->union_measure_traces(cover.traces, balls);
  }
  const double required = static_cast<double>(balls.size()) / n;
  const double margin = required - union_mass;
  if (margin > kMassTol) {
    out.verdict = Verdict::NotDisintegrable;
    out.witness = make_witness(std::move(balls), union_mass, n);
  } else {
    out.verdict = Verdict::Inconclusive;
    out.gap = {deficit, margin, grid_h};
  }
  return out;
}

// Unrolled circle CDF: mass below x for x in [-2, 4).
double wrapped_cdf(const Space& sp, double x) {
  double k = std::floor(x / 2.0);
  return k + sp.cdf(0, x - 2.0 * k);
}

CheckOutcome connected_interval(const BallCover& cover) {
  const Space& sp = *cover.space;
  const int n = cover.n();
  CheckOutcome out;

  // Cover precheck; an uncovered gap is already a full-set violation.
  double u_all = sp.union_measure_traces(cover.traces, all_indices(n));
  if (u_all < 1.0 - kMassTol) {
    out.verdict = Verdict::NotDisintegrable;
    out.witness = make_witness(all_indices(n), u_all, n);
    return out;
  }

  // Covering plus equal radii force every contiguous run's union to be mass-
  // connected, so the run mass is cdf(right end) - cdf(left start).
  std::vector<double> FL(n), FR(n);
  for (int k = 0; k < n; ++k) {
    const auto& iv = cover.traces[cover.sorted_order[k]].comp[0];
    FL[k] = sp.cdf(0, iv.front().lo);
    FR[k] = sp.cdf(0, iv.back().hi);
  }
  // Violation of run [i..j]: n*FR[j] - (j+1) < n*FL[i] - i - n*tol.
  std::vector<double> a(n), suffmin(n + 1, std::numeric_limits<double>::infinity());
  for (int j = 0; j < n; ++j) a[j] = n * FR[j] - (j + 1);
  for (int j = n - 1; j >= 0; --j) suffmin[j] = std::min(a[j], suffmin[j + 1]);
  for (int i = 0; i < n; ++i) {
    const double b = n * FL[i] - i - n * kMassTol;
    if (suffmin[i] < b) {
      for (int j = i; j < n; ++j) {
        if (a[j] < b) {
          std::vector<int> run(cover.sorted_order.begin() + i,
                               cover.sorted_order.begin() + j + 1);
          out.verdict = Verdict::NotDisintegrable;
          out.witness = make_witness(std::move(run), FR[j] - FL[i], n);
          return out;
        }
      }
    }
  }
  out.verdict = Verdict::Disintegrable;
  out.certificate = construct_edf(cover);
  return out;
}

CheckOutcome connected_circle(const BallCover& cover) {
  const Space& sp = *cover.space;
  const int n = cover.n();
  CheckOutcome out;

  double u_all = sp.union_measure_traces(cover.traces, all_indices(n));
  if (u_all < 1.0 - kMassTol) {
    out.verdict = Verdict::NotDisintegrable;
    out.witness = make_witness(all_indices(n), u_all, n);
    return out;
  }

  // Cyclic runs of length <= n-1 over the unrolled centers.
  const double r = cover.radius;
  std::vector<double> z(2 * n - 1);
  for (int k = 0; k < 2 * n - 1; ++k)
    z[k] = cover.centers[cover.sorted_order[k % n]].x + (k >= n ? 2.0 : 0.0);
  for (int i = 0; i < n; ++i) {
    const double glo = wrapped_cdf(sp, z[i] - r);
    for (int k = 1; k <= n - 1 && i + k - 1 < 2 * n - 1; ++k) {
      const int j = i + k - 1;
      double mass = (z[j] + r) - (z[i] - r) >= 2.0
                        ? 1.0
                        : wrapped_cdf(sp, z[j] + r) - glo;
      if (mass < static_cast<double>(k) / n - kMassTol) {
        std::vector<int> run(k);
        for (int t = 0; t < k; ++t) run[t] = cover.sorted_order[(i + t) % n];
        out.verdict = Verdict::NotDisintegrable;
        out.witness = make_witness(std::move(run), mass, n);
        return out;
      }
      if (mass >= static_cast<double>(n - 1) / n) break;
    }
  }

  // Certificate via the arrangement flow; the run scan guarantees it exists.
  Arrangement arr = build_arrangement(cover);
  FlowNetwork net = build_network(arr, n);
  MaxFlowResult flow = max_flow(net);
  CheckOutcome res = outcome_from_flow(cover, arr, net, flow, 0, false);
  if (res.verdict == Verdict::NotDisintegrable)
    throw std::logic_error("circle run scan and arrangement flow disagree");
  return res;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Disintegrable: return "disintegrable";
    case Verdict::NotDisintegrable: return "not_disintegrable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(CheckMode m) {
  switch (m) {
    case CheckMode::Connected: return "connected";
    case CheckMode::Arrangement: return "arrangement";
    case CheckMode::Sandwich: return "sandwich";
    case CheckMode::Brute: return "brute";
    case CheckMode::Auto: return "auto";
  }
  return "?";
}

CheckMode parse_check_mode(const std::string& name) {
  if (name == "connected") return CheckMode::Connected;
  if (name == "arrangement") return CheckMode::Arrangement;
  if (name == "sandwich") return CheckMode::Sandwich;
  if (name == "brute") return CheckMode::Brute;
  if (name == "auto") return CheckMode::Auto;
  throw std::invalid_argument("unknown check mode: " + name);
}

CheckOutcome check_connected(const BallCover& cover) {
  switch (cover.space->kind()) {
    case SpaceKind::Interval: return connected_interval(cover);
    case SpaceKind::Circle: return connected_circle(cover);
    default:
      throw std::invalid_argument("check_connected expects an interval or circle cover");
  }
}

CheckOutcome check_arrangement(const BallCover& cover, long long max_cells) {
  const Space& sp = *cover.space;
  switch (sp.kind()) {
    case SpaceKind::Interval:
    case SpaceKind::Circle:
    case SpaceKind::Graph:
    case SpaceKind::TwoInterval:
      break;
    case SpaceKind::CubeLinf:
      if (sp.dim() > 3 || cover.n() > 64)
        throw std::invalid_argument(
            "arrangement on the sup-metric cube is limited to D <= 3 and n <= 64");
      break;
    case SpaceKind::CubeL2:
      throw std::invalid_argument("no exact arrangement for Euclidean balls");
  }
  Arrangement arr = build_arrangement(cover, max_cells);
  FlowNetwork net = build_network(arr, cover.n());
  MaxFlowResult flow = max_flow(net);
  return outcome_from_flow(cover, arr, net, flow, 0, false);
}

CheckOutcome check_sandwich(const BallCover& cover, double h0, int refinements) {
  const Space& sp = *cover.space;
  if (sp.kind() != SpaceKind::CubeLinf && sp.kind() != SpaceKind::CubeL2)
    throw std::invalid_argument("check_sandwich expects a cube cover");
  if (h0 <= 0 || refinements < 0)
    throw std::invalid_argument("check_sandwich needs h0 > 0 and refinements >= 0");

  const int n = cover.n();
  const int dim = sp.dim();
  const bool linf = sp.kind() == SpaceKind::CubeLinf;
  const double r = cover.radius;

  // Every ball containing the whole cube makes the certificate immediate.
  bool full_cover = true;
  for (int i = 0; i < n && full_cover; ++i) {
    double far = 0;
    for (int a = 0; a < dim; ++a) {
      double c = cover.centers[i].coords[a];
      double f = std::max(c, 1.0 - c);
      if (linf) far = std::max(far, f);
      else far += f * f;
    }
    full_cover = (linf ? far : std::sqrt(far)) <= r;
  }
  if (full_cover) {
    CheckOutcome out;
    out.verdict = Verdict::Disintegrable;
    Certificate cert;
    cert.radius = r;
    cert.centers = cover.centers;
    Cell whole;
    whole.lo.assign(dim, 0.0);
    whole.hi.assign(dim, 1.0);
    whole.mass = 1.0;
    cert.cells.push_back(whole);
    cert.mu.assign(n, {{0, 1.0}});
    out.certificate = std::move(cert);
    return out;
  }

  double h = h0;
  GapReport gap;
  for (int step = 0; step <= refinements; ++step, h *= 0.5) {
    const int res_d = sp.density().cube_res;
    int k = static_cast<int>(std::ceil(1.0 / h));
    k = res_d * ((k + res_d - 1) / res_d);  // density-aligned grid

    Arrangement inner = build_grid(cover, k, true);
    FlowNetwork inner_net = build_network(inner, n);
    MaxFlowResult inner_flow = max_flow(inner_net);
    if (inner_flow.deficit() <= kMassTol) {
      CheckOutcome out;
      out.verdict = Verdict::Disintegrable;
      out.certificate = decompose_flow(inner_net, inner_flow, inner.cells, cover);
      return out;
    }

    Arrangement outer = build_grid(cover, k, false);
    FlowNetwork outer_net = build_network(outer, n);
    MaxFlowResult outer_flow = max_flow(outer_net);
    if (outer_flow.deficit() > kMassTol) {
      CheckOutcome out =
          outcome_from_flow(cover, outer, outer_net, outer_flow, 1.0 / k, true);
      if (out.verdict == Verdict::NotDisintegrable) return out;
    }

    gap.inner_deficit = inner_flow.deficit();
    gap.outer_slack = outer_flow.value - inner_flow.value;
    gap.grid_h = 1.0 / k;
  }
  CheckOutcome out;
  out.verdict = Verdict::Inconclusive;
  out.gap = gap;
  return out;
}

CheckOutcome check_bruteforce(const BallCover& cover) {
  const Space& sp = *cover.space;
  const int n = cover.n();
  if (n > 20) throw ResourceLimitError("brute-force enumeration is limited to n <= 20");
  if (sp.kind() == SpaceKind::CubeL2)
    throw std::invalid_argument("brute force needs an exact union measure");

  std::vector<int> subset;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    subset.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    double um = sp.union_measure_traces(cover.traces, subset);
    double req = static_cast<double>(subset.size()) / n;
    if (um < req - kMassTol) {
      CheckOutcome out;
      out.verdict = Verdict::NotDisintegrable;
      out.witness = make_witness(subset, um, n);
      return out;
    }
  }

  CheckOutcome out;
  out.verdict = Verdict::Disintegrable;
  if (sp.kind() == SpaceKind::Interval) {
    out.certificate = construct_edf(cover);
  } else {
    Arrangement arr = build_arrangement(cover);
    FlowNetwork net = build_network(arr, n);
    MaxFlowResult flow = max_flow(net);
    if (flow.deficit() > kMassTol)
      throw std::logic_error("brute force and arrangement flow disagree");
    out.certificate = decompose_flow(net, flow, arr.cells, cover);
  }
  return out;
}

CheckOutcome run_check(const BallCover& cover, CheckMode mode, const CheckParams& params) {
  switch (mode) {
    case CheckMode::Connected: return check_connected(cover);
    case CheckMode::Arrangement: return check_arrangement(cover, params.max_cells);
    case CheckMode::Sandwich:
      return check_sandwich(cover, params.sandwich_h0, params.sandwich_refinements);
    case CheckMode::Brute: return check_bruteforce(cover);
    case CheckMode::Auto:
      switch (cover.space->kind()) {
        case SpaceKind::Interval:
        case SpaceKind::Circle:
          return check_connected(cover);
        case SpaceKind::Graph:
        case SpaceKind::TwoInterval:
          return check_arrangement(cover, params.max_cells);
        case SpaceKind::CubeLinf:
          if (cover.space->dim() <= 3 && cover.n() <= 64)
            return check_arrangement(cover, params.max_cells);
          [[fallthrough]];
        case SpaceKind::CubeL2:
          return check_sandwich(cover, params.sandwich_h0, params.sandwich_refinements);
      }
  }
  throw std::logic_error("unreachable check mode");
}

}  // namespace covercheck
