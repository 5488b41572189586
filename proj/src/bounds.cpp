#include "covercheck/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covercheck/transport.hpp"

namespace covercheck {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Per-component piecewise-linear view of a test function; every built-in 1-D
// kind reduces to this for exact integration and evaluation.
struct PwlView {
  std::vector<std::vector<double>> xs, ys;
};

PwlView to_pwl(const Space& space, const TestFn& fn) {
  PwlView v;
  const int nc = space.num_components();
  switch (fn.kind) {
    case TestFn::Kind::Constant:
      for (int c = 0; c < nc; ++c) {
        auto b = space.component_bounds(c);
        v.xs.push_back({b.lo, b.hi});
        v.ys.push_back({fn.value, fn.value});
      }
      return v;
    case TestFn::Kind::Spike: {
      auto b = space.component_bounds(0);
      double c0 = fn.spike_center - fn.spike_delta;
      double c1 = fn.spike_center + fn.spike_delta;
      v.xs.push_back({b.lo, c0, fn.spike_center, c1, b.hi});
      v.ys.push_back({0.0, 0.0, fn.spike_slope * fn.spike_delta, 0.0, 0.0});
      for (int c = 1; c < nc; ++c) {
        auto bc = space.component_bounds(c);
        v.xs.push_back({bc.lo, bc.hi});
        v.ys.push_back({0.0, 0.0});
      }
      return v;
    }
    case TestFn::Kind::ComponentIndicator:
      for (int c = 0; c < nc; ++c) {
        auto b = space.component_bounds(c);
        double val = c == 0 ? fn.scale : 0.0;
        v.xs.push_back({b.lo, b.hi});
        v.ys.push_back({val, val});
      }
      return v;
    case TestFn::Kind::PiecewiseLinear:
      v.xs = fn.xs;
      v.ys = fn.ys;
      return v;
    case TestFn::Kind::Grid:
      throw std::invalid_argument("grid test functions live on cubes only");
  }
  return v;
}

double pwl_eval(const PwlView& v, int comp, double x) {
  const auto& xs = v.xs[comp];
  const auto& ys = v.ys[comp];
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = it - xs.begin();
  double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

bool is_cube(const Space& space) {
  return space.kind() == SpaceKind::CubeLinf || space.kind() == SpaceKind::CubeL2;
}

}  // namespace

RateParams rate_params_for(const Space& space, double alpha) {
  RateParams p;
  p.family = space.kind();
  p.alpha = alpha;
  auto [c, C] = space.density_bounds_wrt_uniform();
  p.c = c;
  p.C = C;
  p.dim = space.dim();
  if (space.kind() == SpaceKind::Graph)
    p.edge_count = static_cast<int>(space.graph_geom().edges.size());
  return p;
}

double rate_r(const RateParams& params, long n) {
  require(n >= 2, "rate_r needs n >= 2");
  require(params.c > 0 && params.alpha > 0, "rate_r needs c > 0 and alpha > 0");
  const double ln_over_n = std::log(static_cast<double>(n)) / static_cast<double>(n);
  switch (params.family) {
    case SpaceKind::Interval:
    case SpaceKind::Graph:
      return 4.0 / params.c * std::sqrt((2.0 + params.alpha) * ln_over_n);
    case SpaceKind::TwoInterval:
      // No radius theorem exists for the disconnected example.
      throw std::invalid_argument("rate_r: no radius schedule for two-interval");
    case SpaceKind::Circle:
      return 2.0 / params.c * std::sqrt((2.0 + params.alpha) * ln_over_n);
    case SpaceKind::CubeLinf: {
      const double D = params.dim;
      return std::pow(params.c, -1.0 / D) *
             std::pow(4.0 * std::pow(3.0, D - 1.0), 1.0 / D) *
             std::pow(2.0 + params.alpha, 1.0 / (2.0 * D)) *
             std::pow(ln_over_n, 1.0 / (2.0 * D));
    }
    case SpaceKind::CubeL2: {
      const double D = params.dim;
      return std::sqrt(D) * std::pow(params.c, -1.0 / D) *
             std::pow(4.0 * std::pow(3.0, D - 1.0), 1.0 / D) *
             std::pow(2.0 + params.alpha, 1.0 / (2.0 * D)) *
             std::pow(ln_over_n, 1.0 / (2.0 * D));
    }
  }
  throw std::invalid_argument("rate_r: unsupported family");
}

double rate_eps(const RateParams& params, long n) {
  require(n >= 2, "rate_eps needs n >= 2");
  double eps = std::pow(static_cast<double>(n), -params.alpha);
  if (params.family == SpaceKind::Graph) {
    const double e = params.edge_count;
    const double base = e * (e - 1.0);
    eps *= (params.edge_count <= 1) ? 1.0 : std::pow(base, e - 1.0);
  }
  return eps;
}

double rate_best_known(const RateParams& params, long n) {
  require(n >= 3, "rate_best_known needs n >= 3");
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double D = params.dim, p = params.p;
  double lead = std::pow(nn, -1.0 / std::max(2.0 * p, D));
  if (2.0 * p == D) lead *= std::pow(ln, 1.0 / p);
  double tail = std::pow(nn, -1.0 / std::max(2.0, p)) * std::sqrt(ln);
  return lead + tail;
}

TestFn make_constant(double value) {
  TestFn f;
  f.kind = TestFn::Kind::Constant;
  f.value = value;
  return f;
}

TestFn make_spike(const Space& space, const std::vector<Point>& sample, double L,
                  double eps_target) {
  require(space.kind() == SpaceKind::Interval, "spikes are anchored on the interval");
  require(L > 0 && eps_target > 0, "spike needs L > 0 and eps_target > 0");
  require(sample.size() >= 2, "spike needs at least two sample points");
  std::vector<double> xs;
  xs.reserve(sample.size());
  for (const auto& p : sample) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  double gap = -1, center = 0.5;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (xs[i + 1] - xs[i] > gap) {
      gap = xs[i + 1] - xs[i];
      center = 0.5 * (xs[i] + xs[i + 1]);
    }
  require(gap > 0, "spike needs two distinct consecutive sample points");
  TestFn f;
  f.kind = TestFn::Kind::Spike;
  f.spike_center = center;
  f.spike_delta = std::min(0.5 * gap, std::sqrt(eps_target / L));
  f.spike_slope = L;
  return f;
}

TestFn make_component_indicator(double scale) {
  TestFn f;
  f.kind = TestFn::Kind::ComponentIndicator;
  f.scale = scale;
  return f;
}

TestFn make_piecewise_linear(const Space& space, std::vector<std::vector<double>> xs,
                             std::vector<std::vector<double>> ys) {
  require(space.kind() == SpaceKind::Interval || space.kind() == SpaceKind::Circle,
          "piecewise-linear test functions live on the interval or circle");
  require(xs.size() == ys.size() &&
              static_cast<int>(xs.size()) == space.num_components(),
          "piecewise-linear breakpoints must match the components");
  for (std::size_t c = 0; c < xs.size(); ++c) {
    require(xs[c].size() == ys[c].size() && xs[c].size() >= 2, "malformed breakpoints");
    for (std::size_t k = 0; k + 1 < xs[c].size(); ++k)
      require(xs[c][k] < xs[c][k + 1], "breakpoints must increase");
  }
  if (space.kind() == SpaceKind::Circle)
    require(std::abs(ys[0].front() - ys[0].back()) <= 1e-12,
            "circle functions must match at the wrap point");
  TestFn f;
  f.kind = TestFn::Kind::PiecewiseLinear;
  f.xs = std::move(xs);
  f.ys = std::move(ys);
  return f;
}

TestFn random_piecewise_linear(const Space& space, SplitMix64& rng, int max_pieces) {
  auto b = space.component_bounds(0);
  int k = 2 + rng.uniform_int(1, std::max(1, max_pieces - 2));
  std::vector<double> xs = {b.lo, b.hi};
  for (int i = 0; i < k - 2; ++i) xs.push_back(rng.uniform(b.lo, b.hi));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(rng.uniform(-1.0, 1.0));
  if (space.kind() == SpaceKind::Circle) ys.back() = ys.front();
  return make_piecewise_linear(space, {xs}, {ys});
}

TestFn make_grid_fn(const Space& space, int res, std::vector<double> values) {
  require(is_cube(space), "grid test functions live on cubes");
  long long want = 1;
  for (int a = 0; a < space.dim(); ++a) want *= res;
  require(static_cast<long long>(values.size()) == want, "grid value count mismatch");
  TestFn f;
  f.kind = TestFn::Kind::Grid;
  f.grid_res = res;
  f.grid_values = std::move(values);
  return f;
}

double integral_mu(const Space& space, const TestFn& fn) {
  if (fn.kind == TestFn::Kind::Grid) {
    const int res = fn.grid_res, dim = space.dim();
    double total = 0;
    std::vector<int> idx(dim, 0);
    std::vector<double> lo(dim), hi(dim);
    while (true) {
      for (int a = 0; a < dim; ++a) {
        lo[a] = static_cast<double>(idx[a]) / res;
        hi[a] = lo[a] + 1.0 / res;
      }
      long long cell = 0;
      for (int a = dim - 1; a >= 0; --a) cell = cell * res + idx[a];
      total += fn.grid_values[static_cast<std::size_t>(cell)] * space.cube_box_mass(lo, hi);
      int a = 0;
      for (; a < dim; ++a) {
        if (++idx[a] < res) break;
        idx[a] = 0;
      }
      if (a == dim) break;
    }
    return total;
  }
  PwlView v = to_pwl(space, fn);
  double total = 0;
  for (int c = 0; c < space.num_components(); ++c) {
    // Split at both the function's and the density's breakpoints; on each
    // slice f is linear and the density constant, so the trapezoid is exact.
    std::vector<double> cuts = v.xs[c];
    for (const auto& piece : space.density().comp[c]) {
      cuts.push_back(piece.lo);
      cuts.push_back(piece.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double a = cuts[k], b = cuts[k + 1];
      if (b <= a) continue;
      double favg = 0.5 * (pwl_eval(v, c, a) + pwl_eval(v, c, b));
      total += favg * space.measure_interval(c, a, b);
    }
  }
  return total;
}

double eval_fn(const Space& space, const TestFn& fn, const Point& x) {
  if (fn.kind == TestFn::Kind::Grid) {
    long long cell = 0;
    for (int a = space.dim() - 1; a >= 0; --a) {
      int j = std::min(fn.grid_res - 1, static_cast<int>(x.coords[a] * fn.grid_res));
      cell = cell * fn.grid_res + j;
    }
    return fn.grid_values[static_cast<std::size_t>(cell)];
  }
  PwlView v = to_pwl(space, fn);
  int comp = space.kind() == SpaceKind::Graph ? x.edge
             : space.kind() == SpaceKind::TwoInterval ? (x.x < 0 ? 0 : 1)
                                                      : 0;
  return pwl_eval(v, comp, x.x);
}

namespace {

double pwl_max_slope_in(const PwlView& v, int comp, double lo, double hi) {
  const auto& xs = v.xs[comp];
  const auto& ys = v.ys[comp];
  double best = 0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    double a = std::max(lo, xs[k]), b = std::min(hi, xs[k + 1]);
    if (b > a)
      best = std::max(best, std::abs((ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])));
  }
  return best;
}

double grid_pair_bound(const Space& space, const TestFn& fn,
                       const RegionTrace* trace) {
  // Conservative upper bound: max slope over pairs of grid cell centers
  // (restricted to the trace when given).
  const int res = fn.grid_res, dim = space.dim();
  std::vector<Point> centers;
  std::vector<double> vals;
  std::vector<int> idx(dim, 0);
  while (true) {
    Point p;
    p.coords.resize(dim);
    for (int a = 0; a < dim; ++a) p.coords[a] = (idx[a] + 0.5) / res;
    bool keep = true;
    if (trace) {
      if (space.kind() == SpaceKind::CubeLinf) {
        for (int a = 0; a < dim && keep; ++a)
          keep = trace->box_lo[a] <= p.coords[a] && p.coords[a] <= trace->box_hi[a];
      } else {
        double s = 0;
        for (int a = 0; a < dim; ++a) {
          double d = p.coords[a] - trace->ball_center[a];
          s += d * d;
        }
        keep = std::sqrt(s) <= trace->ball_radius;
      }
    }
    if (keep) {
      long long cell = 0;
      for (int a = dim - 1; a >= 0; --a) cell = cell * res + idx[a];
      centers.push_back(std::move(p));
      vals.push_back(fn.grid_values[static_cast<std::size_t>(cell)]);
    }
    int a = 0;
    for (; a < dim; ++a) {
      if (++idx[a] < res) break;
      idx[a] = 0;
    }
    if (a == dim) break;
  }
  double best = 0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      double d = space.distance(centers[i], centers[j]);
      if (d > 0) best = std::max(best, std::abs(vals[i] - vals[j]) / d);
    }
  return best;
}

}  // namespace

double global_lipschitz(const Space& space, const TestFn& fn) {
  switch (fn.kind) {
    case TestFn::Kind::Constant: return 0;
    case TestFn::Kind::Spike: return fn.spike_slope;
    case TestFn::Kind::ComponentIndicator: {
      auto b0 = space.component_bounds(0);
      auto b1 = space.component_bounds(1);
      return std::abs(fn.scale) / (b1.lo - b0.hi);
    }
    case TestFn::Kind::PiecewiseLinear: {
      PwlView v{fn.xs, fn.ys};
      double best = 0;
      for (int c = 0; c < space.num_components(); ++c) {
        auto b = space.component_bounds(c);
        best = std::max(best, pwl_max_slope_in(v, c, b.lo, b.hi));
      }
      return best;
    }
    case TestFn::Kind::Grid: return grid_pair_bound(space, fn, nullptr);
  }
  return 0;
}

double local_lipschitz(const Space& space, const TestFn& fn, const RegionTrace& trace) {
  switch (fn.kind) {
    case TestFn::Kind::Constant: return 0;
    case TestFn::Kind::Spike: {
      double lo = fn.spike_center - fn.spike_delta;
      double hi = fn.spike_center + fn.spike_delta;
      for (const auto& iv : trace.comp[0])
        if (std::min(hi, iv.hi) - std::max(lo, iv.lo) > 0) return fn.spike_slope;
      return 0;
    }
    case TestFn::Kind::ComponentIndicator: {
      // Vanishes unless the trace has positive presence in both components;
      // then the constant is the jump over the closest cross pair.
      if (trace.comp.size() < 2 || trace.comp[0].empty() || trace.comp[1].empty())
        return 0;
      double left_max = trace.comp[0].back().hi;
      double right_min = trace.comp[1].front().lo;
      return std::abs(fn.scale) / (right_min - left_max);
    }
    case TestFn::Kind::PiecewiseLinear: {
      PwlView v{fn.xs, fn.ys};
      if (space.kind() == SpaceKind::Circle) {
        double len = 0;
        for (const auto& iv : trace.comp[0]) len += iv.hi - iv.lo;
        // Arcs longer than half the circumference are no longer geodesically
        // convex; the global constant is exact there (the function is
        // continuous around the wrap).
        if (len >= 1.0) return global_lipschitz(space, fn);
      }
      double best = 0;
      for (int c = 0; c < space.num_components(); ++c)
        if (c < static_cast<int>(trace.comp.size()))
          for (const auto& iv : trace.comp[c])
            best = std::max(best, pwl_max_slope_in(v, c, iv.lo, iv.hi));
      return best;
    }
    case TestFn::Kind::Grid: return grid_pair_bound(space, fn, &trace);
  }
  return 0;
}

AvgCaseGap avg_case_gap(const Space& space, const std::vector<Point>& sample, double r,
                        const TestFn& fn, std::optional<double> w1) {
  require(!sample.empty(), "avg_case_gap expects a nonempty sample");
  const int n = static_cast<int>(sample.size());
  AvgCaseGap g;
  double emp = 0;
  for (const auto& x : sample) emp += eval_fn(space, fn, x);
  emp /= n;
  g.lhs = std::abs(integral_mu(space, fn) - emp);

  double lip_sum = 0;
  for (const auto& x : sample)
    lip_sum += local_lipschitz(space, fn, space.ball_trace(x, r));
  g.rhs_avg = r * lip_sum / n;

  // Spaces without an exact 1-D W1 need the caller to supply it, except when
  // the global constant already kills the worst-case side.
  double glip = global_lipschitz(space, fn);
  double w = 0;
  if (glip > 0) w = w1 ? *w1 : wasserstein_1d(space, sample, 1.0).value;
  g.rhs_worst = glip * w;
  g.bound_holds = g.lhs <= g.rhs_avg + kMassTol;
  return g;
}

AvgCaseGap avg_case_gap(const Space& space, const Certificate& cert, const TestFn& fn,
                        std::optional<double> w1) {
  return avg_case_gap(space, cert.centers, cert.radius, fn, w1);
}

}  // namespace covercheck
