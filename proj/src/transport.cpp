#include "covercheck/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace covercheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Antiderivative of |x - c|^p: sign(x-c) |x-c|^{p+1} / (p+1), valid across c.
double abs_pow_anti(double x, double c, double p) {
  double d = x - c;
  double mag = std::pow(std::abs(d), p + 1) / (p + 1);
  return d < 0 ? -mag : mag;
}

// Piecewise-constant density on a line segment with prefix sums.
struct PieceCdf {
  std::vector<DensityPiece> pieces;
  std::vector<double> cum;

  explicit PieceCdf(std::vector<DensityPiece> ps) : pieces(std::move(ps)) {
    cum.assign(pieces.size() + 1, 0.0);
    for (std::size_t i = 0; i < pieces.size(); ++i)
      cum[i + 1] = cum[i] + pieces[i].value * (pieces[i].hi - pieces[i].lo);
  }
  double total() const { return cum.back(); }
  double quantile(double m) const {
    m = std::clamp(m, 0.0, total());
    std::size_t lo = 0, hi = pieces.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cum[mid + 1] < m) lo = mid + 1;
      else hi = mid;
    }
    if (pieces[lo].value <= 0) return pieces[lo].lo;
    return std::clamp(pieces[lo].lo + (m - cum[lo]) / pieces[lo].value, pieces[lo].lo,
                      pieces[lo].hi);
  }
};

// W_p^p between the density and the empirical measure of sorted atoms, with
// the line metric: sum_i int_{i/n}^{(i+1)/n} |Q(u) - a_i|^p du in closed form.
double quantile_power_cost(const PieceCdf& f, const std::vector<double>& atoms,
                           double p) {
  const int n = static_cast<int>(atoms.size());
  const double share = f.total() / n;
  double total = 0;
  std::size_t k = 0;  // density piece cursor
  double xa = f.quantile(0);
  for (int i = 0; i < n; ++i) {
    double xb = f.quantile(share * (i + 1));
    while (k > 0 && f.pieces[k].lo > xa) --k;
    while (k + 1 < f.pieces.size() && f.pieces[k].hi <= xa) ++k;
    for (std::size_t j = k; j < f.pieces.size(); ++j) {
      double s = std::max(xa, f.pieces[j].lo);
      double t = std::min(xb, f.pieces[j].hi);
      if (t > s)
        total += f.pieces[j].value * (abs_pow_anti(t, atoms[i], p) -
                                      abs_pow_anti(s, atoms[i], p));
      if (f.pieces[j].hi >= xb) break;
    }
    xa = xb;
  }
  return total;
}

// ---- circle ----------------------------------------------------------------

struct CdfSegment {
  double len, h0, h1;  // F - G over the segment, linear
};

double l1_to_level(const std::vector<CdfSegment>& segs, double alpha) {
  double total = 0;
  for (const auto& s : segs) {
    double a = s.h0 - alpha, b = s.h1 - alpha;
    if (a * b >= 0) {
      total += s.len * std::abs(0.5 * (a + b));
    } else {
      double slope = (b - a) / s.len;
      total += (a * a + b * b) / (2.0 * std::abs(slope));
    }
  }
  return total;
}

double circle_w1_exact(const Space& sp, std::vector<double> atoms) {
  const int n = static_cast<int>(atoms.size());
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> bps = {0.0, 2.0};
  for (const auto& piece : sp.density().comp[0]) {
    bps.push_back(piece.lo);
    bps.push_back(piece.hi);
  }
  for (double a : atoms) bps.push_back(a);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  std::vector<CdfSegment> segs;
  double hmin = kInf, hmax = -kInf;
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    double t0 = bps[k], t1 = bps[k + 1];
    if (t1 <= t0) continue;
    double cnt = static_cast<double>(
        std::upper_bound(atoms.begin(), atoms.end(), t0) - atoms.begin());
    CdfSegment s;
    s.len = t1 - t0;
    s.h0 = sp.cdf(0, t0) - cnt / n;
    s.h1 = sp.cdf(0, t1) - cnt / n;
    hmin = std::min({hmin, s.h0, s.h1});
    hmax = std::max({hmax, s.h0, s.h1});
    segs.push_back(s);
  }
  // The objective is convex in the level; golden-section to machine precision.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = hmin, hi = hmax;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = l1_to_level(segs, x1), f2 = l1_to_level(segs, x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = l1_to_level(segs, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = l1_to_level(segs, x2);
    }
  }
  return std::min(f1, f2);
}

// Unrolled problem for one cut position: densities and atoms are rotated so
// the cut becomes the origin, then costed with the line metric. Any cut gives
// an upper bound on the circle cost.
double circle_cut_cost(const Space& sp, const std::vector<double>& atoms_sorted,
                       double cut, double p) {
  std::vector<DensityPiece> shifted;
  for (const auto& piece : sp.density().comp[0]) {
    double parts[2][2] = {{piece.lo, std::min(piece.hi, cut)},
                          {std::max(piece.lo, cut), piece.hi}};
    for (auto& pr : parts) {
      if (pr[1] <= pr[0]) continue;
      double lo = pr[0] - cut, hi = pr[1] - cut;
      if (hi <= 0) {
        lo += 2;
        hi += 2;
      }
      shifted.push_back({lo, hi, piece.value});
    }
  }
  std::sort(shifted.begin(), shifted.end(),
            [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
  std::vector<double> atoms;
  atoms.reserve(atoms_sorted.size());
  for (double a : atoms_sorted) {
    double t = a - cut;
    atoms.push_back(t < 0 ? t + 2 : t);
  }
  std::sort(atoms.begin(), atoms.end());
  return quantile_power_cost(PieceCdf(std::move(shifted)), atoms, p);
}

// ---- exact cell cost -------------------------------------------------------

// Mean of d(., center)^p over a density-constant 1-D cell. The distance is
// piecewise linear in the coordinate; candidate kinks are split out and each
// part integrated in closed form from its endpoint values.
double cell_mean_dist_pow(const Space& sp, const Cell& cell, const Point& center,
                          double p) {
  const double a = cell.lo[0], b = cell.hi[0];
  if (b - a < 1e-15) {
    Point mid;
    mid.edge = cell.component;
    mid.x = 0.5 * (a + b);
    return std::pow(sp.distance(center, mid), p);
  }
  std::vector<double> cuts = {a, b};
  switch (sp.kind()) {
    case SpaceKind::Interval:
    case SpaceKind::TwoInterval:
      cuts.push_back(center.x);
      break;
    case SpaceKind::Circle: {
      cuts.push_back(center.x);
      cuts.push_back(std::fmod(center.x + 1.0, 2.0));  // antipode
      break;
    }
    case SpaceKind::Graph: {
      const double len = sp.graph_geom().edge_len();
      Point pu, pv;
      pu.edge = pv.edge = cell.component;
      pu.x = 0.0;
      pv.x = 1.0;
      double du = sp.distance(center, pu), dv = sp.distance(center, pv);
      cuts.push_back((dv - du + len) / (2 * len));
      if (center.edge == cell.component) {
        cuts.push_back(center.x);
        cuts.push_back((center.x * len - du) / (2 * len));
        cuts.push_back((dv + len + center.x * len) / (2 * len));
      }
      break;
    }
    default:
      throw std::logic_error("cell_mean_dist_pow expects a 1-D cell");
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Point px;
  px.edge = cell.component;
  auto dist_at = [&](double x) {
    px.x = x;
    return sp.distance(center, px);
  };

  double total = 0;
  // Closed form for one linear stretch; falls back to bisection if an
  // unexpected kink slips through.
  auto integrate = [&](auto&& self, double s, double t, double ds, double dt,
                       int depth) -> double {
    if (t - s < 1e-15) return 0.5 * (std::pow(ds, p) + std::pow(dt, p)) * (t - s);
    double mid = 0.5 * (s + t);
    double dm = dist_at(mid);
    if (std::abs(dm - 0.5 * (ds + dt)) > 1e-12 && depth < 48)
      return self(self, s, mid, ds, dm, depth + 1) +
             self(self, mid, t, dm, dt, depth + 1);
    double slope = (dt - ds) / (t - s);
    if (std::abs(slope) < 1e-15) return std::pow(0.5 * (ds + dt), p) * (t - s);
    return (std::pow(dt, p + 1) - std::pow(ds, p + 1)) / (slope * (p + 1));
  };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double s = std::max(a, cuts[k]), t = std::min(b, cuts[k + 1]);
    if (t <= s || s < a || t > b) continue;
    total += integrate(integrate, s, t, dist_at(s), dist_at(t), 0);
  }
  return total / (b - a);
}

// ---- assignment ------------------------------------------------------------

// Jonker-Volgenant style shortest augmenting paths with potentials.
double assignment_cost(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<double> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = match[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0;
  for (int j = 1; j <= n; ++j)
    if (match[j]) total += a[match[j] - 1][j - 1];
  return total;
}

}  // namespace

const char* to_string(WMethod m) {
  switch (m) {
    case WMethod::QuantileExact: return "quantile_exact";
    case WMethod::CertificateUpper: return "certificate_upper";
    case WMethod::MatchingDiscrete: return "matching_discrete";
  }
  return "?";
}

WassersteinResult wasserstein_1d(const Space& space, const std::vector<Point>& sample,
                                 double p) {
  require(p >= 1.0 && p <= 8.0, "wasserstein_1d expects p in [1, 8]");
  require(!sample.empty(), "wasserstein_1d expects a nonempty sample");
  WassersteinResult res;
  res.p = p;
  res.method = WMethod::QuantileExact;

  std::vector<double> atoms;
  atoms.reserve(sample.size());
  for (const auto& s : sample) atoms.push_back(s.x);
  std::sort(atoms.begin(), atoms.end());

  if (space.kind() == SpaceKind::Interval || space.kind() == SpaceKind::TwoInterval) {
    // Subsets of the line all use the monotone quantile coupling, which is
    // optimal there for any convex cost.
    std::vector<DensityPiece> pieces;
    for (int c = 0; c < space.num_components(); ++c)
      pieces.insert(pieces.end(), space.density().comp[c].begin(),
                    space.density().comp[c].end());
    res.value = std::pow(quantile_power_cost(PieceCdf(std::move(pieces)), atoms, p),
                         1.0 / p);
    return res;
  }
  if (space.kind() != SpaceKind::Circle)
    throw std::invalid_argument(
        "wasserstein_1d expects an interval, split-interval or circle space");

  if (p == 1.0) {
    res.value = circle_w1_exact(space, atoms);
    return res;
  }

  // Candidate cuts: every atom and every cyclic gap midpoint, then a
  // golden-section polish around the best. Every evaluation is a valid upper
  // bound; the reported value is the best seen.
  // TODO: minimizing the convex rotation objective instead would make p > 1
  // exact rather than an upper bound.
  const int n = static_cast<int>(atoms.size());
  std::vector<double> cuts;
  for (int i = 0; i < n; ++i) {
    cuts.push_back(atoms[i]);
    double next = (i + 1 < n) ? atoms[i + 1] : atoms[0] + 2.0;
    cuts.push_back(std::fmod(0.5 * (atoms[i] + next), 2.0));
  }
  double best = kInf, best_cut = 0;
  for (double c : cuts) {
    double val = circle_cut_cost(space, atoms, c, p);
    if (val < best) {
      best = val;
      best_cut = c;
    }
  }
  {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_cut - 0.5, hi = best_cut + 0.5;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    auto eval = [&](double c) {
      double cc = std::fmod(std::fmod(c, 2.0) + 2.0, 2.0);
      double v = circle_cut_cost(space, atoms, cc, p);
      best = std::min(best, v);
      return v;
    };
    double f1 = eval(x1), f2 = eval(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = eval(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = eval(x2);
      }
    }
  }
  res.value = std::pow(best, 1.0 / p);
  res.exact = false;
  return res;
}

WassersteinResult coupling_cost(const Space& space, const Certificate& cert, double p) {
  require(p >= 1.0 && p <= 8.0, "coupling_cost expects p in [1, 8]");
  require(cert.n() > 0, "coupling_cost expects a certificate");
  const int n = cert.n();
  const bool cube =
      space.kind() == SpaceKind::CubeLinf || space.kind() == SpaceKind::CubeL2;
  double total = 0;
  double err = 0;
  for (int i = 0; i < n; ++i) {
    for (const auto& [c, m] : cert.mu[i]) {
      if (m <= 0) continue;
      const Cell& cell = cert.cells[c];
      if (cube) {
        Point mid = cell_midpoint(space, cell);
        total += m * std::pow(space.distance(mid, cert.centers[i]), p);
        err = std::max(err, 0.5 * cell_diameter(space, cell));
      } else {
        total += m * cell_mean_dist_pow(space, cell, cert.centers[i], p);
      }
    }
  }
  WassersteinResult res;
  res.p = p;
  res.method = WMethod::CertificateUpper;
  res.value = std::pow(total / n, 1.0 / p);
  res.error_bound = err;
  res.exact = !cube;
  return res;
}

WassersteinResult wasserstein_matching(const Space& space,
                                       const std::vector<Point>& sample, int m,
                                       double p) {
  require(p >= 1.0 && p <= 8.0, "wasserstein_matching expects p in [1, 8]");
  const int n = static_cast<int>(sample.size());
  require(n >= 1, "wasserstein_matching expects a nonempty sample");
  require(m >= n && m <= 512 && m % n == 0,
          "wasserstein_matching needs n <= m <= 512 with n dividing m");

  std::vector<Point> atoms;
  atoms.reserve(m);
  switch (space.kind()) {
    case SpaceKind::Interval:
    case SpaceKind::Circle:
    case SpaceKind::TwoInterval: {
      // Global quantile atoms: pick the component by cumulative mass, then
      // invert within it.
      std::vector<double> comp_cum(space.num_components());
      double acc = 0;
      for (int c = 0; c < space.num_components(); ++c) {
        acc += space.component_mass(c);
        comp_cum[c] = acc;
      }
      for (int j = 0; j < m; ++j) {
        double u = (j + 0.5) / m;
        int c = 0;
        while (c + 1 < space.num_components() && comp_cum[c] < u) ++c;
        double before = c == 0 ? 0.0 : comp_cum[c - 1];
        Point pt;
        pt.x = space.quantile_in_component(c, u - before);
        pt.edge = c;
        atoms.push_back(pt);
      }
      break;
    }
    case SpaceKind::CubeLinf:
    case SpaceKind::CubeL2: {
      require(space.density().cube_res == 1 && space.density().cube_values[0] == 1.0,
              "cube matching atoms need a uniform density");
      int k = static_cast<int>(std::llround(std::pow(m, 1.0 / space.dim())));
      long long kk = 1;
      for (int a = 0; a < space.dim(); ++a) kk *= k;
      require(kk == m, "cube matching needs m = k^D");
      std::vector<int> idx(space.dim(), 0);
      while (true) {
        Point pt;
        pt.coords.resize(space.dim());
        for (int a = 0; a < space.dim(); ++a) pt.coords[a] = (idx[a] + 0.5) / k;
        atoms.push_back(pt);
        int a = 0;
        for (; a < space.dim(); ++a) {
          if (++idx[a] < k) break;
          idx[a] = 0;
        }
        if (a == space.dim()) break;
      }
      break;
    }
    case SpaceKind::Graph:
      throw std::invalid_argument("matching atoms are not defined for graph spaces");
  }

  std::vector<std::vector<double>> cost(m, std::vector<double>(m));
  const int dup = m / n;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      cost[j][i] = std::pow(space.distance(atoms[j], sample[i / dup]), p);

  WassersteinResult res;
  res.p = p;
  res.method = WMethod::MatchingDiscrete;
  res.value = std::pow(assignment_cost(cost) / m, 1.0 / p);
  res.exact = false;
  return res;
}

}  // namespace covercheck
