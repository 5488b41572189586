#include "covercheck/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "covercheck/errors.hpp"

namespace covercheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Append [lo, hi] clipped to [blo, bhi]; zero-length results are dropped.
void push_clipped(std::vector<Interval1D>& out, double lo, double hi, double blo,
                  double bhi) {
  lo = std::max(lo, blo);
  hi = std::min(hi, bhi);
  if (hi > lo) out.push_back({lo, hi});
}

std::vector<Interval1D> merge_intervals(std::vector<Interval1D> v) {
  if (v.empty()) return v;
  std::sort(v.begin(), v.end(),
            [](const Interval1D& a, const Interval1D& b) { return a.lo < b.lo; });
  std::vector<Interval1D> out;
  out.push_back(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, v[i].hi);
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

}  // namespace

const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::Interval: return "interval";
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Graph: return "graph";
    case SpaceKind::CubeLinf: return "cube-linf";
    case SpaceKind::CubeL2: return "cube-l2";
    case SpaceKind::TwoInterval: return "two-interval";
  }
  return "?";
}

Density uniform_density(SpaceKind kind, int components_or_dim, double q) {
  Density d;
  d.lower = d.upper = 1.0;
  switch (kind) {
    case SpaceKind::Interval:
      d.comp = {{{0.0, 1.0, 1.0}}};
      break;
    case SpaceKind::Circle:
      d.comp = {{{0.0, 2.0, 0.5}}};
      d.lower = d.upper = 0.5;
      break;
    case SpaceKind::Graph: {
      const int e = components_or_dim;
      const double v = 1.0 / e;
      d.comp.assign(e, {{0.0, 1.0, v}});
      d.lower = d.upper = v;
      break;
    }
    case SpaceKind::TwoInterval:
      d.comp = {{{-1.0, -(1.0 - q), 1.0}}, {{0.0, 1.0 - q, 1.0}}};
      break;
    case SpaceKind::CubeLinf:
    case SpaceKind::CubeL2:
      d.cube_res = 1;
      d.cube_values = {1.0};
      break;
  }
  return d;
}

Space Space::interval(Density d) {
  Space s;
  s.kind_ = SpaceKind::Interval;
  s.density_ = d.comp.empty() ? uniform_density(s.kind_, 1) : std::move(d);
  s.finalize();
  return s;
}

Space Space::circle(Density d) {
  Space s;
  s.kind_ = SpaceKind::Circle;
  s.density_ = d.comp.empty() ? uniform_density(s.kind_, 1) : std::move(d);
  s.finalize();
  return s;
}

Space Space::graph(int num_vertices, std::vector<std::pair<int, int>> edges,
                   Density d, std::vector<std::array<double, 2>> vertex_pos) {
  Space s;
  s.kind_ = SpaceKind::Graph;
  s.graph_.num_vertices = num_vertices;
  s.graph_.edges = std::move(edges);
  s.graph_.vertex_pos = std::move(vertex_pos);
  s.density_ = d.comp.empty()
                   ? uniform_density(s.kind_, static_cast<int>(s.graph_.edges.size()))
                   : std::move(d);
  s.finalize();
  return s;
}

Space Space::cube(int dim, bool linf, Density d) {
  Space s;
  s.kind_ = linf ? SpaceKind::CubeLinf : SpaceKind::CubeL2;
  s.dim_ = dim;
  s.density_ = d.cube_values.empty() ? uniform_density(s.kind_, dim) : std::move(d);
  s.finalize();
  return s;
}

Space Space::two_interval(double q) {
  Space s;
  s.kind_ = SpaceKind::TwoInterval;
  s.q_ = q;
  s.density_ = uniform_density(s.kind_, 2, q);
  s.finalize();
  return s;
}

void Space::finalize() {
  if (kind_ == SpaceKind::Graph) {
    // All-pairs vertex distances, each edge of length 1/|E|. |V| is small so a
    // Floyd-Warshall pass at construction keeps distance queries O(1).
    const int n = graph_.num_vertices;
    const double len = graph_.edge_len();
    graph_.vertex_dist.assign(n, std::vector<double>(n, kInf));
    for (int i = 0; i < n; ++i) graph_.vertex_dist[i][i] = 0;
    for (auto [u, v] : graph_.edges) {
      graph_.vertex_dist[u][v] = std::min(graph_.vertex_dist[u][v], len);
      graph_.vertex_dist[v][u] = std::min(graph_.vertex_dist[v][u], len);
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          graph_.vertex_dist[i][j] = std::min(graph_.vertex_dist[i][j],
                                              graph_.vertex_dist[i][k] +
                                                  graph_.vertex_dist[k][j]);
    // Exact symmetry; the sweep above can differ in the last ulp.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        graph_.vertex_dist[i][j] = graph_.vertex_dist[j][i] =
            std::min(graph_.vertex_dist[i][j], graph_.vertex_dist[j][i]);
  }

  cum_.clear();
  comp_mass_.clear();
  comp_cum_.clear();
  const int nc = num_components();
  double total = 0;
  for (int c = 0; c < nc && kind_ != SpaceKind::CubeLinf && kind_ != SpaceKind::CubeL2;
       ++c) {
    const auto& pieces = density_.comp[c];
    std::vector<double> cum(pieces.size() + 1, 0.0);
    for (std::size_t i = 0; i < pieces.size(); ++i)
      cum[i + 1] = cum[i] + pieces[i].value * (pieces[i].hi - pieces[i].lo);
    comp_mass_.push_back(cum.back());
    total += cum.back();
    comp_cum_.push_back(total);
    cum_.push_back(std::move(cum));
  }
  if (kind_ == SpaceKind::CubeLinf || kind_ == SpaceKind::CubeL2) {
    double v = 0;
    const double cell = std::pow(1.0 / density_.cube_res, dim_);
    for (double x : density_.cube_values) v += x * cell;
    comp_mass_ = {v};
    comp_cum_ = {v};
  }
  validate();
}

int Space::num_components() const {
  switch (kind_) {
    case SpaceKind::Interval:
    case SpaceKind::Circle:
      return 1;
    case SpaceKind::Graph:
      return static_cast<int>(graph_.edges.size());
    case SpaceKind::TwoInterval:
      return 2;
    case SpaceKind::CubeLinf:
    case SpaceKind::CubeL2:
      return 1;
  }
  return 1;
}

Interval1D Space::component_bounds(int c) const {
  switch (kind_) {
    case SpaceKind::Interval: return {0.0, 1.0};
    case SpaceKind::Circle: return {0.0, 2.0};
    case SpaceKind::Graph: return {0.0, 1.0};
    case SpaceKind::TwoInterval:
      return c == 0 ? Interval1D{-1.0, -(1.0 - q_)} : Interval1D{0.0, 1.0 - q_};
    default: return {0.0, 1.0};
  }
}

double Space::metric_scale(int) const {
  return kind_ == SpaceKind::Graph ? graph_.edge_len() : 1.0;
}

double Space::diameter() const {
  switch (kind_) {
    case SpaceKind::Interval: return 1.0;
    case SpaceKind::Circle: return 1.0;
    case SpaceKind::Graph: {
      double m = 0;
      for (const auto& row : graph_.vertex_dist)
        for (double d : row) m = std::max(m, d);
      return m + graph_.edge_len();  // upper bound, tight within one edge
    }
    case SpaceKind::CubeLinf: return 1.0;
    case SpaceKind::CubeL2: return std::sqrt(static_cast<double>(dim_));
    case SpaceKind::TwoInterval: return 2.0 - q_;
  }
  return 1.0;
}

std::pair<double, double> Space::density_bounds_wrt_uniform() const {
  // Uniform probability has coordinate density 1/L where L is the total
  // coordinate length, so bounds relative to uniform rescale by L.
  double total_len = 0;
  if (kind_ == SpaceKind::CubeLinf || kind_ == SpaceKind::CubeL2) total_len = 1.0;
  else
    for (int c = 0; c < num_components(); ++c) {
      auto b = component_bounds(c);
      total_len += (b.hi - b.lo);
    }
  return {density_.lower * total_len, density_.upper * total_len};
}

double Space::distance(const Point& p, const Point& q) const {
  switch (kind_) {
    case SpaceKind::Interval:
    case SpaceKind::TwoInterval:
      require(p.coords.empty() && q.coords.empty(), "cube point on a 1-D space");
      return std::abs(p.x - q.x);
    case SpaceKind::Circle: {
      require(p.coords.empty() && q.coords.empty(), "cube point on a 1-D space");
      double d = std::abs(p.x - q.x);
      return std::min(d, 2.0 - d);
    }
    case SpaceKind::Graph: {
      const int ne = static_cast<int>(graph_.edges.size());
      require(p.edge >= 0 && p.edge < ne && q.edge >= 0 && q.edge < ne,
              "graph point with invalid edge id");
      const double len = graph_.edge_len();
      double best = kInf;
      if (p.edge == q.edge) best = std::abs(p.x - q.x) * len;
      auto [u1, v1] = graph_.edges[p.edge];
      auto [u2, v2] = graph_.edges[q.edge];
      const double dp[2] = {p.x * len, (1.0 - p.x) * len};
      const double dq[2] = {q.x * len, (1.0 - q.x) * len};
      const int ap[2] = {u1, v1}, aq[2] = {u2, v2};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          best = std::min(best, (dp[i] + dq[j]) + graph_.vertex_dist[ap[i]][aq[j]]);
      return best;
    }
    case SpaceKind::CubeLinf: {
      require(static_cast<int>(p.coords.size()) == dim_ &&
                  static_cast<int>(q.coords.size()) == dim_,
              "cube point dimension mismatch");
      double m = 0;
      for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(p.coords[i] - q.coords[i]));
      return m;
    }
    case SpaceKind::CubeL2: {
      require(static_cast<int>(p.coords.size()) == dim_ &&
                  static_cast<int>(q.coords.size()) == dim_,
              "cube point dimension mismatch");
      double s = 0;
      for (int i = 0; i < dim_; ++i) {
        double d = p.coords[i] - q.coords[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  return 0;
}

Point Space::sample(SplitMix64& rng) const {
  Point pt;
  if (kind_ == SpaceKind::CubeLinf || kind_ == SpaceKind::CubeL2) {
    // Rejection with the constant envelope C; uniform densities accept on the
    // first draw so the stream advances deterministically either way.
    pt.coords.resize(dim_);
    const bool flat = density_.upper == density_.lower;
    while (true) {
      for (int i = 0; i < dim_; ++i) pt.coords[i] = rng.next_double();
      if (flat) return pt;
      double u = rng.next_double();
      if (u * density_.upper <= cube_density_at(pt.coords)) return pt;
    }
  }
  // Pick the component proportional to mass, then invert the piecewise CDF.
  const double u1 = rng.next_double();
  const double target = u1 * comp_cum_.back();
  int c = static_cast<int>(std::lower_bound(comp_cum_.begin(), comp_cum_.end(), target) -
                           comp_cum_.begin());
  c = std::min(c, num_components() - 1);
  const double u2 = rng.next_double();
  double x = quantile_in_component(c, u2 * comp_mass_[c]);
  if (kind_ == SpaceKind::Graph) {
    pt.edge = c;
    pt.x = x;
  } else {
    pt.x = x;
  }
  return pt;
}

RegionTrace Space::ball_trace(const Point& center, double r) const {
  require(r > 0, "ball radius must be positive");
  RegionTrace t;
  switch (kind_) {
    case SpaceKind::Interval: {
      t.comp.resize(1);
      push_clipped(t.comp[0], center.x - r, center.x + r, 0.0, 1.0);
      break;
    }
    case SpaceKind::Circle: {
      t.comp.resize(1);
      if (r >= 1.0) {
        t.comp[0].push_back({0.0, 2.0});
      } else {
        double lo = center.x - r, hi = center.x + r;
        if (lo < 0) {
          push_clipped(t.comp[0], 0.0, hi, 0.0, 2.0);
          push_clipped(t.comp[0], lo + 2.0, 2.0, 0.0, 2.0);
        } else if (hi > 2.0) {
          push_clipped(t.comp[0], 0.0, hi - 2.0, 0.0, 2.0);
          push_clipped(t.comp[0], lo, 2.0, 0.0, 2.0);
        } else {
          push_clipped(t.comp[0], lo, hi, 0.0, 2.0);
        }
        t.comp[0] = merge_intervals(std::move(t.comp[0]));
      }
      break;
    }
    case SpaceKind::TwoInterval: {
      t.comp.resize(2);
      for (int c = 0; c < 2; ++c) {
        auto b = component_bounds(c);
        push_clipped(t.comp[c], center.x - r, center.x + r, b.lo, b.hi);
      }
      break;
    }
    case SpaceKind::Graph: {
      const double len = graph_.edge_len();
      const int nv = graph_.num_vertices;
      auto [u0, v0] = graph_.edges[center.edge];
      std::vector<double> dv(nv);
      for (int w = 0; w < nv; ++w)
        dv[w] = std::min(center.x * len + graph_.vertex_dist[u0][w],
                         (1.0 - center.x) * len + graph_.vertex_dist[v0][w]);
      t.comp.resize(graph_.edges.size());
      for (std::size_t e = 0; e < graph_.edges.size(); ++e) {
        auto [u, v] = graph_.edges[e];
        std::vector<Interval1D> win;
        if (r >= dv[u]) push_clipped(win, 0.0, (r - dv[u]) / len, 0.0, 1.0);
        if (r >= dv[v]) push_clipped(win, 1.0 - (r - dv[v]) / len, 1.0, 0.0, 1.0);
        if (static_cast<int>(e) == center.edge)
          push_clipped(win, center.x - r / len, center.x + r / len, 0.0, 1.0);
        t.comp[e] = merge_intervals(std::move(win));
      }
      break;
    }
    case SpaceKind::CubeLinf: {
      t.box_lo.resize(dim_);
      t.box_hi.resize(dim_);
      for (int i = 0; i < dim_; ++i) {
        t.box_lo[i] = std::max(0.0, center.coords[i] - r);
        t.box_hi[i] = std::min(1.0, center.coords[i] + r);
      }
      break;
    }
    case SpaceKind::CubeL2: {
      t.ball_center = center.coords;
      t.ball_radius = r;
      break;
    }
  }
  return t;
}

double Space::union_measure(const std::vector<Point>& centers, double r,
                            const std::vector<int>& subset) const {
  require(!subset.empty(), "union_measure: empty subset");
  std::vector<RegionTrace> traces;
  traces.reserve(centers.size());
  for (const auto& c : centers) traces.push_back(ball_trace(c, r));
  return union_measure_traces(traces, subset);
}

double Space::union_measure_traces(const std::vector<RegionTrace>& traces,
                                   const std::vector<int>& subset) const {
  require(!subset.empty(), "union_measure: empty subset");
  for (int i : subset)
    require(i >= 0 && i < static_cast<int>(traces.size()), "subset index out of range");

  if (kind_ == SpaceKind::CubeL2)
    throw std::invalid_argument(
        "union_measure is not exact on the Euclidean cube; use union_measure_bounds");

  if (kind_ == SpaceKind::CubeLinf) {
    // Box arrangement: cut each axis at every box face (and density grid
    // line); every resulting cell is inside or outside each box.
    const int res = density_.cube_res;
    std::vector<std::vector<double>> axis(dim_);
    for (int a = 0; a < dim_; ++a) {
      for (int j = 0; j <= res; ++j) axis[a].push_back(static_cast<double>(j) / res);
      for (int i : subset) {
        axis[a].push_back(traces[i].box_lo[a]);
        axis[a].push_back(traces[i].box_hi[a]);
      }
      std::sort(axis[a].begin(), axis[a].end());
      axis[a].erase(std::unique(axis[a].begin(), axis[a].end()), axis[a].end());
    }
    long long ncells = 1;
    for (int a = 0; a < dim_; ++a) ncells *= static_cast<long long>(axis[a].size()) - 1;
    if (ncells > 4'000'000)
      throw ResourceLimitError("box arrangement cell count exceeds limit");

    double total = 0;
    std::vector<int> idx(dim_, 0);
    std::vector<double> lo(dim_), hi(dim_), mid(dim_);
    while (true) {
      for (int a = 0; a < dim_; ++a) {
        lo[a] = axis[a][idx[a]];
        hi[a] = axis[a][idx[a] + 1];
        mid[a] = 0.5 * (lo[a] + hi[a]);
      }
      bool covered = false;
      for (int i : subset) {
        bool in = true;
        for (int a = 0; a < dim_ && in; ++a)
          in = traces[i].box_lo[a] <= mid[a] && mid[a] <= traces[i].box_hi[a];
        if (in) {
          covered = true;
          break;
        }
      }
      if (covered) total += cube_box_mass(lo, hi);
      int a = 0;
      for (; a < dim_; ++a) {
        if (++idx[a] < static_cast<int>(axis[a].size()) - 1) break;
        idx[a] = 0;
      }
      if (a == dim_) break;
    }
    return total;
  }

  // 1-D kinds: per-component interval union sweep, then exact integration.
  double total = 0;
  for (int c = 0; c < num_components(); ++c) {
    std::vector<Interval1D> v;
    for (int i : subset)
      if (c < static_cast<int>(traces[i].comp.size()))
        v.insert(v.end(), traces[i].comp[c].begin(), traces[i].comp[c].end());
    if (v.empty()) continue;
    for (const auto& iv : merge_intervals(std::move(v)))
      total += measure_interval(c, iv.lo, iv.hi);
  }
  return total;
}

MassBounds Space::union_measure_bounds(const std::vector<Point>& centers, double r,
                                       const std::vector<int>& subset,
                                       int grid_res) const {
  require(kind_ == SpaceKind::CubeLinf || kind_ == SpaceKind::CubeL2,
          "union_measure_bounds is cube-only");
  require(!subset.empty(), "union_measure: empty subset");
  require(grid_res >= 1, "grid_res must be positive");
  long long ncells = 1;
  for (int a = 0; a < dim_; ++a) ncells *= grid_res;
  if (ncells > 4'000'000) throw ResourceLimitError("grid cell count exceeds limit");

  const bool linf = kind_ == SpaceKind::CubeLinf;
  MassBounds mb{0, 0};
  std::vector<int> idx(dim_, 0);
  std::vector<double> lo(dim_), hi(dim_);
  const double h = 1.0 / grid_res;
  while (true) {
    for (int a = 0; a < dim_; ++a) {
      lo[a] = idx[a] * h;
      hi[a] = lo[a] + h;
    }
    bool inner = false, outer = false;
    for (int i : subset) {
      const auto& c = centers[i].coords;
      if (linf) {
        bool in = true, meet = true;
        for (int a = 0; a < dim_ && (in || meet); ++a) {
          double far = std::max(std::abs(lo[a] - c[a]), std::abs(hi[a] - c[a]));
          double near = std::max({0.0, lo[a] - c[a], c[a] - hi[a]});
          if (far > r) in = false;
          if (near > r) meet = false;
        }
        inner |= in;
        outer |= meet;
      } else {
        double far2 = 0, near2 = 0;
        for (int a = 0; a < dim_; ++a) {
          double f = std::max(std::abs(lo[a] - c[a]), std::abs(hi[a] - c[a]));
          double nr = std::max({0.0, lo[a] - c[a], c[a] - hi[a]});
          far2 += f * f;
          near2 += nr * nr;
        }
        inner |= far2 <= r * r;
        outer |= near2 <= r * r;
      }
      if (inner && outer) break;
    }
    if (outer) {
      double m = cube_box_mass(lo, hi);
      mb.outer += m;
      if (inner) mb.inner += m;
    }
    int a = 0;
    for (; a < dim_; ++a) {
      if (++idx[a] < grid_res) break;
      idx[a] = 0;
    }
    if (a == dim_) break;
  }
  return mb;
}

double Space::measure_interval(int c, double lo, double hi) const {
  const auto& pieces = density_.comp[c];
  auto b = component_bounds(c);
  lo = std::max(lo, b.lo);
  hi = std::min(hi, b.hi);
  if (hi <= lo) return 0;
  if (pieces.size() == 1) return pieces[0].value * (hi - lo);
  return cdf(c, hi) - cdf(c, lo);
}

double Space::cdf(int c, double x) const {
  const auto& pieces = density_.comp[c];
  if (x <= pieces.front().lo) return 0;
  if (x >= pieces.back().hi) return comp_mass_[c];
  // First piece whose upper end is above x.
  std::size_t klo = 0, khi = pieces.size() - 1;
  while (klo < khi) {
    std::size_t mid = (klo + khi) / 2;
    if (pieces[mid].hi <= x) klo = mid + 1;
    else khi = mid;
  }
  return cum_[c][klo] + pieces[klo].value * (x - pieces[klo].lo);
}

double Space::quantile_in_component(int c, double mass) const {
  const auto& pieces = density_.comp[c];
  const auto& cum = cum_[c];
  mass = std::clamp(mass, 0.0, comp_mass_[c]);
  std::size_t klo = 0, khi = pieces.size() - 1;
  while (klo < khi) {
    std::size_t mid = (klo + khi) / 2;
    if (cum[mid + 1] < mass) klo = mid + 1;
    else khi = mid;
  }
  // Zero-density pieces have flat cumulative mass; land on their left edge.
  if (pieces[klo].value <= 0) return pieces[klo].lo;
  double x = pieces[klo].lo + (mass - cum[klo]) / pieces[klo].value;
  return std::clamp(x, pieces[klo].lo, pieces[klo].hi);
}

double Space::density_at(int c, double x) const {
  const auto& pieces = density_.comp[c];
  for (const auto& p : pieces)
    if (x >= p.lo && x <= p.hi) return p.value;
  return 0;
}

double Space::cube_density_at(const std::vector<double>& x) const {
  const int res = density_.cube_res;
  long long idx = 0;
  for (int a = dim_ - 1; a >= 0; --a) {
    int j = std::min(res - 1, static_cast<int>(x[a] * res));
    idx = idx * res + j;
  }
  return density_.cube_values[static_cast<std::size_t>(idx)];
}

double Space::cube_box_mass(const std::vector<double>& lo,
                            const std::vector<double>& hi) const {
  const int res = density_.cube_res;
  if (res == 1) {
    double v = 1;
    for (int a = 0; a < dim_; ++a) v *= std::max(0.0, hi[a] - lo[a]);
    return v * density_.cube_values[0];
  }
  // Split the box along density grid lines; recurse over overlapped strips.
  double total = 0;
  std::vector<int> jlo(dim_), jhi(dim_), j(dim_);
  for (int a = 0; a < dim_; ++a) {
    jlo[a] = std::max(0, static_cast<int>(std::floor(lo[a] * res)));
    jhi[a] = std::min(res - 1, static_cast<int>(std::ceil(hi[a] * res)) - 1);
    if (jhi[a] < jlo[a]) return 0;
    j[a] = jlo[a];
  }
  while (true) {
    double vol = 1;
    long long idx = 0;
    for (int a = dim_ - 1; a >= 0; --a) {
      double slo = std::max(lo[a], static_cast<double>(j[a]) / res);
      double shi = std::min(hi[a], static_cast<double>(j[a] + 1) / res);
      vol *= std::max(0.0, shi - slo);
      idx = idx * res + j[a];
    }
    total += vol * density_.cube_values[static_cast<std::size_t>(idx)];
    int a = 0;
    for (; a < dim_; ++a) {
      if (++j[a] <= jhi[a]) break;
      j[a] = jlo[a];
    }
    if (a == dim_) break;
  }
  return total;
}

void Space::validate() const {
  if (kind_ == SpaceKind::CubeLinf || kind_ == SpaceKind::CubeL2) {
    require(dim_ >= 1, "cube dimension must be >= 1");
    const int res = density_.cube_res;
    require(res >= 1, "cube density resolution must be >= 1");
    long long want = 1;
    for (int a = 0; a < dim_; ++a) want *= res;
    require(static_cast<long long>(density_.cube_values.size()) == want,
            "cube density grid size mismatch");
    require(density_.lower > 0 && density_.upper >= density_.lower,
            "density bounds must satisfy 0 < c <= C");
    for (double v : density_.cube_values)
      require(v == 0 || (v >= density_.lower - kSweepTol && v <= density_.upper + kSweepTol),
              "cube density value outside [c, C]");
    require(std::abs(comp_mass_[0] - 1.0) <= 1e-12, "density does not integrate to 1");
    return;
  }

  require(density_.lower > 0 && density_.upper >= density_.lower,
          "density bounds must satisfy 0 < c <= C");
  require(static_cast<int>(density_.comp.size()) == num_components(),
          "density component count mismatch");
  for (int c = 0; c < num_components(); ++c) {
    const auto& pieces = density_.comp[c];
    auto b = component_bounds(c);
    require(!pieces.empty(), "component without density pieces");
    require(std::abs(pieces.front().lo - b.lo) <= 1e-12 &&
                std::abs(pieces.back().hi - b.hi) <= 1e-12,
            "density pieces must span the component");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      require(pieces[i].hi > pieces[i].lo, "density breakpoints must increase strictly");
      // Pieces with value 0 are allowed and simply excluded from the support;
      // c and C bound the positive values.
      require(pieces[i].value == 0 ||
                  (pieces[i].value >= density_.lower - kSweepTol &&
                   pieces[i].value <= density_.upper + kSweepTol),
              "density value outside [c, C]");
      if (i + 1 < pieces.size())
        require(std::abs(pieces[i].hi - pieces[i + 1].lo) <= 1e-12,
                "density pieces must be contiguous");
    }
  }
  double total = 0;
  for (double m : comp_mass_) total += m;
  require(std::abs(total - 1.0) <= 1e-12, "density does not integrate to 1");

  if (kind_ == SpaceKind::TwoInterval)
    require(q_ > 0 && q_ < 1, "two-interval parameter q must lie in (0,1)");

  if (kind_ == SpaceKind::Graph) {
    const int nv = graph_.num_vertices;
    const auto& es = graph_.edges;
    require(nv >= 2 && !es.empty(), "graph needs |V| >= 2 and |E| >= 1");
    std::vector<std::vector<int>> adj(nv);
    for (std::size_t i = 0; i < es.size(); ++i) {
      auto [u, v] = es[i];
      require(u >= 0 && u < nv && v >= 0 && v < nv, "edge endpoint out of range");
      require(u != v, "self-loops are not allowed");
      for (std::size_t j = i + 1; j < es.size(); ++j)
        require(!(es[j] == es[i] || (es[j].first == v && es[j].second == u)),
                "parallel edges are not allowed");
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    std::vector<char> seen(nv, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++cnt;
          bfs.push(v);
        }
    }
    require(cnt == nv, "graph must be connected");
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) {
        require(std::abs(graph_.vertex_dist[i][j] - graph_.vertex_dist[j][i]) <= 1e-12,
                "vertex distance matrix must be symmetric");
        require(graph_.vertex_dist[i][j] < kInf, "vertex distance matrix incomplete");
      }
  }
}

}  // namespace covercheck
