#include "covercheck/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covercheck/errors.hpp"

namespace covercheck {

BallCover make_cover(const Space& space, std::vector<Point> centers, double radius) {
  if (centers.empty()) throw std::invalid_argument("cover needs at least one center");
  if (radius <= 0) throw std::invalid_argument("cover radius must be positive");
  BallCover c;
  c.space = &space;
  c.centers = std::move(centers);
  c.radius = radius;
  c.traces.reserve(c.centers.size());
  for (const auto& p : c.centers) c.traces.push_back(space.ball_trace(p, radius));
  if (space.kind() == SpaceKind::Interval || space.kind() == SpaceKind::Circle) {
    c.sorted_order.resize(c.centers.size());
    for (std::size_t i = 0; i < c.centers.size(); ++i) c.sorted_order[i] = static_cast<int>(i);
    std::stable_sort(c.sorted_order.begin(), c.sorted_order.end(),
                     [&](int a, int b) { return c.centers[a].x < c.centers[b].x; });
  }
  return c;
}

BallCover sample_cover(const Space& space, int n, double radius, SplitMix64& rng) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(space.sample(rng));
  return make_cover(space, std::move(pts), radius);
}

Point cell_midpoint(const Space& space, const Cell& cell) {
  Point p;
  if (space.kind() == SpaceKind::CubeLinf || space.kind() == SpaceKind::CubeL2) {
    p.coords.resize(cell.lo.size());
    for (std::size_t a = 0; a < cell.lo.size(); ++a)
      p.coords[a] = 0.5 * (cell.lo[a] + cell.hi[a]);
  } else {
    p.edge = cell.component;
    p.x = 0.5 * (cell.lo[0] + cell.hi[0]);
  }
  return p;
}

double cell_diameter(const Space& space, const Cell& cell) {
  switch (space.kind()) {
    case SpaceKind::CubeLinf: {
      double m = 0;
      for (std::size_t a = 0; a < cell.lo.size(); ++a)
        m = std::max(m, cell.hi[a] - cell.lo[a]);
      return m;
    }
    case SpaceKind::CubeL2: {
      double s = 0;
      for (std::size_t a = 0; a < cell.lo.size(); ++a) {
        double d = cell.hi[a] - cell.lo[a];
        s += d * d;
      }
      return std::sqrt(s);
    }
    default:
      return (cell.hi[0] - cell.lo[0]) * space.metric_scale(cell.component);
  }
}

bool cell_inside_trace(const Space& space, const Cell& cell, const RegionTrace& trace,
                       double slack) {
  switch (space.kind()) {
    case SpaceKind::CubeLinf: {
      for (std::size_t a = 0; a < cell.lo.size(); ++a)
        if (cell.lo[a] < trace.box_lo[a] - slack || cell.hi[a] > trace.box_hi[a] + slack)
          return false;
      return true;
    }
    case SpaceKind::CubeL2: {
      double far2 = 0;
      for (std::size_t a = 0; a < cell.lo.size(); ++a) {
        double f = std::max(std::abs(cell.lo[a] - trace.ball_center[a]),
                            std::abs(cell.hi[a] - trace.ball_center[a]));
        far2 += f * f;
      }
      return std::sqrt(far2) <= trace.ball_radius + slack;
    }
    default: {
      const auto& iv = trace.comp[cell.component];
      double s = slack / space.metric_scale(cell.component);
      for (const auto& i : iv)
        if (cell.lo[0] >= i.lo - s && cell.hi[0] <= i.hi + s) return true;
      return false;
    }
  }
}

Arrangement build_arrangement(const BallCover& cover, long long max_cells) {
  const Space& sp = *cover.space;
  if (sp.kind() == SpaceKind::CubeL2)
    throw std::invalid_argument("no exact arrangement for Euclidean balls");

  Arrangement arr;
  const int n = cover.n();

  if (sp.kind() == SpaceKind::CubeLinf) {
    const int dim = sp.dim();
    const int res = sp.density().cube_res;
    std::vector<std::vector<double>> axis(dim);
    for (int a = 0; a < dim; ++a) {
      for (int j = 0; j <= res; ++j) axis[a].push_back(static_cast<double>(j) / res);
      for (const auto& t : cover.traces) {
        axis[a].push_back(t.box_lo[a]);
        axis[a].push_back(t.box_hi[a]);
      }
      std::sort(axis[a].begin(), axis[a].end());
      axis[a].erase(std::unique(axis[a].begin(), axis[a].end()), axis[a].end());
    }
    long long ncells = 1;
    for (int a = 0; a < dim; ++a) ncells *= static_cast<long long>(axis[a].size()) - 1;
    if (ncells > max_cells) throw ResourceLimitError("arrangement cell count exceeds limit");

    std::vector<int> idx(dim, 0);
    while (true) {
      Cell cell;
      cell.lo.resize(dim);
      cell.hi.resize(dim);
      std::vector<double> mid(dim);
      for (int a = 0; a < dim; ++a) {
        cell.lo[a] = axis[a][idx[a]];
        cell.hi[a] = axis[a][idx[a] + 1];
        mid[a] = 0.5 * (cell.lo[a] + cell.hi[a]);
      }
      cell.mass = sp.cube_box_mass(cell.lo, cell.hi);
      std::vector<int> balls;
      for (int i = 0; i < n; ++i) {
        bool in = true;
        for (int a = 0; a < dim && in; ++a)
          in = cover.traces[i].box_lo[a] <= mid[a] && mid[a] <= cover.traces[i].box_hi[a];
        if (in) balls.push_back(i);
      }
      arr.cells.push_back(std::move(cell));
      arr.cell_balls.push_back(std::move(balls));
      int a = 0;
      for (; a < dim; ++a) {
        if (++idx[a] < static_cast<int>(axis[a].size()) - 1) break;
        idx[a] = 0;
      }
      if (a == dim) break;
    }
    return arr;
  }

  // 1-D kinds: per component, cut at density breakpoints and trace endpoints.
  for (int c = 0; c < sp.num_components(); ++c) {
    std::vector<double> bps;
    auto b = sp.component_bounds(c);
    bps.push_back(b.lo);
    bps.push_back(b.hi);
    for (const auto& piece : sp.density().comp[c]) {
      bps.push_back(piece.lo);
      bps.push_back(piece.hi);
    }
    for (const auto& t : cover.traces)
      if (c < static_cast<int>(t.comp.size()))
        for (const auto& iv : t.comp[c]) {
          bps.push_back(iv.lo);
          bps.push_back(iv.hi);
        }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    if (static_cast<long long>(arr.cells.size()) + static_cast<long long>(bps.size()) >
        max_cells)
      throw ResourceLimitError("arrangement cell count exceeds limit");

    const std::size_t first_cell = arr.cells.size();
    std::vector<std::size_t> offset;  // bps index -> first cell at/after it
    for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
      offset.push_back(arr.cells.size() - first_cell);
      if (bps[k + 1] <= bps[k]) continue;
      Cell cell;
      cell.component = c;
      cell.lo = {bps[k]};
      cell.hi = {bps[k + 1]};
      cell.mass = sp.measure_interval(c, bps[k], bps[k + 1]);
      arr.cells.push_back(std::move(cell));
      arr.cell_balls.emplace_back();
    }
    offset.push_back(arr.cells.size() - first_cell);

    // Interval stabbing: each trace subinterval covers a contiguous cell run.
    for (int i = 0; i < n; ++i) {
      if (c >= static_cast<int>(cover.traces[i].comp.size())) continue;
      for (const auto& iv : cover.traces[i].comp[c]) {
        auto lo_it = std::lower_bound(bps.begin(), bps.end(), iv.lo);
        auto hi_it = std::lower_bound(bps.begin(), bps.end(), iv.hi);
        std::size_t k0 = offset[lo_it - bps.begin()];
        std::size_t k1 = offset[hi_it - bps.begin()];
        for (std::size_t k = k0; k < k1; ++k)
          arr.cell_balls[first_cell + k].push_back(i);
      }
    }
  }
  return arr;
}

Arrangement build_grid(const BallCover& cover, int grid_res, bool inner,
                       long long max_cells) {
  const Space& sp = *cover.space;
  if (sp.kind() != SpaceKind::CubeLinf && sp.kind() != SpaceKind::CubeL2)
    throw std::invalid_argument("build_grid is cube-only");
  const int dim = sp.dim();
  long long ncells = 1;
  for (int a = 0; a < dim; ++a) ncells *= grid_res;
  if (ncells > max_cells) throw ResourceLimitError("grid cell count exceeds limit");

  const bool linf = sp.kind() == SpaceKind::CubeLinf;
  const double r = cover.radius;
  const double h = 1.0 / grid_res;
  Arrangement arr;
  arr.cells.reserve(ncells);
  std::vector<int> idx(dim, 0);
  while (true) {
    Cell cell;
    cell.lo.resize(dim);
    cell.hi.resize(dim);
    for (int a = 0; a < dim; ++a) {
      cell.lo[a] = idx[a] * h;
      cell.hi[a] = cell.lo[a] + h;
    }
    cell.mass = sp.cube_box_mass(cell.lo, cell.hi);
    std::vector<int> balls;
    for (int i = 0; i < cover.n(); ++i) {
      const auto& c = cover.centers[i].coords;
      bool ok;
      if (linf) {
        ok = true;
        for (int a = 0; a < dim && ok; ++a) {
          double d = inner ? std::max(std::abs(cell.lo[a] - c[a]), std::abs(cell.hi[a] - c[a]))
                           : std::max({0.0, cell.lo[a] - c[a], c[a] - cell.hi[a]});
          ok = d <= r;
        }
      } else {
        double s2 = 0;
        for (int a = 0; a < dim; ++a) {
          double d = inner ? std::max(std::abs(cell.lo[a] - c[a]), std::abs(cell.hi[a] - c[a]))
                           : std::max({0.0, cell.lo[a] - c[a], c[a] - cell.hi[a]});
          s2 += d * d;
        }
        ok = s2 <= r * r;
      }
      if (ok) balls.push_back(i);
    }
    arr.cells.push_back(std::move(cell));
    arr.cell_balls.push_back(std::move(balls));
    int a = 0;
    for (; a < dim; ++a) {
      if (++idx[a] < grid_res) break;
      idx[a] = 0;
    }
    if (a == dim) break;
  }
  return arr;
}

}  // namespace covercheck
