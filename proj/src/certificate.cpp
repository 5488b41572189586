#include "covercheck/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <queue>
#include <stdexcept>

namespace covercheck {

namespace {

constexpr double kEdfDust = 1e-12;  // capacity below this counts as filled

struct ByDeadline {
  // Earliest right endpoint first; ties broken by smaller index.
  bool operator()(const std::pair<double, int>& a, const std::pair<double, int>& b) const {
    return a.first > b.first || (a.first == b.first && a.second > b.second);
  }
};

}  // namespace

Certificate construct_edf(const BallCover& cover) {
  const Space& sp = *cover.space;
  if (sp.kind() != SpaceKind::Interval)
    throw std::invalid_argument("construct_edf expects an interval cover");

  const int n = cover.n();
  const double share = 1.0 / n;

  // Balls in center order; each trace is a single clipped interval.
  std::vector<double> L(n), R(n), cap(n, share);
  std::vector<int> orig(n);
  for (int k = 0; k < n; ++k) {
    orig[k] = cover.sorted_order[k];
    const auto& iv = cover.traces[orig[k]].comp[0];
    L[k] = iv.front().lo;
    R[k] = iv.back().hi;
  }

  std::vector<double> events = {0.0, 1.0};
  for (int k = 0; k < n; ++k) {
    events.push_back(L[k]);
    events.push_back(R[k]);
  }
  for (const auto& piece : sp.density().comp[0]) {
    events.push_back(piece.lo);
    events.push_back(piece.hi);
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  Certificate cert;
  cert.radius = cover.radius;
  cert.centers = cover.centers;
  cert.mu.resize(n);

  std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                      ByDeadline>
      active;
  std::size_t next_ball = 0;  // balls sorted by L (left endpoints are ordered)

  auto starve = [&](int k) {
    throw std::logic_error("edf sweep starved ball " + std::to_string(orig[k]) +
                           ": connected-run feasibility violated");
  };

  for (std::size_t e = 0; e + 1 < events.size(); ++e) {
    double x = events[e];
    const double seg_end = events[e + 1];
    while (next_ball < static_cast<std::size_t>(n) && L[next_ball] <= x) {
      active.push({R[next_ball], static_cast<int>(next_ball)});
      ++next_ball;
    }

    const double v = sp.density_at(0, 0.5 * (x + seg_end));
    while (v > 0 && x < seg_end) {
      while (!active.empty() && cap[active.top().second] <= kEdfDust) active.pop();
      if (active.empty()) {
        if ((seg_end - x) * v > kEdfDust)
          throw std::logic_error("edf sweep found uncovered mass: cover is infeasible");
        break;
      }
      // Every surviving ball has its deadline at or beyond seg_end: deadlines
      // are event points and expired balls were drained at segment close.
      const int k = active.top().second;
      const double seg_mass = v * (seg_end - x);
      const double take = std::min(cap[k], seg_mass);
      const double hi = (take == seg_mass) ? seg_end : x + take / v;
      Cell cell;
      cell.component = 0;
      cell.lo = {x};
      cell.hi = {hi};
      cell.mass = take;
      cert.mu[orig[k]].push_back({static_cast<int>(cert.cells.size()), take * n});
      cert.cells.push_back(std::move(cell));
      cap[k] -= take;
      x = hi;
      if (cap[k] <= kEdfDust) active.pop();
      else break;  // segment exhausted, ball keeps its remaining capacity
    }

    // Balls whose window closes here must have been filled.
    while (!active.empty() && R[active.top().second] <= seg_end + kEdfDust) {
      const int k = active.top().second;
      if (cap[k] > kEdfDust) starve(k);
      active.pop();
    }
  }
  for (int k = 0; k < n; ++k)
    if (cap[k] > 1e-10) starve(k);

  // Normalise each component measure to total mass exactly 1.
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (auto& [c, m] : cert.mu[i]) s += m;
    if (s <= 0) throw std::logic_error("edf produced an empty component measure");
    for (auto& [c, m] : cert.mu[i]) m /= s;
  }
  return cert;
}

Certificate decompose_flow(const FlowNetwork& net, const MaxFlowResult& flow,
                           const std::vector<Cell>& cells, const BallCover& cover) {
  if (flow.deficit() > kMassTol * std::max(1.0, flow.total_demand))
    throw std::logic_error("decompose_flow needs a saturated flow");
  Certificate cert;
  cert.radius = cover.radius;
  cert.centers = cover.centers;
  cert.cells = cells;
  cert.mu.resize(net.n_balls);
  for (int c = 0; c < net.n_cells; ++c)
    for (std::size_t k = 0; k < net.cell_balls[c].size(); ++k) {
      double f = flow.flow[c][k];
      if (f > 0) cert.mu[net.cell_balls[c][k]].push_back({c, f * net.n_balls});
    }
  for (auto& comp : cert.mu) {
    double s = 0;
    for (auto& [c, m] : comp) s += m;
    if (s <= 0) throw std::logic_error("flow decomposition left a ball without mass");
    for (auto& [c, m] : comp) m /= s;
  }
  return cert;
}

ValidationReport validate_certificate(const Space& space, const Certificate& cert) {
  ValidationReport rep;
  const int n = cert.n();
  if (n == 0 || cert.mu.size() != static_cast<std::size_t>(n)) {
    rep.mass_flag = true;
    return rep;
  }

  // (1) Each component measure is a probability measure.
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (const auto& [c, m] : cert.mu[i]) s += m;
    rep.worst_mass_err = std::max(rep.worst_mass_err, std::abs(s - 1.0));
  }
  if (rep.worst_mass_err > kMassTol) rep.mass_flag = true;

  // (2) Supports stay inside the balls.
  for (int i = 0; i < n; ++i) {
    RegionTrace trace = space.ball_trace(cert.centers[i], cert.radius);
    for (const auto& [c, m] : cert.mu[i]) {
      if (m <= 0) continue;
      const Cell& cell = cert.cells[c];
      if (!cell_inside_trace(space, cell, trace, kGeomTol)) {
        rep.support_flag = true;
        // Farthest-endpoint overshoot, for the report only.
        double far = 0;
        if (space.kind() == SpaceKind::CubeLinf || space.kind() == SpaceKind::CubeL2) {
          Point corner;
          corner.coords = cell.lo;
          const int dim = static_cast<int>(cell.lo.size());
          for (int mask = 0; mask < (1 << dim); ++mask) {
            for (int a = 0; a < dim; ++a)
              corner.coords[a] = (mask >> a) & 1 ? cell.hi[a] : cell.lo[a];
            far = std::max(far, space.distance(cert.centers[i], corner));
          }
        } else {
          Point e1, e2;
          e1.edge = e2.edge = cell.component;
          e1.x = cell.lo[0];
          e2.x = cell.hi[0];
          far = std::max(space.distance(cert.centers[i], e1),
                         space.distance(cert.centers[i], e2));
        }
        rep.worst_support_err =
            std::max(rep.worst_support_err, far - cert.radius);
      }
    }
  }

  // (3) The components average back to mu, cell by cell.
  std::vector<double> avg(cert.cells.size(), 0.0);
  for (int i = 0; i < n; ++i)
    for (const auto& [c, m] : cert.mu[i]) avg[c] += m / n;
  double tv = 0;
  for (std::size_t c = 0; c < cert.cells.size(); ++c) {
    const Cell& cell = cert.cells[c];
    double geo;
    if (space.kind() == SpaceKind::CubeLinf || space.kind() == SpaceKind::CubeL2)
      geo = space.cube_box_mass(cell.lo, cell.hi);
    else
      geo = space.measure_interval(cell.component, cell.lo[0], cell.hi[0]);
    tv += std::abs(avg[c] - geo);
  }
  rep.tv_err = 0.5 * tv;
  if (rep.tv_err > kMassTol) rep.average_flag = true;

  rep.pass = !(rep.mass_flag || rep.support_flag || rep.average_flag);
  return rep;
}

std::string certificate_digest(const Certificate& cert) {
  std::uint64_t h = 1469598103934665603ULL;
  auto fold = [&h](const char* data, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 1099511628211ULL;
    }
  };
  char buf[64];
  auto fold_num = [&](double x) {
    int len = std::snprintf(buf, sizeof buf, "%.17g;", x);
    fold(buf, len);
  };
  fold_num(cert.n());
  fold_num(cert.radius);
  for (const auto& cell : cert.cells) {
    fold_num(cell.component);
    for (double x : cell.lo) fold_num(x);
    for (double x : cell.hi) fold_num(x);
  }
  for (const auto& comp : cert.mu)
    for (const auto& [c, m] : comp) {
      fold_num(c);
      fold_num(m);
    }
  int len = std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, len);
}

}  // namespace covercheck
