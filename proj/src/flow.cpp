#include "covercheck/flow.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "covercheck/space.hpp"

namespace covercheck {

namespace {

// Generic Dinic over the fixed source/cell/ball/sink layout.
template <typename Cap>
struct Dinic {
  struct Arc {
    int to;
    Cap cap;
    int rev;
  };

  explicit Dinic(int n) : g(n), level(n), it(n) {}

  std::vector<std::vector<Arc>> g;
  std::vector<int> level, it;
  Cap eps;

  void add(int a, int b, Cap cap) {
    g[a].push_back({b, cap, static_cast<int>(g[b].size())});
    g[b].push_back({a, Cap(0), static_cast<int>(g[a].size()) - 1});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    q.push(s);
    level[s] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Arc& a : g[u])
        if (a.cap > eps && level[a.to] < 0) {
          level[a.to] = level[u] + 1;
          q.push(a.to);
        }
    }
    return level[t] >= 0;
  }

  Cap dfs(int u, int t, Cap f) {
    if (u == t) return f;
    for (int& i = it[u]; i < static_cast<int>(g[u].size()); ++i) {
      Arc& a = g[u][i];
      if (a.cap > eps && level[a.to] == level[u] + 1) {
        Cap d = dfs(a.to, t, std::min(f, a.cap));
        if (d > eps) {
          a.cap -= d;
          g[a.to][a.rev].cap += d;
          return d;
        }
      }
    }
    return Cap(0);
  }

  Cap run(int s, int t, Cap inf) {
    Cap total(0);
    while (bfs(s, t)) {
      std::fill(it.begin(), it.end(), 0);
      while (true) {
        Cap f = dfs(s, t, inf);
        if (!(f > eps)) break;
        total += f;
      }
    }
    return total;
  }

  std::vector<char> reachable(int s) const {
    std::vector<char> seen(g.size(), 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Arc& a : g[u])
        if (a.cap > eps && !seen[a.to]) {
          seen[a.to] = 1;
          q.push(a.to);
        }
    }
    return seen;
  }
};

template <typename Cap>
MaxFlowResult solve(const FlowNetwork& net, Cap eps, Cap inf,
                    const std::vector<Cap>& masses, Cap demand) {
  const int C = net.n_cells, B = net.n_balls;
  const int s = 0, t = C + B + 1;
  Dinic<Cap> d(C + B + 2);
  d.eps = eps;
  std::vector<std::vector<int>> arc_idx(C);
  for (int c = 0; c < C; ++c) {
    d.add(s, 1 + c, masses[c]);
    arc_idx[c].reserve(net.cell_balls[c].size());
    for (int b : net.cell_balls[c]) {
      arc_idx[c].push_back(static_cast<int>(d.g[1 + c].size()));
      d.add(1 + c, 1 + C + b, inf);
    }
  }
  for (int b = 0; b < B; ++b) d.add(1 + C + b, t, demand);

  Cap value = d.run(s, t, inf);

  MaxFlowResult res;
  res.flow.resize(C);
  for (int c = 0; c < C; ++c) {
    res.flow[c].resize(net.cell_balls[c].size());
    for (std::size_t k = 0; k < net.cell_balls[c].size(); ++k) {
      const auto& arc = d.g[1 + c][arc_idx[c][k]];
      // Flow pushed along an uncapacitated arc shows up on its reverse.
      res.flow[c][k] = static_cast<double>(d.g[arc.to][arc.rev].cap);
    }
  }
  std::vector<char> seen = d.reachable(s);
  res.source_side.resize(C + B);
  for (int c = 0; c < C; ++c) res.source_side[c] = seen[1 + c];
  for (int b = 0; b < B; ++b) res.source_side[C + b] = seen[1 + C + b];

  if constexpr (std::is_same_v<Cap, long long>) {
    res.value_int = value;
    res.total_demand_int = static_cast<long long>(B) * demand;
    res.value = static_cast<double>(value) / static_cast<double>(net.scale);
    res.total_demand =
        static_cast<double>(res.total_demand_int) / static_cast<double>(net.scale);
    for (auto& row : res.flow)
      for (double& f : row) f /= static_cast<double>(net.scale);
  } else {
    res.value = value;
    res.total_demand = static_cast<double>(B) * demand;
  }
  return res;
}

}  // namespace

double FlowNetwork::demand_per_ball() const {
  return integer_mode
             ? static_cast<double>(scale / n_balls) / static_cast<double>(scale)
             : 1.0 / n_balls;
}

MaxFlowResult max_flow(const FlowNetwork& net) {
  if (net.integer_mode) {
    if (net.scale % net.n_balls != 0)
      throw std::logic_error("integer flow scale must be divisible by the ball count");
    long long demand = net.scale / net.n_balls;
    long long inf = net.scale + 1;
    return solve<long long>(net, 0, inf, net.cell_mass_int, demand);
  }
  double demand = 1.0 / net.n_balls;
  return solve<double>(net, 1e-14, 2.0, net.cell_mass, demand);
}

std::vector<int> min_cut_ball_side(const FlowNetwork& net, const MaxFlowResult& res) {
  if (res.deficit() <= 0 && res.value_int >= res.total_demand_int)
    throw std::logic_error("min_cut_ball_side called on a saturated flow");
  std::vector<int> balls;
  for (int b = 0; b < net.n_balls; ++b)
    if (!res.source_side[net.n_cells + b]) balls.push_back(b);
  return balls;
}

}  // namespace covercheck
