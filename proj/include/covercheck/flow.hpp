#pragma once

#include <vector>

namespace covercheck {

/// Bipartite transportation network: source -> cell (capacity = cell mass) ->
/// ball (uncapacitated) -> sink (capacity = demand per ball, uniform). In
/// integer mode masses are multiples of 1/scale and the flow is integral;
/// otherwise capacities are doubles compared against a small residual epsilon.
struct FlowNetwork {
  int n_cells = 0;
  int n_balls = 0;
  bool integer_mode = false;
  long long scale = 1;
  std::vector<double> cell_mass;
  std::vector<long long> cell_mass_int;       // integer mode only
  std::vector<std::vector<int>> cell_balls;   // adjacency, cell -> balls
  double demand_per_ball() const;
};

struct MaxFlowResult {
  double value = 0;
  double total_demand = 0;
  long long value_int = 0;
  long long total_demand_int = 0;
  /// flow[cell][k] routed along cell_balls[cell][k].
  std::vector<std::vector<double>> flow;
  /// Residual reachability from the source: first n_cells entries are cells,
  /// next n_balls are balls. Unique across maximal flows.
  std::vector<char> source_side;
  double deficit() const { return total_demand - value; }
};

/// Dinic-style layered augmentation; exact in integer mode, residuals below
/// 1e-14 treated as saturated in float mode. The value is deterministic and
/// independent of arc order.
MaxFlowResult max_flow(const FlowNetwork& net);

/// Balls unreachable from the source in the final residual graph. Only valid
/// on an unsaturated flow: the returned set I satisfies
/// |I| * demand > mass(cells adjacent to I). Throws std::logic_error if the
/// flow is saturated.
std::vector<int> min_cut_ball_side(const FlowNetwork& net, const MaxFlowResult& res);

}  // namespace covercheck
