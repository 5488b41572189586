#pragma once

#include <vector>

#include "covercheck/cover.hpp"
#include "covercheck/space.hpp"

namespace covercheck {

/// One cell of an arrangement: a subinterval of a 1-D component, or a box for
/// cubes. Carries its exact measure.
struct Cell {
  int component = 0;
  std::vector<double> lo, hi;  // size 1 for 1-D kinds, dim for cubes
  double mass = 0;
};

Point cell_midpoint(const Space& space, const Cell& cell);
double cell_diameter(const Space& space, const Cell& cell);
/// True when the whole cell sits inside the ball trace, up to `slack` in the
/// metric.
bool cell_inside_trace(const Space& space, const Cell& cell, const RegionTrace& trace,
                       double slack);

/// Cells cut at every ball boundary (and density breakpoint), so that ball
/// membership is constant on each cell. Masses sum to the total mass of the
/// space. Supported for every kind with exact traces (not CubeL2).
struct Arrangement {
  std::vector<Cell> cells;
  std::vector<std::vector<int>> cell_balls;  // balls containing each cell
};

Arrangement build_arrangement(const BallCover& cover, long long max_cells = 2'000'000);

/// Regular grid cells for the sandwich checker; `inner` selects containment
/// (cell fully inside a ball) versus intersection for the adjacency.
Arrangement build_grid(const BallCover& cover, int grid_res, bool inner,
                       long long max_cells = 4'000'000);

}  // namespace covercheck
