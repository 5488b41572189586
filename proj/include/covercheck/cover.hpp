#pragma once

#include <vector>

#include "covercheck/rng.hpp"
#include "covercheck/space.hpp"

namespace covercheck {

/// n sampled centers with a common radius; the induced multifunction sends a
/// point to the indices of the closed balls containing it. Traces are cached
/// at construction. sorted_order lists center indices by ascending coordinate
/// for the ordered 1-D kinds (interval, circle) and is empty otherwise.
struct BallCover {
  const Space* space = nullptr;
  std::vector<Point> centers;
  double radius = 0;
  std::vector<int> sorted_order;
  std::vector<RegionTrace> traces;

  int n() const { return static_cast<int>(centers.size()); }
};

BallCover make_cover(const Space& space, std::vector<Point> centers, double radius);
BallCover sample_cover(const Space& space, int n, double radius, SplitMix64& rng);

}  // namespace covercheck
