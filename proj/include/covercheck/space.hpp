#pragma once

#include <array>
#include <utility>
#include <vector>

#include "covercheck/rng.hpp"

namespace covercheck {

// Tolerances shared across the library.
inline constexpr double kMassTol = 1e-9;   // verdict-level mass comparisons
inline constexpr double kSweepTol = 1e-12; // sweep / integration slack
inline constexpr double kGeomTol = 1e-9;   // support containment slack

enum class SpaceKind { Interval, Circle, Graph, CubeLinf, CubeL2, TwoInterval };

const char* to_string(SpaceKind k);

/// A point of a supported space. Which fields are meaningful depends on the
/// space kind: 1-D kinds use `x` (graphs additionally `edge`, with x the
/// position t in [0,1] along that edge), cubes use `coords`.
struct Point {
  double x = 0.0;
  int edge = 0;
  std::vector<double> coords;
};

/// One constant piece of a 1-D density, on [lo, hi] in the component's own
/// coordinate.
struct DensityPiece {
  double lo = 0, hi = 0, value = 0;
};

/// Piecewise-constant density. 1-D kinds store one piece list per component
/// (one component for interval/circle, one per edge for graphs, two for the
/// split interval). Cubes store a res^D grid of constant values instead.
/// The total integral over the space must be 1.
struct Density {
  std::vector<std::vector<DensityPiece>> comp;
  int cube_res = 1;
  std::vector<double> cube_values;
  double lower = 1.0;  // c: positive lower bound on the coordinate density
  double upper = 1.0;  // C >= c
};

struct GraphGeometry {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::array<double, 2>> vertex_pos;  // embedding; cosmetic only
  std::vector<std::vector<double>> vertex_dist;   // all-pairs shortest path
  double edge_len() const { return 1.0 / static_cast<double>(edges.size()); }
};

struct Interval1D {
  double lo = 0, hi = 0;
};

/// Canonical form of a closed ball intersected with the space: per 1-D
/// component a sorted union of disjoint closed subintervals (zero-length
/// pieces are dropped as measure-less), for cubes a box or ball descriptor.
struct RegionTrace {
  std::vector<std::vector<Interval1D>> comp;
  std::vector<double> box_lo, box_hi;  // CubeLinf
  std::vector<double> ball_center;     // CubeL2
  double ball_radius = 0;
};

struct MassBounds {
  double inner = 0, outer = 0;
};

/// A metric Polish probability space instance with exact distance, sampling,
/// ball-trace and union-of-balls measure procedures. Immutable after
/// construction; safe to share across threads.
class Space {
 public:
  static Space interval(Density d = Density{});
  static Space circle(Density d = Density{});
  static Space graph(int num_vertices, std::vector<std::pair<int, int>> edges,
                     Density d = Density{},
                     std::vector<std::array<double, 2>> vertex_pos = {});
  static Space cube(int dim, bool linf, Density d = Density{});
  static Space two_interval(double q);

  SpaceKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double two_interval_q() const { return q_; }
  const Density& density() const { return density_; }
  const GraphGeometry& graph_geom() const { return graph_; }

  int num_components() const;
  Interval1D component_bounds(int c) const;
  double component_mass(int c) const { return comp_mass_[c]; }
  /// Metric length of one coordinate unit on this component (1 except for
  /// graph edges, whose [0,1] coordinate spans one edge of length 1/|E|).
  double metric_scale(int c) const;
  double diameter() const;

  /// Bounds of the density taken relative to the uniform probability measure,
  /// which is the normalisation the rate formulas use.
  std::pair<double, double> density_bounds_wrt_uniform() const;

  double distance(const Point& p, const Point& q) const;
  Point sample(SplitMix64& rng) const;
  RegionTrace ball_trace(const Point& center, double r) const;

  /// Exact mu(union of balls with the given subset of centers). Exact for all
  /// kinds except CubeL2, which has no exact arrangement and must go through
  /// union_measure_bounds. Throws std::invalid_argument on an empty subset.
  double union_measure(const std::vector<Point>& centers, double r,
                       const std::vector<int>& subset) const;
  double union_measure_traces(const std::vector<RegionTrace>& traces,
                              const std::vector<int>& subset) const;

  /// Two-sided grid bound on the union mass for cube kinds: inner counts grid
  /// cells contained in a single ball, outer counts cells meeting any ball.
  MassBounds union_measure_bounds(const std::vector<Point>& centers, double r,
                                  const std::vector<int>& subset,
                                  int grid_res) const;

  // Per-component piecewise-constant calculus.
  double measure_interval(int c, double lo, double hi) const;
  double cdf(int c, double x) const;  // mass of component c below x
  double quantile_in_component(int c, double mass) const;
  double density_at(int c, double x) const;

  // Cube density helpers.
  double cube_density_at(const std::vector<double>& x) const;
  double cube_box_mass(const std::vector<double>& lo,
                       const std::vector<double>& hi) const;

  /// Check the documented invariants (density integral, bounds, graph
  /// connectivity, ...). Throws std::invalid_argument on violation.
  void validate() const;

 private:
  Space() = default;
  void finalize();  // precompute prefix sums, graph distances

  SpaceKind kind_ = SpaceKind::Interval;
  int dim_ = 1;
  double q_ = 0;
  Density density_;
  GraphGeometry graph_;

  std::vector<std::vector<double>> cum_;  // cumulative mass at piece ends
  std::vector<double> comp_mass_;
  std::vector<double> comp_cum_;  // cumulative component masses
};

Density uniform_density(SpaceKind kind, int components_or_dim, double q = 0);

}  // namespace covercheck
