#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covercheck/errors.hpp"
#include "covercheck/space.hpp"

using namespace covercheck;

namespace {

Space triangle_graph() {
  return Space::graph(3, {{0, 1}, {0, 2}, {1, 2}},
                      Density{}, {{{0.0, 0.0}}, {{1.0 / 3, 0.0}}, {{1.0 / 6, 0.2886751}}});
}

Point pt(double x, int edge = 0) {
  Point p;
  p.x = x;
  p.edge = edge;
  return p;
}

Point random_point(const Space& s, SplitMix64& rng) { return s.sample(rng); }

}  // namespace

TEST_CASE("distance: examples") {
  // Midpoints of the two edges meeting at the shared vertex of a triangle.
  Space tri = triangle_graph();
  double d = tri.distance(pt(0.5, 1), pt(0.5, 2));
  CHECK(d == doctest::Approx(1.0 / 3).epsilon(1e-15));

  Space in = Space::interval();
  CHECK(in.distance(pt(0.3), pt(0.3)) == 0.0);

  Space ci = Space::circle();
  CHECK(ci.distance(pt(0.1), pt(1.9)) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("distance: metric axioms on random triples") {
  std::vector<Space> spaces;
  spaces.push_back(Space::interval());
  spaces.push_back(Space::circle());
  spaces.push_back(triangle_graph());
  spaces.push_back(Space::cube(2, true));
  spaces.push_back(Space::cube(3, false));
  spaces.push_back(Space::two_interval(M_SQRT1_2));

  SplitMix64 rng(42);
  for (const auto& s : spaces) {
    for (int it = 0; it < 10000; ++it) {
      Point a = random_point(s, rng), b = random_point(s, rng), c = random_point(s, rng);
      double ab = s.distance(a, b), ba = s.distance(b, a);
      double ac = s.distance(a, c), cb = s.distance(c, b);
      CHECK(ab == ba);
      CHECK(ab >= 0);
      CHECK(ab <= ac + cb + 1e-12);
      CHECK(s.distance(a, a) == 0.0);
    }
  }
}

TEST_CASE("distance: cube linf dominated by l2") {
  Space li = Space::cube(3, true);
  Space l2 = Space::cube(3, false);
  SplitMix64 rng(7);
  for (int it = 0; it < 2000; ++it) {
    Point a = li.sample(rng), b = li.sample(rng);
    CHECK(li.distance(a, b) <= l2.distance(a, b) + 1e-15);
  }
  // Hence the l2 ball trace sits inside the linf trace of equal radius.
  for (int it = 0; it < 200; ++it) {
    Point c = li.sample(rng);
    double r = 0.05 + 0.4 * rng.next_double();
    RegionTrace box = li.ball_trace(c, r);
    for (int k = 0; k < 50; ++k) {
      Point z = li.sample(rng);
      if (l2.distance(c, z) <= r) {
        for (int a = 0; a < 3; ++a) {
          CHECK(z.coords[a] >= box.box_lo[a] - 1e-15);
          CHECK(z.coords[a] <= box.box_hi[a] + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("sample: determinism and distribution checks") {
  Space in = Space::interval();
  SplitMix64 a = SplitMix64::keyed(123, 4, 5);
  SplitMix64 b = SplitMix64::keyed(123, 4, 5);
  Point p1 = in.sample(a), p2 = in.sample(b);
  CHECK(p1.x == p2.x);
  CHECK(p1.x >= 0.0);
  CHECK(p1.x < 1.0);

  // Density 2 on [0, 0.5]: the left half carries all the mass.
  Density d;
  d.comp = {{{0.0, 0.5, 2.0}, {0.5, 1.0, 0.0}}};
  d.lower = 2.0;
  d.upper = 2.0;
  Space half = Space::interval(d);
  SplitMix64 rng(99);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    if (half.sample(rng).x <= 0.5) ++hits;
  CHECK(static_cast<double>(hits) / n >= 0.995);

  Space ti = Space::two_interval(M_SQRT1_2);
  SplitMix64 rng2(100);
  int neg = 0;
  for (int i = 0; i < n; ++i)
    if (ti.sample(rng2).x < 0) ++neg;
  CHECK(std::abs(static_cast<double>(neg) / n - M_SQRT1_2) <= 0.01);
}

TEST_CASE("ball_trace: interval clipping") {
  Space in = Space::interval();
  RegionTrace t = in.ball_trace(pt(0.5), 0.2);
  REQUIRE(t.comp[0].size() == 1);
  CHECK(t.comp[0][0].lo == doctest::Approx(0.3));
  CHECK(t.comp[0][0].hi == doctest::Approx(0.7));

  t = in.ball_trace(pt(0.1), 0.2);
  REQUIRE(t.comp[0].size() == 1);
  CHECK(t.comp[0][0].lo == 0.0);
  CHECK(t.comp[0][0].hi == doctest::Approx(0.3));
}

TEST_CASE("ball_trace: triangle vertex ball") {
  Space tri = triangle_graph();
  // Center at vertex v0, i.e. t=0 on edge {v0,v1}; radius one edge length.
  RegionTrace t = tri.ball_trace(pt(0.0, 0), 1.0 / 3);
  REQUIRE(t.comp.size() == 3);
  REQUIRE(t.comp[0].size() == 1);
  CHECK(t.comp[0][0].lo == doctest::Approx(0.0));
  CHECK(t.comp[0][0].hi == doctest::Approx(1.0));
  REQUIRE(t.comp[1].size() == 1);
  CHECK(t.comp[1][0].lo == doctest::Approx(0.0));
  CHECK(t.comp[1][0].hi == doctest::Approx(1.0));
  CHECK(t.comp[2].empty());
}

TEST_CASE("ball_trace: circle wraparound") {
  Space ci = Space::circle();
  RegionTrace t = ci.ball_trace(pt(0.1), 0.3);
  REQUIRE(t.comp[0].size() == 2);
  CHECK(t.comp[0][0].lo == 0.0);
  CHECK(t.comp[0][0].hi == doctest::Approx(0.4));
  CHECK(t.comp[0][1].lo == doctest::Approx(1.8));
  CHECK(t.comp[0][1].hi == 2.0);
}

TEST_CASE("union_measure: examples") {
  Space in = Space::interval();
  std::vector<Point> centers = {pt(0.1), pt(0.9)};
  CHECK(in.union_measure(centers, 0.2, {0, 1}) == doctest::Approx(0.6).epsilon(1e-12));

  centers = {pt(0.4), pt(0.5)};
  CHECK(in.union_measure(centers, 0.2, {0, 1}) == doctest::Approx(0.5).epsilon(1e-12));

  Space ci = Space::circle();
  centers = {pt(0.0)};
  CHECK(ci.union_measure(centers, 0.25, {0}) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(in.union_measure(centers, 0.2, {}), std::invalid_argument);
}

TEST_CASE("union_measure: monotone in radius and subset") {
  SplitMix64 rng(2024);
  std::vector<Space> spaces;
  spaces.push_back(Space::interval());
  spaces.push_back(Space::circle());
  spaces.push_back(triangle_graph());
  spaces.push_back(Space::two_interval(M_SQRT1_2));
  for (int it = 0; it < 1000; ++it) {
    const Space& s = spaces[it % spaces.size()];
    int n = 2 + static_cast<int>(rng.next() % 6);
    std::vector<Point> centers;
    for (int i = 0; i < n; ++i) centers.push_back(s.sample(rng));
    double r = 0.02 + 0.3 * rng.next_double();
    double r2 = r * (1.0 + rng.next_double());
    std::vector<int> part, all;
    for (int i = 0; i < n; ++i) {
      all.push_back(i);
      if (i % 2 == 0) part.push_back(i);
    }
    double m_part = s.union_measure(centers, r, part);
    double m_all = s.union_measure(centers, r, all);
    double m_big = s.union_measure(centers, r2, all);
    CHECK(m_part <= m_all + 1e-12);
    CHECK(m_all <= m_big + 1e-12);
    CHECK(m_all >= 0);
    CHECK(m_big <= 1 + 1e-12);
  }
}

TEST_CASE("union_measure: full cover reaches one exactly") {
  Space in = Space::interval();
  std::vector<Point> centers = {pt(0.25), pt(0.75)};
  CHECK(std::abs(in.union_measure(centers, 0.25, {0, 1}) - 1.0) <= 1e-12);
  // A gap stays strictly below one.
  CHECK(in.union_measure(centers, 0.2, {0, 1}) < 1.0 - 0.05);
}

TEST_CASE("union_measure_bounds: sandwich brackets the box value") {
  Space li = Space::cube(2, true);
  SplitMix64 rng(5);
  for (int it = 0; it < 50; ++it) {
    int n = 1 + static_cast<int>(rng.next() % 5);
    std::vector<Point> centers;
    std::vector<int> subset;
    for (int i = 0; i < n; ++i) {
      centers.push_back(li.sample(rng));
      subset.push_back(i);
    }
    double r = 0.05 + 0.4 * rng.next_double();
    double exact = li.union_measure(centers, r, subset);
    MassBounds mb = li.union_measure_bounds(centers, r, subset, 64);
    CHECK(mb.inner <= exact + 1e-12);
    CHECK(mb.outer >= exact - 1e-12);
  }
}

TEST_CASE("cdf and quantile round trip") {
  Density d;
  d.comp = {{{0.0, 0.25, 2.0}, {0.25, 0.75, 0.5}, {0.75, 1.0, 1.0}}};
  d.lower = 0.5;
  d.upper = 2.0;
  Space s = Space::interval(d);
  SplitMix64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    double m = rng.next_double();
    double x = s.quantile_in_component(0, m);
    CHECK(s.cdf(0, x) == doctest::Approx(m).epsilon(1e-12));
  }
}

TEST_CASE("space validation rejects bad inputs") {
  Density d;
  d.comp = {{{0.0, 0.6, 1.0}}};  // integral 0.6, does not span [0,1]
  CHECK_THROWS_AS(Space::interval(d), std::invalid_argument);

  CHECK_THROWS_AS(Space::graph(4, {{0, 1}, {2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Space::graph(2, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Space::two_interval(1.5), std::invalid_argument);
}

TEST_CASE("cube grid densities integrate box masses exactly") {
  Density d;
  d.cube_res = 2;
  d.cube_values = {2.0, 0.5, 0.5, 1.0};  // row-major over x fastest
  d.lower = 0.5;
  d.upper = 2.0;
  Space s = Space::cube(2, true, d);
  // Whole cube.
  CHECK(s.cube_box_mass({0, 0}, {1, 1}) == doctest::Approx(1.0).epsilon(1e-12));
  // The lower-left quadrant has value 2.
  CHECK(s.cube_box_mass({0, 0}, {0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-12));
  // A box straddling quadrants.
  double m = s.cube_box_mass({0.25, 0.25}, {0.75, 0.75});
  CHECK(m == doctest::Approx(2.0 * 0.0625 + 0.5 * 0.0625 + 0.5 * 0.0625 + 1.0 * 0.0625)
                 .epsilon(1e-12));
}
