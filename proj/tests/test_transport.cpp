#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "covercheck/feasibility.hpp"
#include "covercheck/transport.hpp"

using namespace covercheck;

namespace {

Point pt(double x) {
  Point p;
  p.x = x;
  return p;
}

std::vector<Point> pts(std::vector<double> xs) {
  std::vector<Point> v;
  for (double x : xs) v.push_back(pt(x));
  return v;
}

// Sorted matching between m quantile atoms and the duplicated sample: the
// optimal assignment on the line, used as an independent oracle.
double sorted_matching_cost(const Space& s, const std::vector<Point>& sample, int m,
                            double p) {
  std::vector<double> a, b;
  for (int j = 0; j < m; ++j)
    a.push_back(s.quantile_in_component(0, (j + 0.5) / m * s.component_mass(0)));
  for (const auto& x : sample)
    for (int k = 0; k < m / static_cast<int>(sample.size()); ++k) b.push_back(x.x);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double total = 0;
  for (int j = 0; j < m; ++j) total += std::pow(std::abs(a[j] - b[j]), p);
  return std::pow(total / m, 1.0 / p);
}

}  // namespace

TEST_CASE("wasserstein_1d: interval closed forms") {
  Space in = Space::interval();
  CHECK(wasserstein_1d(in, pts({0.5}), 1).value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(wasserstein_1d(in, pts({0.5}), 2).value ==
        doctest::Approx(std::sqrt(1.0 / 12)).epsilon(1e-12));
  CHECK(wasserstein_1d(in, pts({0.25, 0.75}), 1).value ==
        doctest::Approx(0.125).epsilon(1e-12));
  CHECK_THROWS_AS(wasserstein_1d(in, pts({0.5}), 0.5), std::invalid_argument);
}

TEST_CASE("wasserstein_1d: circle exact W1") {
  Space ci = Space::circle();
  // Single atom: every coupling integrates the distance to the atom.
  CHECK(wasserstein_1d(ci, pts({0.3}), 1).value == doctest::Approx(0.5).epsilon(1e-10));
  // Two antipodal atoms: each takes its half arc.
  CHECK(wasserstein_1d(ci, pts({0.0, 1.0}), 1).value ==
        doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("wasserstein_1d: circle values track the discrete matching oracle") {
  // The matching validator runs true discrete transport with the geodesic
  // metric, so it pins the exact W1 within its discretization slack and
  // brackets the p = 2 cut-scan bound from below.
  Space ci = Space::circle();
  SplitMix64 rng(30);
  for (int it = 0; it < 15; ++it) {
    int n = it % 2 == 0 ? 4 : 8;
    std::vector<Point> sample;
    for (int i = 0; i < n; ++i) sample.push_back(ci.sample(rng));
    double w1 = wasserstein_1d(ci, sample, 1).value;
    double m1 = wasserstein_matching(ci, sample, 256, 1).value;
    CHECK(std::abs(w1 - m1) <= 2.0 / 256);

    double w2 = wasserstein_1d(ci, sample, 2).value;
    double m2 = wasserstein_matching(ci, sample, 256, 2).value;
    CHECK(m2 <= w2 + 0.02);   // upper bound property
    CHECK(w2 <= m2 + 0.05);   // and not wildly loose
  }
}

TEST_CASE("wasserstein_1d: circle upper bounds shrink with p toward exactness") {
  Space ci = Space::circle();
  SplitMix64 rng(31);
  for (int it = 0; it < 25; ++it) {
    int n = rng.uniform_int(2, 40);
    std::vector<Point> sample;
    for (int i = 0; i < n; ++i) sample.push_back(ci.sample(rng));
    WassersteinResult w1 = wasserstein_1d(ci, sample, 1);
    WassersteinResult w2 = wasserstein_1d(ci, sample, 2);
    WassersteinResult w4 = wasserstein_1d(ci, sample, 4);
    CHECK(w1.exact);
    CHECK_FALSE(w2.exact);
    // Monotone in p (per-cut costs are L^p norms of one coupling).
    CHECK(w1.value <= w2.value + 1e-10);
    CHECK(w2.value <= w4.value + 1e-10);
  }
}

TEST_CASE("p-monotonicity on the interval") {
  Space in = Space::interval();
  SplitMix64 rng(32);
  for (int it = 0; it < 50; ++it) {
    int n = rng.uniform_int(1, 60);
    std::vector<Point> sample;
    for (int i = 0; i < n; ++i) sample.push_back(in.sample(rng));
    double w1 = wasserstein_1d(in, sample, 1).value;
    double w2 = wasserstein_1d(in, sample, 2).value;
    double w4 = wasserstein_1d(in, sample, 4).value;
    CHECK(w1 <= w2 + 1e-12);
    CHECK(w2 <= w4 + 1e-12);
  }
}

TEST_CASE("coupling_cost: centered certificate costs nothing") {
  Space in = Space::interval();
  Certificate cert;
  cert.radius = 0.3;
  cert.centers = pts({0.25, 0.75});
  Cell a, b;
  a.lo = {0.25};
  a.hi = {0.25};
  b.lo = {0.75};
  b.hi = {0.75};
  cert.cells = {a, b};
  cert.mu = {{{0, 1.0}}, {{1, 1.0}}};
  CHECK(coupling_cost(in, cert, 1).value == doctest::Approx(0.0));
}

TEST_CASE("coupling_cost: edf certificate hand integration") {
  Space in = Space::interval();
  BallCover cover = make_cover(in, pts({0.25, 0.75}), 0.25);
  Certificate cert = construct_edf(cover);
  WassersteinResult res = coupling_cost(in, cert, 1);
  CHECK(res.value == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(res.value <= cover.radius + 1e-12);
  CHECK(res.error_bound == 0.0);
}

TEST_CASE("bound chain: quantile <= coupling <= r on feasible trials") {
  Space in = Space::interval();
  SplitMix64 rng(33);
  int hits = 0;
  for (int it = 0; it < 80; ++it) {
    int n = rng.uniform_int(2, 40);
    double r = rng.uniform(0.15, 0.5);
    BallCover cover = sample_cover(in, n, r, rng);
    CheckOutcome out = check_connected(cover);
    if (out.verdict != Verdict::Disintegrable) continue;
    ++hits;
    for (double p : {1.0, 2.0, 4.0}) {
      double wq = wasserstein_1d(in, cover.centers, p).value;
      WassersteinResult cc = coupling_cost(in, *out.certificate, p);
      CHECK(wq <= cc.value + cc.error_bound + 1e-9);
      CHECK(cc.value <= r + 1e-9);
    }
  }
  CHECK(hits > 30);
}

TEST_CASE("coupling_cost on circle certificates stays within the radius") {
  Space ci = Space::circle();
  SplitMix64 rng(34);
  int hits = 0;
  for (int it = 0; it < 40; ++it) {
    int n = rng.uniform_int(2, 20);
    double r = rng.uniform(0.2, 0.6);
    BallCover cover = sample_cover(ci, n, r, rng);
    CheckOutcome out = check_connected(cover);
    if (out.verdict != Verdict::Disintegrable) continue;
    ++hits;
    WassersteinResult cc = coupling_cost(ci, *out.certificate, 2);
    CHECK(cc.value <= r + 1e-9);
    CHECK(wasserstein_1d(ci, cover.centers, 1).value <= cc.value + 1e-9);
  }
  CHECK(hits > 10);
}

TEST_CASE("wasserstein_matching: examples and oracle agreement") {
  Space in = Space::interval();
  // Single atom versus the median.
  WassersteinResult one = wasserstein_matching(in, pts({0.3}), 1, 1);
  CHECK(one.value == doctest::Approx(0.2).epsilon(1e-12));

  WassersteinResult res = wasserstein_matching(in, pts({0.25, 0.75}), 256, 1);
  CHECK(std::abs(res.value - 0.125) <= 2.0 / 256);

  SplitMix64 rng(35);
  for (int it = 0; it < 12; ++it) {
    int n = 1 << rng.uniform_int(0, 3);
    int m = n * rng.uniform_int(1, 6);
    std::vector<Point> sample;
    for (int i = 0; i < n; ++i) sample.push_back(in.sample(rng));
    for (double p : {1.0, 2.0}) {
      double lib = wasserstein_matching(in, sample, m, p).value;
      double ref = sorted_matching_cost(in, sample, m, p);
      CHECK(lib == doctest::Approx(ref).epsilon(1e-9));
    }
  }

  CHECK_THROWS_AS(wasserstein_matching(in, pts({0.2, 0.6, 0.9}), 256, 1),
                  std::invalid_argument);  // n does not divide m
  CHECK_THROWS_AS(wasserstein_matching(in, pts({0.2}), 1024, 1), std::invalid_argument);
}

TEST_CASE("wasserstein_matching converges to the quantile value") {
  Density d;
  d.comp = {{{0.0, 0.5, 1.6}, {0.5, 1.0, 0.4}}};
  d.lower = 0.4;
  d.upper = 1.6;
  Space in = Space::interval(d);

  // W_p(mu, its own m quantile atoms): the exact discretization slack, which
  // bounds the matching error by the triangle inequality and itself halves.
  auto disc = [&](int m, double p) {
    std::vector<Point> atoms;
    for (int j = 0; j < m; ++j) {
      Point a;
      a.x = in.quantile_in_component(0, (j + 0.5) / m);
      atoms.push_back(a);
    }
    return wasserstein_1d(in, atoms, p).value;
  };
  CHECK(disc(128, 1) <= 0.55 * disc(64, 1));
  CHECK(disc(128, 2) <= 0.60 * disc(64, 2));

  SplitMix64 rng(36);
  for (int it = 0; it < 10; ++it) {
    int n = 4;
    std::vector<Point> sample;
    for (int i = 0; i < n; ++i) sample.push_back(in.sample(rng));
    double exact = wasserstein_1d(in, sample, 1).value;
    for (int m : {64, 128}) {
      double err = std::abs(wasserstein_matching(in, sample, m, 1).value - exact);
      CHECK(err <= disc(m, 1) + 1e-9);
    }
  }
}

TEST_CASE("wasserstein_matching on the uniform square") {
  Space cu = Space::cube(2, false);
  SplitMix64 rng(37);
  std::vector<Point> sample;
  for (int i = 0; i < 4; ++i) sample.push_back(cu.sample(rng));
  WassersteinResult res = wasserstein_matching(cu, sample, 256, 2);
  CHECK(res.value > 0);
  CHECK(res.value < std::sqrt(2.0));
  CHECK_THROWS_AS(wasserstein_matching(cu, sample, 200, 2), std::invalid_argument);
}

TEST_CASE("cube matching stays below any certificate coupling") {
  Space cu = Space::cube(2, true);
  SplitMix64 rng(38);
  int hits = 0;
  while (hits < 8) {
    std::vector<Point> sample;
    for (int i = 0; i < 4; ++i) sample.push_back(cu.sample(rng));
    BallCover cover = make_cover(cu, sample, rng.uniform(0.5, 0.9));
    CheckOutcome out = check_sandwich(cover, 0.25, 3);
    if (out.verdict != Verdict::Disintegrable) continue;
    ++hits;
    for (double p : {1.0, 2.0}) {
      WassersteinResult cc = coupling_cost(cu, *out.certificate, p);
      WassersteinResult wm = wasserstein_matching(cu, sample, 256, p);
      // The matching approximates W_p from the discretized side, so it cannot
      // exceed the coupling cost by more than the two discretization slacks.
      CHECK(wm.value <= cc.value + cc.error_bound + 2.0 / 16 + 1e-9);
    }
  }
}
