#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covercheck/feasibility.hpp"

using namespace covercheck;

namespace {

Point pt(double x) {
  Point p;
  p.x = x;
  return p;
}

BallCover cover_of(const Space& s, std::vector<double> xs, double r) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back(pt(x));
  return make_cover(s, std::move(pts), r);
}

// Total mu_i mass inside [lo, hi].
double mass_in(const Certificate& cert, int ball, double lo, double hi) {
  double m = 0;
  for (auto [c, v] : cert.mu[ball]) {
    const Cell& cell = cert.cells[c];
    if (cell.lo[0] >= lo - 1e-12 && cell.hi[0] <= hi + 1e-12) m += v;
  }
  return m;
}

}  // namespace

TEST_CASE("construct_edf: symmetric split") {
  Space in = Space::interval();
  BallCover cover = cover_of(in, {0.25, 0.75}, 0.25);
  Certificate cert = construct_edf(cover);
  CHECK(mass_in(cert, 0, 0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mass_in(cert, 1, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(validate_certificate(in, cert).pass);
}

TEST_CASE("construct_edf: earliest deadline takes the overlap") {
  // Balls [0, 0.6] and [0.2, 1]: the left ball must finish by 0.5.
  Space in = Space::interval();
  BallCover cover = cover_of(in, {0.2, 0.6}, 0.4);
  Certificate cert = construct_edf(cover);
  CHECK(mass_in(cert, 0, 0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mass_in(cert, 1, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(validate_certificate(in, cert).pass);
}

TEST_CASE("construct_edf: infeasible input throws with diagnostics") {
  Space in = Space::interval();
  BallCover cover = cover_of(in, {0.1, 0.2}, 0.25);
  CHECK_THROWS_AS(construct_edf(cover), std::logic_error);
}

TEST_CASE("construct_edf on nonuniform densities") {
  Density d;
  d.comp = {{{0.0, 0.25, 2.0}, {0.25, 0.75, 0.5}, {0.75, 1.0, 1.0}}};
  d.lower = 0.5;
  d.upper = 2.0;
  Space in = Space::interval(d);
  SplitMix64 rng(21);
  int feasible = 0;
  for (int it = 0; it < 200; ++it) {
    int n = rng.uniform_int(2, 30);
    double r = rng.uniform(0.1, 0.6);
    BallCover cover = sample_cover(in, n, r, rng);
    CheckOutcome out = check_connected(cover);
    if (out.verdict != Verdict::Disintegrable) continue;
    ++feasible;
    ValidationReport rep = validate_certificate(in, *out.certificate);
    CHECK(rep.pass);
  }
  CHECK(feasible > 50);
}

TEST_CASE("decompose_flow: perfect matching gives per-cell point measures") {
  Space in = Space::interval();
  BallCover cover = cover_of(in, {0.25, 0.75}, 0.25);
  Arrangement arr = build_arrangement(cover);
  FlowNetwork net;
  net.n_cells = static_cast<int>(arr.cells.size());
  net.n_balls = 2;
  net.cell_balls = arr.cell_balls;
  for (const auto& c : arr.cells) net.cell_mass.push_back(c.mass);
  MaxFlowResult flow = max_flow(net);
  REQUIRE(flow.deficit() <= 1e-12);
  Certificate cert = decompose_flow(net, flow, arr.cells, cover);
  ValidationReport rep = validate_certificate(in, cert);
  CHECK(rep.pass);
  CHECK(mass_in(cert, 0, 0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decompose_flow: unsaturated flow is rejected") {
  Space in = Space::interval();
  BallCover cover = cover_of(in, {0.1, 0.2}, 0.25);
  Arrangement arr = build_arrangement(cover);
  FlowNetwork net;
  net.n_cells = static_cast<int>(arr.cells.size());
  net.n_balls = 2;
  net.cell_balls = arr.cell_balls;
  for (const auto& c : arr.cells) net.cell_mass.push_back(c.mass);
  MaxFlowResult flow = max_flow(net);
  REQUIRE(flow.deficit() > kMassTol);
  CHECK_THROWS_AS(decompose_flow(net, flow, arr.cells, cover), std::logic_error);
}

TEST_CASE("validate_certificate: mutations raise the matching flag") {
  Space in = Space::interval();
  SplitMix64 rng(22);
  for (int it = 0; it < 100; ++it) {
    int n = rng.uniform_int(2, 12);
    double r = rng.uniform(0.25, 0.6);
    BallCover cover = sample_cover(in, n, r, rng);
    CheckOutcome out = check_connected(cover);
    if (out.verdict != Verdict::Disintegrable) continue;
    Certificate cert = *out.certificate;
    REQUIRE(validate_certificate(in, cert).pass);

    // Support violation: drag one loaded cell outside its ball.
    Certificate moved = cert;
    int ball = -1;
    for (int i = 0; i < n && ball < 0; ++i)
      if (!moved.mu[i].empty()) ball = i;
    REQUIRE(ball >= 0);
    Cell far;
    far.component = 0;
    double cx = moved.centers[ball].x;
    double spot = cx < 0.5 ? 1.0 : 0.0;  // far end of the interval
    if (std::abs(spot - cx) > r + 0.02) {
      far.lo = {spot == 0.0 ? 0.0 : spot - 0.01};
      far.hi = {spot == 0.0 ? 0.01 : spot};
      far.mass = in.measure_interval(0, far.lo[0], far.hi[0]);
      moved.cells.push_back(far);
      moved.mu[ball][0].first = static_cast<int>(moved.cells.size()) - 1;
      ValidationReport rep = validate_certificate(in, moved);
      CHECK_FALSE(rep.pass);
      CHECK(rep.support_flag);
    }

    // Mass deficit: rescale one component measure.
    Certificate scaled = cert;
    for (auto& [c, m] : scaled.mu[ball]) m *= 0.99;
    ValidationReport rep2 = validate_certificate(in, scaled);
    CHECK_FALSE(rep2.pass);
    CHECK(rep2.mass_flag);
  }
}

TEST_CASE("edf and flow certificates both validate on the same instance") {
  Space in = Space::interval();
  SplitMix64 rng(23);
  int hits = 0;
  for (int it = 0; it < 60; ++it) {
    int n = rng.uniform_int(2, 16);
    double r = rng.uniform(0.2, 0.5);
    BallCover cover = sample_cover(in, n, r, rng);
    if (check_connected(cover).verdict != Verdict::Disintegrable) continue;
    ++hits;
    Certificate edf = construct_edf(cover);
    CheckOutcome arr = check_arrangement(cover);
    REQUIRE(arr.verdict == Verdict::Disintegrable);
    CHECK(validate_certificate(in, edf).pass);
    CHECK(validate_certificate(in, *arr.certificate).pass);
  }
  CHECK(hits > 20);
}

TEST_CASE("certificate digest is stable and content-sensitive") {
  Space in = Space::interval();
  BallCover cover = cover_of(in, {0.25, 0.75}, 0.25);
  Certificate a = construct_edf(cover);
  Certificate b = construct_edf(cover);
  CHECK(certificate_digest(a) == certificate_digest(b));
  b.mu[0][0].second += 1e-6;
  CHECK(certificate_digest(a) != certificate_digest(b));
}
