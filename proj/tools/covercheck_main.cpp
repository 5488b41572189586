// covercheck: decide, construct and measure disintegrations of a measure
// along random ball covers, and check the associated approximation bounds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covercheck/bounds.hpp"
#include "covercheck/cover.hpp"
#include "covercheck/errors.hpp"
#include "covercheck/experiments.hpp"
#include "covercheck/feasibility.hpp"
#include "covercheck/space_json.hpp"
#include "covercheck/transport.hpp"

using namespace covercheck;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAssert = 3;

std::vector<long> parse_long_list(const std::string& csv) {
  std::vector<long> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write to " + path);
  out << text;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json witness_to_json(const SubsetWitness& w) {
  json j;
  j["subset"] = w.subset;
  j["union_mass"] = w.union_mass;
  j["required_mass"] = w.required_mass;
  return j;
}

json certificate_to_json(const Space& space, const Certificate& cert) {
  json j;
  j["n"] = cert.n();
  j["radius"] = cert.radius;
  json cells = json::array();
  for (const auto& cell : cert.cells) {
    json c;
    c["component"] = cell.component;
    c["lo"] = cell.lo;
    c["hi"] = cell.hi;
    c["mass"] = cell.mass;
    cells.push_back(c);
  }
  j["cells"] = cells;
  json mu = json::array();
  for (const auto& comp : cert.mu) {
    json list = json::array();
    for (const auto& [c, m] : comp) list.push_back({c, m});
    mu.push_back(list);
  }
  j["components"] = mu;
  j["digest"] = certificate_digest(cert);
  j["valid"] = validate_certificate(space, cert).pass;
  return j;
}

// ---- check ------------------------------------------------------------

struct CheckArgs {
  std::string space_file, mode = "auto", emit_cert, out;
  int n = 0;
  double r = 0;
  std::uint64_t seed = 0;
  double h0 = 0.25;
  int refinements = 3;
  bool assert_mode = false, timings = false;
};

int run_check_cmd(const CheckArgs& a) {
  Space space = load_space_file(a.space_file);
  auto t0 = std::chrono::steady_clock::now();
  SplitMix64 rng = SplitMix64::keyed(a.seed, 0, 0);
  BallCover cover = sample_cover(space, a.n, a.r, rng);
  auto t1 = std::chrono::steady_clock::now();
  CheckParams params;
  params.sandwich_h0 = a.h0;
  params.sandwich_refinements = a.refinements;
  CheckOutcome outcome = run_check(cover, parse_check_mode(a.mode), params);
  auto t2 = std::chrono::steady_clock::now();

  json j;
  j["outcome"] = to_string(outcome.verdict);
  j["n"] = a.n;
  j["r"] = a.r;
  j["seed"] = a.seed;
  j["mode"] = a.mode;
  if (outcome.witness) j["witness"] = witness_to_json(*outcome.witness);
  if (outcome.certificate)
    j["certificate_digest"] = certificate_digest(*outcome.certificate);
  if (outcome.verdict == Verdict::Inconclusive) {
    j["gap"] = {{"inner_deficit", outcome.gap.inner_deficit},
                {"outer_slack", outcome.gap.outer_slack},
                {"grid_h", outcome.gap.grid_h}};
  }
  if (a.timings) {
    j["timings"] = {
        {"sample_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()},
        {"check_ms", std::chrono::duration<double, std::milli>(t2 - t1).count()}};
  }
  write_text(a.out, j.dump(2) + "\n");

  if (!a.emit_cert.empty() && outcome.certificate) {
    std::ofstream out(a.emit_cert);
    out << certificate_to_json(space, *outcome.certificate).dump(2) << "\n";
  }
  if (a.assert_mode && outcome.verdict != Verdict::Disintegrable) return kExitAssert;
  return kExitOk;
}

// ---- mc ---------------------------------------------------------------

int run_mc_cmd(const std::string& config_path, const std::string& out_csv,
               const std::string& out_json, bool assert_mode, bool timings) {
  ExperimentConfig cfg = load_config_file(config_path);
  std::vector<TrialTally> tallies = run_mc(cfg);

  std::ostringstream csv;
  if (timings) {
    write_tallies_csv(csv, tallies);
  } else {
    // Timings are the one nondeterministic column; left blank by default so
    // identical (config, seed) runs produce byte-identical reports.
    csv << "family,n,r,trials,failures,inconclusive,rate_hat,ci_upper,eps_n,"
           "r_formula,seconds\n";
    for (const auto& t : tallies) {
      csv << t.family << ',' << t.n << ',' << fmt(t.r) << ',' << t.trials << ','
          << t.failures << ',' << t.inconclusive << ',' << fmt(t.rate_hat) << ','
          << fmt(t.ci_upper) << ',' << fmt(t.eps_n) << ',' << fmt(t.r_formula)
          << ",\n";
    }
  }
  write_text(out_csv, csv.str());
  if (!out_json.empty()) {
    if (!timings)
      for (auto& t : tallies) t.seconds = 0;
    write_text(out_json, tallies_to_json(tallies) + "\n");
  }

  if (assert_mode) {
    for (const auto& t : tallies) {
      double lower = clopper_pearson_lower(t.trials, t.failures + t.inconclusive);
      if (lower > t.eps_n) {
        std::cerr << "assertion failed: n=" << t.n << " failure-rate lower bound "
                  << lower << " exceeds eps_n=" << t.eps_n << "\n";
        return kExitAssert;
      }
    }
  }
  return kExitOk;
}

// ---- rate -------------------------------------------------------------

int run_rate_cmd(const std::string& family, double alpha, double c, int dim, int edges,
                 std::optional<double> p, const std::string& n_grid,
                 const std::string& out) {
  RateParams params;
  if (family == "interval") params.family = SpaceKind::Interval;
  else if (family == "circle") params.family = SpaceKind::Circle;
  else if (family == "graph") params.family = SpaceKind::Graph;
  else if (family == "cube-linf") params.family = SpaceKind::CubeLinf;
  else if (family == "cube-l2") params.family = SpaceKind::CubeL2;
  else throw std::invalid_argument("unknown family: " + family);
  params.alpha = alpha;
  params.c = c;
  params.dim = dim;
  params.edge_count = edges;
  if (p) params.p = *p;

  std::ostringstream csv;
  csv << "family,n,r_n,eps_n" << (p ? ",best_known\n" : "\n");
  for (long n : parse_long_list(n_grid)) {
    csv << family << ',' << n << ',' << fmt(rate_r(params, n)) << ','
        << fmt(rate_eps(params, n));
    if (p) csv << ',' << fmt(rate_best_known(params, n));
    csv << "\n";
  }
  write_text(out, csv.str());
  return kExitOk;
}

// ---- wasserstein --------------------------------------------------------

int run_wasserstein_cmd(const std::string& space_file, int n, std::uint64_t seed,
                        const std::string& p_list, int trials, double alpha,
                        double r_mult, int m, const std::string& out,
                        bool assert_mode) {
  Space space = load_space_file(space_file);
  RateParams params = rate_params_for(space, alpha);
  double r_n = r_mult * rate_r(params, n);
  std::vector<double> ps = parse_double_list(p_list);

  std::ostringstream csv;
  csv << "trial,p,method,value,r_n,bound_ok\n";
  bool all_ok = true;
  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 rng = SplitMix64::keyed(seed, 0, trial);
    BallCover cover = sample_cover(space, n, r_n, rng);
    CheckOutcome outcome = run_check(cover, CheckMode::Auto);
    const bool feasible = outcome.verdict == Verdict::Disintegrable;
    for (double p : ps) {
      WassersteinResult wq = wasserstein_1d(space, cover.centers, p);
      bool ok = !feasible || wq.value <= r_n + 1e-9;
      all_ok = all_ok && ok;
      csv << trial << ',' << fmt(p) << ",quantile_exact," << fmt(wq.value) << ','
          << fmt(r_n) << ',' << (ok ? 1 : 0) << "\n";
      if (feasible) {
        WassersteinResult cc = coupling_cost(space, *outcome.certificate, p);
        bool cok = cc.value <= r_n + cc.error_bound + 1e-9;
        all_ok = all_ok && cok;
        csv << trial << ',' << fmt(p) << ",certificate_upper," << fmt(cc.value) << ','
            << fmt(r_n) << ',' << (cok ? 1 : 0) << "\n";
      }
      if (m > 0) {
        WassersteinResult wm = wasserstein_matching(space, cover.centers, m, p);
        csv << trial << ',' << fmt(p) << ",matching_discrete," << fmt(wm.value) << ','
            << fmt(r_n) << ",1\n";
      }
    }
  }
  write_text(out, csv.str());
  return assert_mode && !all_ok ? kExitAssert : kExitOk;
}

// ---- lipschitz-demo -----------------------------------------------------

int run_lipschitz_demo(std::uint64_t seed, int n, const std::string& out,
                       bool assert_mode) {
  std::ostringstream csv;
  csv << "space,fn,lhs,rhs_avg,rhs_worst,avg_bound_holds\n";
  bool demo_ok = true;

  // Disintegrable side: the interval at its formula radius.
  Space in = Space::interval();
  RateParams params = rate_params_for(in, 1.0);
  double r = rate_r(params, n);
  SplitMix64 rng = SplitMix64::keyed(seed, 0, 0);
  BallCover cover = sample_cover(in, n, r, rng);
  CheckOutcome outcome = check_connected(cover);
  if (outcome.verdict == Verdict::Disintegrable) {
    double w1 = wasserstein_1d(in, cover.centers, 1).value;
    std::vector<std::pair<std::string, TestFn>> fns;
    fns.push_back({"constant", make_constant(1.0)});
    fns.push_back({"spike", make_spike(in, cover.centers, 100.0, 0.25)});
    for (int k = 0; k < 3; ++k)
      fns.push_back({"pwl" + std::to_string(k), random_piecewise_linear(in, rng, 16)});
    for (const auto& [name, f] : fns) {
      AvgCaseGap g = avg_case_gap(in, *outcome.certificate, f, w1);
      csv << "interval," << name << ',' << fmt(g.lhs) << ',' << fmt(g.rhs_avg) << ','
          << fmt(g.rhs_worst) << ',' << (g.bound_holds ? 1 : 0) << "\n";
      demo_ok = demo_ok && g.bound_holds;
    }
  } else {
    demo_ok = false;
  }

  // Failure side: the split interval with the scaled component indicator.
  Space ti = Space::two_interval(M_SQRT1_2);
  SplitMix64 rng2 = SplitMix64::keyed(seed, 1, 0);
  std::vector<Point> sample;
  for (int i = 0; i < n; ++i) sample.push_back(ti.sample(rng2));
  TestFn ind = make_component_indicator(static_cast<double>(n));
  AvgCaseGap g = avg_case_gap(ti, sample, 0.25, ind);
  csv << "two-interval,component_indicator," << fmt(g.lhs) << ',' << fmt(g.rhs_avg)
      << ',' << fmt(g.rhs_worst) << ',' << (g.bound_holds ? 1 : 0) << "\n";
  demo_ok = demo_ok && !g.bound_holds;  // the bound must fail here

  write_text(out, csv.str());
  return assert_mode && !demo_ok ? kExitAssert : kExitOk;
}

// ---- counterexample ------------------------------------------------------

int run_counterexample(std::uint64_t seed, const std::string& n_list, int trials,
                       double r, double q, const std::string& out, bool assert_mode) {
  Space space = Space::two_interval(q);
  std::ostringstream csv;
  csv << "n,r,trials,not_disintegrable,witness_verified\n";
  bool all = true;
  std::vector<long> ns = parse_long_list(n_list);
  for (std::size_t cell = 0; cell < ns.size(); ++cell) {
    long n = ns[cell];
    int bad = 0, verified = 0;
    for (int trial = 0; trial < trials; ++trial) {
      SplitMix64 rng = SplitMix64::keyed(seed, cell, trial);
      BallCover cover = sample_cover(space, static_cast<int>(n), r, rng);
      CheckOutcome outcome = check_arrangement(cover);
      if (outcome.verdict != Verdict::NotDisintegrable) continue;
      ++bad;
      double um = space.union_measure_traces(cover.traces, outcome.witness->subset);
      if (um < outcome.witness->required_mass - kMassTol) ++verified;
    }
    csv << n << ',' << fmt(r) << ',' << trials << ',' << bad << ',' << verified << "\n";
    all = all && bad == trials && verified == trials;
  }
  write_text(out, csv.str());
  std::cerr << (all ? "counterexample: 100% refuted with verified witnesses\n"
                    : "counterexample: some trials were not refuted\n");
  return assert_mode && !all ? kExitAssert : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"disintegration checks for random ball covers"};
  app.require_subcommand(1);

  CheckArgs ca;
  CLI::App* check = app.add_subcommand("check", "decide one sampled cover");
  check->add_option("--space", ca.space_file, "space description JSON")->required();
  check->add_option("--n", ca.n, "number of sampled centers")->required();
  check->add_option("--r", ca.r, "ball radius")->required();
  check->add_option("--seed", ca.seed, "PRNG seed")->required();
  check->add_option("--mode", ca.mode, "connected|arrangement|sandwich|brute|auto");
  check->add_option("--h0", ca.h0, "sandwich initial grid step");
  check->add_option("--refinements", ca.refinements, "sandwich refinement count");
  check->add_option("--emit-cert", ca.emit_cert, "write the certificate JSON here");
  check->add_option("--out", ca.out, "write the verdict JSON here (default stdout)");
  check->add_flag("--assert", ca.assert_mode, "exit 3 unless disintegrable");
  check->add_flag("--timings", ca.timings, "include wall-clock timings in the verdict");

  std::string mc_config, mc_out, mc_out_json;
  bool mc_assert = false, mc_timings = false;
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo failure-rate estimation");
  mc->add_option("--config", mc_config, "experiment config JSON")->required();
  mc->add_option("--out", mc_out, "CSV report path (default stdout)");
  mc->add_option("--out-json", mc_out_json, "JSON report path");
  mc->add_flag("--assert", mc_assert, "exit 3 when a cell refutes eps_n");
  mc->add_flag("--timings", mc_timings, "fill the seconds column");

  std::string rt_family = "interval", rt_ngrid = "100,1000,10000", rt_out;
  double rt_alpha = 1.0, rt_c = 1.0;
  int rt_dim = 1, rt_edges = 1;
  double rt_p = -1;
  CLI::App* rate = app.add_subcommand("rate", "radius / failure-rate formulas");
  rate->add_option("--family", rt_family, "interval|circle|graph|cube-linf|cube-l2");
  rate->add_option("--alpha", rt_alpha, "failure exponent");
  rate->add_option("--c", rt_c, "density lower bound (vs uniform)");
  rate->add_option("--dim", rt_dim, "cube dimension");
  rate->add_option("--edges", rt_edges, "graph edge count");
  rate->add_option("--p", rt_p, "adds the literature comparison column");
  rate->add_option("--n-grid", rt_ngrid, "comma-separated n values");
  rate->add_option("--out", rt_out, "CSV path (default stdout)");

  std::string ws_space, ws_p = "1,2,4", ws_out;
  int ws_n = 100, ws_trials = 1, ws_m = 0;
  std::uint64_t ws_seed = 0;
  double ws_alpha = 1.0, ws_rmult = 1.0;
  bool ws_assert = false;
  CLI::App* ws = app.add_subcommand("wasserstein", "distance to the empirical measure");
  ws->add_option("--space", ws_space, "space description JSON")->required();
  ws->add_option("--n", ws_n, "sample size")->required();
  ws->add_option("--seed", ws_seed, "PRNG seed")->required();
  ws->add_option("--p", ws_p, "comma-separated orders");
  ws->add_option("--trials", ws_trials, "number of samples");
  ws->add_option("--alpha", ws_alpha, "failure exponent for r_n");
  ws->add_option("--r-mult", ws_rmult, "radius multiplier on the formula");
  ws->add_option("--m", ws_m, "matching validator resolution (0 = off)");
  ws->add_option("--out", ws_out, "CSV path (default stdout)");
  ws->add_flag("--assert", ws_assert, "exit 3 on a bound violation");

  std::uint64_t ld_seed = 0;
  int ld_n = 500;
  std::string ld_out;
  bool ld_assert = false;
  CLI::App* ld =
      app.add_subcommand("lipschitz-demo", "average-case versus worst-case bounds");
  ld->add_option("--seed", ld_seed, "PRNG seed")->required();
  ld->add_option("--n", ld_n, "sample size");
  ld->add_option("--out", ld_out, "CSV path (default stdout)");
  ld->add_flag("--assert", ld_assert, "exit 3 when the demo does not separate");

  std::uint64_t ce_seed = 0;
  std::string ce_nlist = "5,50,500", ce_out;
  int ce_trials = 100;
  double ce_r = 0.25, ce_q = M_SQRT1_2;
  bool ce_assert = false;
  CLI::App* ce =
      app.add_subcommand("counterexample", "split-interval non-disintegrability run");
  ce->add_option("--seed", ce_seed, "PRNG seed")->required();
  ce->add_option("--n-list", ce_nlist, "comma-separated sample sizes");
  ce->add_option("--trials", ce_trials, "trials per n");
  ce->add_option("--r", ce_r, "ball radius (must stay below 1-q)");
  ce->add_option("--q", ce_q, "component split parameter");
  ce->add_option("--out", ce_out, "CSV path (default stdout)");
  ce->add_flag("--assert", ce_assert, "exit 3 unless every trial is refuted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (check->parsed()) return run_check_cmd(ca);
    if (mc->parsed())
      return run_mc_cmd(mc_config, mc_out, mc_out_json, mc_assert, mc_timings);
    if (rate->parsed())
      return run_rate_cmd(rt_family, rt_alpha, rt_c, rt_dim, rt_edges,
                          rt_p > 0 ? std::optional<double>(rt_p) : std::nullopt,
                          rt_ngrid, rt_out);
    if (ws->parsed())
      return run_wasserstein_cmd(ws_space, ws_n, ws_seed, ws_p, ws_trials, ws_alpha,
                                 ws_rmult, ws_m, ws_out, ws_assert);
    if (ld->parsed()) return run_lipschitz_demo(ld_seed, ld_n, ld_out, ld_assert);
    if (ce->parsed())
      return run_counterexample(ce_seed, ce_nlist, ce_trials, ce_r, ce_q, ce_out,
                                ce_assert);
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
