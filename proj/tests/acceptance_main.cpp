// Acceptance suite: runs every shipped correctness criterion end to end and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "support/bound_oracles.hpp"
#include "support/stats.hpp"
#include "tcsim/bounds.hpp"
#include "tcsim/functionals.hpp"
#include "tcsim/harness.hpp"
#include "tcsim/samplers.hpp"
#include "tcsim/stein.hpp"
#include "tcsim/time_change.hpp"

using namespace tcsim;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const TimeChange kId = TimeChange::identity();

// 1. Formula fidelity against the 50-digit oracles, relative 1e-10.
Outcome criterion_formula_fidelity() {
  Outcome out;
  const double tol = 1e-10;
  double worst = 0.0;
  {
    const struct { long n; double s1, m3, gm; } grid[] = {
        {10, 1, 1, 1},    {100, 0.5, 1, 1}, {100, 1, 1.7357588823428847, 4},
        {1000, 2, 1.5957691216057308, 1},   {10000, 1, 1, 1},
        {100000, 0.25, 3, 2}, {1000000, 1, 1.2, 1}, {64, 1, 1, 0.5},
        {4096, 3, 2, 1},  {33, 0.7, 1.1, 2.5}};
    for (const auto& p : grid)
      worst = std::max(worst, hp::rel_err(bound_thm1(p.n, p.s1, p.m3, p.gm).total,
                                          oracle::thm1(p.n, p.s1, p.m3, p.gm)));
  }
  {
    const struct { long n; double S1, Sn1, d, gm; } grid[] = {
        {10000, 1, 1, 1e-2, 1}, {100, 1, 1, 0, 1},      {100, 0.5, 0.55, 0.05, 2},
        {1000, 2, 1.9, 0.1, 1}, {50, 1, 1.25, 0.25, 1}, {100000, 0.125, 0.125, 1e-4, 4},
        {1000000, 1, 1, 1e-6, 1}, {256, 3, 2.5, 0.5, 0.5}, {4096, 0.25, 0.2, 0.01, 1},
        {77, 1.3, 1.1, 0.2, 3}};
    for (const auto& p : grid)
      worst = std::max(worst, hp::rel_err(bound_thm2(p.n, p.S1, p.Sn1, p.d, p.gm).total,
                                          oracle::thm2(p.n, p.S1, p.Sn1, p.d, p.gm)));
  }
  {
    const struct { long n; double v1, v2, gm; } grid[] = {
        {100, 1, 1, 1},  {100, 0.5, 2, 1}, {1000, 2, 1, 2},   {10000, 0, 0, 1},
        {10, 3, 0.1, 1}, {100000, 1, 1, 4}, {64, 0.25, 0.75, 1}, {4096, 1.5, 2.5, 1},
        {33, 4, 4, 0.5}, {1000000, 1, 1, 1}};
    for (const auto& p : grid)
      worst = std::max(worst, hp::rel_err(bound_thm3(p.n, p.v1, p.v2, p.gm, false).total,
                                          oracle::thm3_full(p.n, p.v1, p.v2, p.gm)));
    const struct { long n; double v1, v2, gm; } sgrid[] = {
        {100, 1, 1, 1},   {1000, 2, 3, 1}, {50, 1.5, 1, 2},   {10000, 1, 4, 1},
        {64, 2.5, 1.5, 1}, {100000, 1, 1, 0.5}, {333, 3, 2, 1}, {1000000, 1, 2, 1},
        {12, 1, 1, 1},    {2048, 4, 1, 3}};
    for (const auto& p : sgrid)
      worst = std::max(worst, hp::rel_err(bound_thm3(p.n, p.v1, p.v2, p.gm, true).total,
                                          oracle::thm3_simplified(p.n, p.v1, p.v2, p.gm)));
  }
  {
    const struct { long n; double s1; } grid[] = {{10, 1},  {100, 1},    {1000, 0.5},
                                                  {10000, 2}, {256, 1},  {64, 0.25},
                                                  {100000, 1}, {4096, 1.5}, {33, 3},
                                                  {1000000, 1}};
    for (const auto& p : grid) {
      Big ref[3];
      oracle::bm_modulus(p.n, p.s1, ref);
      const BmModulus m = bm_modulus_bounds(p.n, p.s1);
      worst = std::max({worst, hp::rel_err(m.k1, ref[0]), hp::rel_err(m.k2, ref[1]),
                        hp::rel_err(m.k3, ref[2])});
    }
    for (double s1 : {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0})
      worst = std::max(worst, hp::rel_err(doob_l3_bound(s1), oracle::doob(s1)));
  }
  out.detail << "worst relative error " << fmt(worst);
  out.require(worst < tol, "oracle mismatch above 1e-10");
  return out;
}

// 2. Series constant 1 + 2/e to 1e-10 plus a 1e6-draw MC cross-check.
Outcome criterion_poisson_constant() {
  Outcome out;
  const double v = poisson_abs3_moment();
  const double target = 1.0 + 2.0 / std::exp(1.0);
  out.detail << "series " << fmt(v);
  out.require(std::fabs(v - target) < 1e-10, "series misses 1 + 2e^-1");

  Rng rng(101, "acc2", 0);
  std::vector<double> xs;
  xs.reserve(1000000);
  for (int i = 0; i < 1000000; ++i) {
    const double d = static_cast<double>(rng.poisson(1.0)) - 1.0;
    xs.push_back(std::fabs(d * d * d));
  }
  const auto m = teststat::moments(xs);
  out.detail << ", MC " << fmt(m.mean) << " +- " << fmt(m.se_mean);
  out.require(std::fabs(m.mean - v) <= 3.0 * m.se_mean, "MC cross-check outside 3 SE");
  return out;
}

// 3. Holding-time probability: monotone on the lambda grid, >= 0.99 at 50,
//    simplex-spacings MC agreement at lambda = 10.
Outcome criterion_holding_probability() {
  Outcome out;
  double prev = 0.0;
  for (double lam : {2.0, 5.0, 10.0, 20.0, 50.0}) {
    const double v = min_holding_prob(lam);
    out.require(v > prev, "not monotone at lambda " + fmt(lam));
    prev = v;
  }
  const double at50 = min_holding_prob(50.0);
  out.detail << "value(50) = " << fmt(at50);
  out.require(at50 >= 0.99, "value at lambda = 50 is " + fmt(at50) +
                                " (the printed sum tracks exp(-1/lambda), crossing 0.99 "
                                "only near lambda ~ 110)");

  const double lam = 10.0;
  const double r = std::pow(lam, -3.0);
  Rng rng(102, "acc3", 0);
  const int trials = 100000;
  int hits = 0;
  std::vector<double> us;
  for (int t = 0; t < trials; ++t) {
    const std::int64_t k = 1 + rng.poisson(lam);
    us.resize(static_cast<std::size_t>(k));
    for (auto& u : us) u = rng.uniform();
    std::sort(us.begin(), us.end());
    double mn = us[0];
    for (std::size_t i = 1; i < us.size(); ++i) mn = std::min(mn, us[i] - us[i - 1]);
    if (mn >= r) ++hits;
  }
  const double p = static_cast<double>(hits) / trials;
  const double se = std::sqrt(p * (1.0 - p) / trials);
  out.detail << ", MC(10) " << fmt(p) << " vs " << fmt(min_holding_prob(lam));
  out.require(std::fabs(p - min_holding_prob(lam)) <= 3.0 * se, "MC outside 3 SE");
  return out;
}

// 4. Stationarity of the generator under the comparison law at n = 8.
Outcome criterion_stein_stationarity() {
  Outcome out;
  int lane = 0;
  for (const char* id : {"sin_avg", "cos_eval@0.5", "quad_avg"}) {
    const FunctionalSpec g = FunctionalSpec::parse(id);
    const MCValue r = stein_identity_residual(
        g, "discretized_bm", 8, kId, 100000,
        {103, "acc4", static_cast<std::uint64_t>(lane++)});
    out.detail << (lane > 1 ? ", " : "") << id << " " << fmt(r.value) << " ("
               << fmt(r.se) << ")";
    out.require(std::fabs(r.value) <= 3.0 * r.se, std::string(id) + " residual > 3 SE");
  }
  return out;
}

// 5. Stein solutions match the two analytic forms within reported error.
Outcome criterion_stein_solution() {
  Outcome out;
  Rng rng(104, "acc5.w", 0);
  SteinSolveOptions opt;
  opt.samples = 20000;
  const FunctionalSpec lin = FunctionalSpec::parse("lin_avg");
  const FunctionalSpec quad = FunctionalSpec::parse("quad_avg");
  const double v = GaussianStatistic::build(lin.inner(), 8, kId).variance;
  int failures = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const GridPath w = teststat::random_path(rng, 8, 1.0, PathKind::PiecewiseConstant);
    const double lw = integral(w);
    const SteinValue sl =
        stein_solution(lin, w, 8, kId, opt, {104, "acc5.l", static_cast<std::uint64_t>(rep)});
    if (std::fabs(sl.value + lw) > sl.error) ++failures;
    const SteinValue sq =
        stein_solution(quad, w, 8, kId, opt, {104, "acc5.q", static_cast<std::uint64_t>(rep)});
    if (std::fabs(sq.value + (lw * lw - v) / 2.0) > sq.error) ++failures;
  }
  out.detail << failures << " of 40 reproductions outside reported error";
  out.require(failures == 0, "analytic solution not reproduced");
  return out;
}

// 6. Lookdown conditional moments and the jump-martingale R-integral identities.
Outcome criterion_coupling_moments() {
  Outcome out;
  const GridPath x = sim_wright_fisher({1, 1.0, 1.0, 0.5}, 1e-3, {105, "acc6.x", 0});
  const auto grid = uniform_grid(4);
  for (long n : {16L, 256L}) {
    std::vector<std::vector<double>> draws(grid.size());
    for (int i = 0; i < 10000; ++i) {
      const auto vals =
          lookdown_marginals(x, n, grid, {105, "acc6.ld", static_cast<std::uint64_t>(i)});
      for (std::size_t j = 0; j < grid.size(); ++j) draws[j].push_back(vals[j]);
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double p = x(grid[j]);
      const auto m = teststat::moments(draws[j]);
      out.require(std::fabs(m.mean - p) <= 3.0 * m.se_mean,
                  "lookdown mean off at n=" + std::to_string(n));
      out.require(std::fabs(m.var - p * (1.0 - p) / static_cast<double>(n)) <=
                      3.0 * m.se_var + 1e-12,
                  "lookdown variance off at n=" + std::to_string(n));
    }
  }

  const ModelParams mp{32, 1.0, 1.0, 0.5};
  const GridPath xn = sim_moran(mp, {105, "acc6.xn", 0});
  const GridPath r1 = integrated_rate(xn, mp.nu1, mp.nu2, RateKind::R1, mp.n);
  const GridPath rm1 = integrated_rate(xn, mp.nu1, mp.nu2, RateKind::Rm1, mp.n);
  for (double t : {0.5, 1.0}) {
    std::vector<double> vals;
    for (int i = 0; i < 10000; ++i)
      vals.push_back(
          sim_mn_given(xn, mp, {105, "acc6.mn", static_cast<std::uint64_t>(i)})(t));
    const auto m = teststat::moments(vals);
    const double mean_t = 32.0 * (r1(t) - rm1(t));
    const double var_t = r1(t) + rm1(t);
    out.require(std::fabs(m.mean - mean_t) <= 3.0 * m.se_mean,
                "conditional mean off at t=" + fmt(t));
    out.require(std::fabs(m.var - var_t) <= 3.0 * m.se_var,
                "conditional variance off at t=" + fmt(t));
  }
  out.detail << "lookdown n in {16,256} and jump-martingale n=32 moments within 3 SE";
  return out;
}

// 7. Euler scheme mean against the first-moment ODE closed form.
Outcome criterion_moment_ode() {
  Outcome out;
  const double nu1 = 1.0, nu2 = 2.0, x0 = 0.3;
  const double xinf = nu2 / (nu1 + nu2);
  std::vector<double> at5, at10;
  for (int i = 0; i < 10000; ++i) {
    const GridPath x = sim_wright_fisher({1, nu1, nu2, x0}, 1e-3,
                                         {106, "acc7", static_cast<std::uint64_t>(i)});
    at5.push_back(x(0.5));
    at10.push_back(x(1.0));
  }
  const auto m5 = teststat::moments(at5);
  const auto m10 = teststat::moments(at10);
  const double e5 = xinf + (x0 - xinf) * std::exp(-(nu1 + nu2) * 0.5);
  const double e10 = xinf + (x0 - xinf) * std::exp(-(nu1 + nu2) * 1.0);
  out.detail << "t=0.5: " << fmt(m5.mean) << " vs " << fmt(e5) << "; t=1: "
             << fmt(m10.mean) << " vs " << fmt(e10);
  out.require(std::fabs(m5.mean - e5) <= 3.0 * m5.se_mean, "mean off at t=0.5");
  out.require(std::fabs(m10.mean - e10) <= 3.0 * m10.se_mean, "mean off at t=1");
  return out;
}

// 8. Bound domination over the MC sweep plus the printed asymptotic orders.
Outcome criterion_domination_and_rate() {
  Outcome out;
  const FunctionalSpec g = FunctionalSpec::parse("sin_avg");
  KvConfig cfg{{"grid", "256"}};
  SamplerSpec a = SamplerSpec::from_config("scaled_rw:centered_poisson1", cfg);
  SamplerSpec b = SamplerSpec::from_config("time_changed_bm", cfg);
  const auto pts =
      rate_sweep(g, a, b, {64, 256, 1024, 4096}, 10000, Coupling::Independent, 107, 2);
  for (const auto& p : pts) {
    out.require(std::fabs(p.gap.diff) <= p.bound,
                "gap exceeds bound at n=" + std::to_string(p.n));
  }

  std::vector<double> ns, b1, b3;
  for (int k = 2; k <= 6; ++k) {
    const double n = std::pow(10.0, k);
    ns.push_back(n);
    b1.push_back(bound_thm1(static_cast<long>(n), 1.0, poisson_abs3_moment(),
                            g.m_norm_bound())
                     .total);
    b3.push_back(bound_thm3(static_cast<long>(n), 1.0, 1.0, 1.0, false).total);
  }
  const SlopeFit f1 = fit_rate(ns, b1);
  const SlopeFit f3 = fit_rate(ns, b3);
  out.detail << "thm1 slope " << fmt(f1.slope) << ", thm3 slope " << fmt(f3.slope);
  out.require(std::fabs(f1.slope + 0.5) <= 0.05, "thm1 bound slope outside -0.5 +- 0.05");
  out.require(std::fabs(f3.slope + 0.25) <= 0.02,
              "thm3 bound slope outside -0.25 +- 0.02");
  return out;
}

// 9. Byte-identical outputs for every shipped config at 1, 4 and 8 workers.
Outcome criterion_determinism(const std::string& config_dir) {
  Outcome out;
  namespace fs = std::filesystem;
  int checked = 0;
  for (const auto& entry : fs::directory_iterator(config_dir)) {
    if (entry.path().extension() != ".cfg") continue;
    const KvConfig base = parse_kv_text(read_text_file(entry.path().string()));
    const auto it = base.find("subcommand");
    const std::string sub = it == base.end() ? "gap" : it->second;
    std::string ref;
    for (int workers : {1, 4, 8}) {
      KvConfig cfg = base;
      cfg.erase("subcommand");
      cfg["workers"] = std::to_string(workers);
      const RunResult r = run_subcommand(sub, cfg);
      if (workers == 1) {
        ref = r.output;
      } else {
        out.require(r.output == ref, entry.path().filename().string() + " differs at " +
                                         std::to_string(workers) + " workers");
      }
    }
    ++checked;
  }
  out.detail << checked << " configs x {1,4,8} workers";
  out.require(checked >= 3, "expected at least three shipped configs");
  return out;
}

// 10. End-to-end gap between the two martingale constructions under the
//     theorem bound, with a nonincreasing trend inside CI overlap.
Outcome criterion_thm3_end_to_end() {
  Outcome out;
  const FunctionalSpec g = FunctionalSpec::parse("sin_avg");
  KvConfig cfg{{"nu1", "1"}, {"nu2", "1"}, {"x0", "0.5"}, {"dt", "0.001"}};
  SamplerSpec a = SamplerSpec::from_config("mn", cfg);
  SamplerSpec b = SamplerSpec::from_config("m", cfg);
  std::vector<double> gaps, cis;
  for (long n : {16L, 64L, 256L}) {
    a.params.n = n;
    b.params.n = n;
    const GapEstimate gap = estimate_gap(g, a, b, 10000, Coupling::Independent,
                                         108 + static_cast<std::uint64_t>(n), 2);
    const double bound = bound_thm3(n, 1.0, 1.0, g.m_norm_bound(), false).total;
    out.detail << "n=" << n << ": " << fmt(std::fabs(gap.diff)) << " (ci "
               << fmt(gap.ci95) << "); ";
    out.require(std::fabs(gap.diff) <= bound, "gap exceeds bound at n=" + std::to_string(n));
    gaps.push_back(std::fabs(gap.diff));
    cis.push_back(gap.ci95);
  }
  for (std::size_t i = 1; i < gaps.size(); ++i)
    out.require(gaps[i] <= gaps[i - 1] + cis[i] + cis[i - 1],
                "gap trend increases beyond CI overlap");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_dir = "configs";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--configs") == 0) config_dir = argv[i + 1];

  struct Entry {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Entry entries[] = {
      {1, "formula fidelity vs 50-digit oracles", criterion_formula_fidelity},
      {2, "Poisson third-moment constant recovery", criterion_poisson_constant},
      {3, "minimal-holding-time probability", criterion_holding_probability},
      {4, "Stein stationarity of the generator", criterion_stein_stationarity},
      {5, "Stein solution analytic reproduction", criterion_stein_solution},
      {6, "coupling conditional moments", criterion_coupling_moments},
      {7, "Euler first-moment ODE", criterion_moment_ode},
      {8, "bound domination and asymptotic orders", criterion_domination_and_rate},
      {10, "Moran-style vs diffusion-style end-to-end gap", criterion_thm3_end_to_end},
  };

  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o, double secs) {
    std::printf("[%s] criterion %2d: %s — %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id,
                name, o.detail.str().c_str(), secs);
    if (!o.pass) ++failures;
  };

  for (const auto& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = e.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(e.id, e.name, o, secs);
    if (e.id == 8) {
      const auto t9 = std::chrono::steady_clock::now();
      const Outcome o9 = criterion_determinism(config_dir);
      const double s9 =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t9).count();
      report(9, "byte-identical reruns across worker counts", o9, s9);
    }
  }

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
