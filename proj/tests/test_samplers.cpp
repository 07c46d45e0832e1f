#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "support/stats.hpp"
#include "tcsim/bounds.hpp"
#include "tcsim/errors.hpp"
#include "tcsim/samplers.hpp"
#include "tcsim/time_change.hpp"

using namespace tcsim;

namespace {

bool paths_identical(const GridPath& a, const GridPath& b) {
  return a.kind() == b.kind() && a.times() == b.times() && a.values() == b.values();
}

double poisson_pmf(double mu, std::int64_t k) {
  return std::exp(-mu + static_cast<double>(k) * std::log(mu) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

}  // namespace

TEST_CASE("every sampler is bit-deterministic in its stream key") {
  const TimeChange id = TimeChange::identity();
  const StreamKey k{321, "det", 5};
  const ModelParams mp{16, 0.5, 1.5, 0.5};
  const auto grid = uniform_grid(32);
  CHECK(paths_identical(sim_scaled_rw(32, StepDist::CenteredPoisson1, id, k),
                        sim_scaled_rw(32, StepDist::CenteredPoisson1, id, k)));
  CHECK(paths_identical(sim_discretized_bm(32, id, k), sim_discretized_bm(32, id, k)));
  CHECK(paths_identical(sim_time_changed_bm(id, grid, k), sim_time_changed_bm(id, grid, k)));
  CHECK(paths_identical(sim_compensated_poisson(32, id, k),
                        sim_compensated_poisson(32, id, k)));
  CHECK(paths_identical(sim_moran(mp, k), sim_moran(mp, k)));
  CHECK(paths_identical(sim_wright_fisher(mp, 1e-2, k), sim_wright_fisher(mp, 1e-2, k)));
  CHECK(paths_identical(sim_mn(mp, k), sim_mn(mp, k)));
  CHECK(paths_identical(sim_m(mp, 1e-2, k), sim_m(mp, 1e-2, k)));
  CHECK(lookdown_marginals(sim_wright_fisher(mp, 1e-2, k), 16, grid, k) ==
        lookdown_marginals(sim_wright_fisher(mp, 1e-2, k), 16, grid, k));
}

TEST_CASE("scaled random walk: degenerate steps, floor structure, breakpoints") {
  const TimeChange id = TimeChange::identity();
  CHECK(sim_scaled_rw(64, StepDist::Zero, id, {1, "rw", 0}).sup_norm() == 0.0);

  // n = 1: floor(t) jumps only at t = 1.
  const GridPath p1 = sim_scaled_rw(1, StepDist::Rademacher, id, {1, "rw", 1});
  REQUIRE(p1.size() == 2);
  CHECK(p1.times()[0] == 0.0);
  CHECK(p1.times()[1] == 1.0);
  CHECK(p1(0.0) == 0.0);
  CHECK(p1(std::nextafter(1.0, 0.0)) == 0.0);
  CHECK(std::fabs(p1(1.0)) == 1.0);

  // Breakpoints sit at s^{-1}(i/n).
  const TimeChange lin = TimeChange::linear(2.0);
  const GridPath p2 = sim_scaled_rw(4, StepDist::StdNormal, lin, {1, "rw", 2});
  REQUIRE(p2.size() == 9);  // 0 plus the 8 lattice times, last at exactly 1
  for (int i = 1; i <= 8; ++i)
    CHECK(p2.times()[static_cast<std::size_t>(i)] ==
          doctest::Approx(i / 8.0).epsilon(1e-15));
}

TEST_CASE("scaled random walk: Var Y_n(1) = floor(n s(1))/n = 1 at s = identity") {
  const TimeChange id = TimeChange::identity();
  std::vector<double> y1;
  for (int i = 0; i < 100000; ++i)
    y1.push_back(sim_scaled_rw(64, StepDist::Rademacher, id,
                               {2, "rwvar", static_cast<std::uint64_t>(i)})(1.0));
  const auto m = teststat::moments(y1);
  CHECK(std::fabs(m.mean) <= 3.0 * m.se_mean);
  CHECK(std::fabs(m.var - 1.0) <= 3.0 * m.se_var);
}

TEST_CASE("discretized Brownian comparison: marginal variance, Doob moment, increments") {
  const TimeChange id = TimeChange::identity();
  const long n = 16;
  std::vector<double> at3, at7, at1, sup3, inc_a, inc_b;
  for (int i = 0; i < 100000; ++i) {
    const GridPath a = sim_discretized_bm(n, id, {3, "dbm", static_cast<std::uint64_t>(i)});
    at3.push_back(a(0.3));
    at7.push_back(a(0.7));
    at1.push_back(a(1.0));
    const double s = a.sup_norm();
    sup3.push_back(s * s * s);
    inc_a.push_back(a(0.25) - a(0.0));
    inc_b.push_back(a(0.75) - a(0.5));
  }
  auto check_var = [&](std::vector<double>& xs, double t) {
    const auto m = teststat::moments(xs);
    const double target = std::floor(n * t) / static_cast<double>(n);
    CHECK(std::fabs(m.var - target) <= 3.0 * m.se_var);
  };
  check_var(at3, 0.3);
  check_var(at7, 0.7);
  check_var(at1, 1.0);

  const auto msup = teststat::moments(sup3);
  CHECK(msup.mean + 3.0 * msup.se_mean <= doob_l3_bound(1.0));

  const double cov = teststat::covariance(inc_a, inc_b);
  std::vector<double> prod(inc_a.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = inc_a[i] * inc_b[i];
  const auto mp = teststat::moments(prod);
  CHECK(std::fabs(cov) <= 3.0 * mp.se_mean);
}

TEST_CASE("time-changed Brownian motion: variance, covariance, KS normality") {
  const TimeChange s = TimeChange::power(2.0);
  const auto grid = uniform_grid(64);
  std::vector<double> z4, z8, z1;
  for (int i = 0; i < 10000; ++i) {
    const GridPath z =
        sim_time_changed_bm(s, grid, {4, "tcbm", static_cast<std::uint64_t>(i)});
    z4.push_back(z(0.4));
    z8.push_back(z(0.8));
    z1.push_back(z(1.0));
  }
  const auto m4 = teststat::moments(z4);
  CHECK(std::fabs(m4.var - s(0.4)) <= 3.0 * m4.se_var);
  const auto m8 = teststat::moments(z8);
  CHECK(std::fabs(m8.var - s(0.8)) <= 3.0 * m8.se_var);

  // Cov(Z(t), Z(u)) = s(min(t,u)).
  std::vector<double> prod(z4.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = z4[i] * z8[i];
  const auto mprod = teststat::moments(prod);
  CHECK(std::fabs(teststat::covariance(z4, z8) - s(0.4)) <= 3.5 * mprod.se_mean);

  std::vector<double> std1(z1.size());
  for (std::size_t i = 0; i < std1.size(); ++i) std1[i] = z1[i] / std::sqrt(s(1.0));
  CHECK(teststat::ks_statistic_normal(std1) < 1.63 / std::sqrt(10000.0));

  std::vector<double> bad{0.0, 0.5, 0.5, 1.0};
  CHECK_THROWS_AS(sim_time_changed_bm(s, bad, {4, "tcbm", 0}), StructuralError);
}

TEST_CASE("compensated Poisson: zero time change, variance, mean zero") {
  const TimeChange zero = TimeChange::tabulated(GridPath::zero(PathKind::PiecewiseLinear));
  CHECK(sim_compensated_poisson(16, zero, {5, "cp", 0}).sup_norm() == 0.0);

  const TimeChange sn = TimeChange::linear(0.5);
  const long n = 32;
  std::vector<double> y_half, y_full;
  for (int i = 0; i < 40000; ++i) {
    const GridPath y =
        sim_compensated_poisson(n, sn, {5, "cp", static_cast<std::uint64_t>(i)});
    y_half.push_back(y(0.5));
    y_full.push_back(y(1.0));
  }
  const auto mh = teststat::moments(y_half);
  CHECK(std::fabs(mh.mean) <= 3.0 * mh.se_mean);
  CHECK(std::fabs(mh.var - sn(0.5)) <= 3.0 * mh.se_var);
  const auto mf = teststat::moments(y_full);
  CHECK(std::fabs(mf.mean) <= 3.0 * mf.se_mean);
  CHECK(std::fabs(mf.var - sn(1.0)) <= 3.0 * mf.se_var);
}

TEST_CASE("compensated Poisson under a curved time change keeps its moments") {
  const TimeChange sn = TimeChange::power(2.0);
  const long n = 64;
  std::vector<double> y_mid, y_full;
  for (int i = 0; i < 20000; ++i) {
    const GridPath y =
        sim_compensated_poisson(n, sn, {55, "cp.pow", static_cast<std::uint64_t>(i)});
    y_mid.push_back(y(0.6));
    y_full.push_back(y(1.0));
  }
  const auto mm = teststat::moments(y_mid);
  CHECK(std::fabs(mm.mean) <= 3.0 * mm.se_mean + 1e-3);  // curved-segment rendering
  CHECK(std::fabs(mm.var - sn(0.6)) <= 3.0 * mm.se_var);
  const auto mf = teststat::moments(y_full);
  CHECK(std::fabs(mf.var - sn(1.0)) <= 3.0 * mf.se_var);
}

TEST_CASE("compensated Poisson: terminal event count passes a chi-square GOF test") {
  const TimeChange id = TimeChange::identity();
  const long n = 8;
  const double mu = static_cast<double>(n) * id.total();
  std::map<std::int64_t, int> counts;
  const int paths = 10000;
  for (int i = 0; i < paths; ++i) {
    const GridPath y =
        sim_compensated_poisson(n, id, {6, "cpgof", static_cast<std::uint64_t>(i)});
    const auto events = static_cast<std::int64_t>(
        std::llround(y(1.0) * std::sqrt(static_cast<double>(n)) + mu));
    ++counts[events];
  }
  // Bins with expected >= 5; everything else merged into one remainder cell.
  std::vector<double> expected;
  std::vector<int> observed;
  double tail_exp = paths;
  int tail_obs = paths;
  for (std::int64_t k = 0; k <= static_cast<std::int64_t>(mu + 10.0 * std::sqrt(mu)); ++k) {
    const double e = paths * poisson_pmf(mu, k);
    if (e < 5.0) continue;
    expected.push_back(e);
    const auto it = counts.find(k);
    observed.push_back(it == counts.end() ? 0 : it->second);
    tail_exp -= e;
    tail_obs -= observed.back();
  }
  if (tail_exp > 0.5) {
    expected.push_back(tail_exp);
    observed.push_back(tail_obs);
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    chi2 += d * d / expected[i];
  }
  boost::math::chi_squared dist(static_cast<double>(expected.size() - 1));
  const double p = 1.0 - boost::math::cdf(dist, chi2);
  CHECK(p > 0.01);
}

TEST_CASE("Moran chain: absorption, first-jump law, martingale mean") {
  CHECK(sim_moran({16, 0.0, 0.0, 0.0}, {7, "moran", 0}).sup_norm() == 0.0);

  // From x0 = 0 with nu2 > 0 only up-moves fire; first jump ~ Exp(n nu2).
  const ModelParams up{32, 5.0, 2.0, 0.0};
  std::vector<double> first;
  for (int i = 0; i < 20000; ++i) {
    const GridPath x = sim_moran(up, {7, "moran.first", static_cast<std::uint64_t>(i)});
    REQUIRE(x.size() >= 2);
    first.push_back(x.times()[1]);  // rate 64: the jump lands before 1 a.s.
  }
  const auto mf = teststat::moments(first);
  CHECK(std::fabs(mf.mean - 1.0 / 64.0) <= 3.0 * mf.se_mean);

  const ModelParams neutral{32, 0.0, 0.0, 0.25};
  std::vector<double> x1;
  for (int i = 0; i < 20000; ++i)
    x1.push_back(sim_moran(neutral, {7, "moran.mart", static_cast<std::uint64_t>(i)})(1.0));
  const auto m1 = teststat::moments(x1);
  CHECK(std::fabs(m1.mean - 0.25) <= 3.0 * m1.se_mean);

  CHECK_THROWS_AS(sim_moran({16, 0.0, 0.0, 0.3}, {7, "moran", 0}), DomainError);
}

TEST_CASE("Wright-Fisher: degenerate corners, martingale, first-moment ODE") {
  for (double x0 : {0.0, 1.0}) {
    const GridPath x = sim_wright_fisher({1, 0.0, 0.0, x0}, 1e-2, {8, "wf", 0});
    for (double t : {0.0, 0.3, 1.0}) CHECK(x(t) == x0);
  }
  CHECK_THROWS_AS(sim_wright_fisher({1, 0.0, 0.0, 0.5}, 0.5, {8, "wf", 0}), ConfigError);
  CHECK_THROWS_AS(sim_wright_fisher({1, 0.0, 0.0, 0.5}, 0.0, {8, "wf", 0}), ConfigError);

  std::vector<double> mart;
  for (int i = 0; i < 10000; ++i)
    mart.push_back(sim_wright_fisher({1, 0.0, 0.0, 0.3}, 1e-2,
                                     {8, "wf.m", static_cast<std::uint64_t>(i)})(1.0));
  const auto mm = teststat::moments(mart);
  CHECK(std::fabs(mm.mean - 0.3) <= 3.0 * mm.se_mean);

  // E X(t) = x_inf + (x0 - x_inf) e^{-(nu1+nu2) t}, x_inf = nu2/(nu1+nu2).
  const double nu1 = 1.0, nu2 = 2.0, x0 = 0.3;
  const double xinf = nu2 / (nu1 + nu2);
  std::vector<double> at5, at10;
  for (int i = 0; i < 10000; ++i) {
    const GridPath x = sim_wright_fisher({1, nu1, nu2, x0}, 1e-3,
                                         {8, "wf.ode", static_cast<std::uint64_t>(i)});
    at5.push_back(x(0.5));
    at10.push_back(x(1.0));
  }
  const auto m5 = teststat::moments(at5);
  const auto m10 = teststat::moments(at10);
  CHECK(std::fabs(m5.mean - (xinf + (x0 - xinf) * std::exp(-3.0 * 0.5))) <=
        3.0 * m5.se_mean);
  CHECK(std::fabs(m10.mean - (xinf + (x0 - xinf) * std::exp(-3.0))) <= 3.0 * m10.se_mean);
}

TEST_CASE("jump-martingale difference: degenerate zero and conditional identities") {
  CHECK(sim_mn({16, 0.0, 0.0, 0.0}, {9, "mn", 0}).sup_norm() == 0.0);

  // Condition on one chain path and resample the Poisson drivers.
  const ModelParams mp{32, 1.0, 1.0, 0.5};
  const GridPath xn = sim_moran(mp, {9, "mn.xn", 0});
  const GridPath r1 = integrated_rate(xn, mp.nu1, mp.nu2, RateKind::R1, mp.n);
  const GridPath rm1 = integrated_rate(xn, mp.nu1, mp.nu2, RateKind::Rm1, mp.n);
  const GridPath drift = integrated_rate(xn, mp.nu1, mp.nu2, RateKind::In, mp.n);
  const double nd = static_cast<double>(mp.n);

  for (double t : {0.5, 1.0}) {
    std::vector<double> vals;
    for (int i = 0; i < 20000; ++i)
      vals.push_back(
          sim_mn_given(xn, mp, {9, "mn.cond", static_cast<std::uint64_t>(i)})(t));
    const auto m = teststat::moments(vals);
    const double mean_target = nd * (r1(t) - rm1(t));
    CHECK(mean_target == doctest::Approx(drift(t)).epsilon(1e-10));  // algebraic identity
    CHECK(std::fabs(m.mean - mean_target) <= 3.0 * m.se_mean);
    CHECK(std::fabs(m.var - (r1(t) + rm1(t))) <= 3.0 * m.se_var);
  }
}

TEST_CASE("diffusion-side martingale: degenerate zero and conditional identities") {
  for (double x0 : {0.0, 1.0})
    CHECK(sim_m({1, 0.0, 0.0, x0}, 1e-2, {10, "m", 0}).sup_norm() == 0.0);

  const ModelParams mp{1, 1.0, 1.0, 0.5};
  const GridPath x = sim_wright_fisher(mp, 1e-2, {10, "m.x", 0});
  GridPath r = integrated_rate(x, mp.nu1, mp.nu2, RateKind::R1Limit, 1);
  const GridPath drift = integrated_rate(x, mp.nu1, mp.nu2, RateKind::In, 1);
  for (double t : {0.5, 1.0}) {
    std::vector<double> vals;
    for (int i = 0; i < 20000; ++i)
      vals.push_back(sim_m_given(x, mp, {10, "m.cond", static_cast<std::uint64_t>(i)})(t));
    const auto m = teststat::moments(vals);
    CHECK(std::fabs(m.mean - drift(t)) <= 3.0 * m.se_mean);
    CHECK(std::fabs(m.var - 2.0 * r(t)) <= 3.0 * m.se_var);  // int x(1-x) = 2 * R1_limit
  }
}

TEST_CASE("lookdown marginals: degenerate zero, conditional moments, Bernoulli case") {
  const auto grid = uniform_grid(4);
  const GridPath zero = GridPath::zero();
  for (double v : lookdown_marginals(zero, 8, grid, {11, "ld", 0})) CHECK(v == 0.0);

  const GridPath x = sim_wright_fisher({1, 1.0, 1.0, 0.5}, 1e-2, {11, "ld.x", 0});
  for (long n : {16L, 256L}) {
    std::vector<std::vector<double>> draws(grid.size());
    for (int i = 0; i < 10000; ++i) {
      const auto vals =
          lookdown_marginals(x, n, grid, {11, "ld.mc", static_cast<std::uint64_t>(i)});
      for (std::size_t j = 0; j < vals.size(); ++j) draws[j].push_back(vals[j]);
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double p = x(grid[j]);
      const auto m = teststat::moments(draws[j]);
      CHECK(std::fabs(m.mean - p) <= 3.0 * m.se_mean);
      CHECK(std::fabs(m.var - p * (1.0 - p) / static_cast<double>(n)) <= 3.0 * m.se_var);
    }
  }

  // n = 1 reduces to a Bernoulli draw at each time.
  std::vector<double> bern;
  const std::vector<double> one_t{0.5};
  for (int i = 0; i < 20000; ++i)
    bern.push_back(
        lookdown_marginals(x, 1, one_t, {11, "ld.b", static_cast<std::uint64_t>(i)})[0]);
  for (double v : bern) CHECK((v == 0.0 || v == 1.0));
  const auto mb = teststat::moments(bern);
  CHECK(std::fabs(mb.mean - x(0.5)) <= 3.0 * mb.se_mean);
}

TEST_CASE("lookdown fourth moment: exact binomial identity and the quartic envelope") {
  // The exact conditional moment is p q (1 + 3 (n-2) p q) / n^3. The printed
  // quartic envelope p (1 - 7p + 7np + ... + n^3 p^3) / n^4 only dominates it
  // away from small p (its linear coefficient is 1 where the exact expansion
  // has n), so the envelope is checked on p >= 1/2 and the identity is
  // checked everywhere.
  Rng rng(12, "ld4", 0);
  const std::vector<double> one_t{0.5};
  for (long n : {16L, 64L}) {
    const double nd = static_cast<double>(n);
    for (int rep = 0; rep < 10; ++rep) {
      const double p = rng.uniform();
      const GridPath x = GridPath::constant(p);
      std::vector<double> q4;
      for (int i = 0; i < 1000; ++i) {
        const double v = lookdown_marginals(
            x, n, one_t, {12, "ld4.mc", static_cast<std::uint64_t>(rep * 10000 + i)})[0];
        const double d = v - p;
        q4.push_back(d * d * d * d);
      }
      const auto m = teststat::moments(q4);
      const double q = 1.0 - p;
      const double exact = p * q * (1.0 + 3.0 * (nd - 2.0) * p * q) / (nd * nd * nd);
      CHECK(std::fabs(m.mean - exact) <= 3.0 * m.se_mean + 1e-12);
      if (p >= 0.5) {
        const double poly =
            p *
            (1.0 - 7.0 * p + 7.0 * nd * p + 12.0 * p * p - 18.0 * nd * p * p +
             6.0 * nd * nd * p * p - 6.0 * p * p * p + 11.0 * nd * p * p * p -
             6.0 * nd * nd * p * p * p + nd * nd * nd * p * p * p) /
            (nd * nd * nd * nd);
        CHECK(exact <= poly);
        CHECK(m.mean - 3.0 * m.se_mean <= poly);
      }
    }
  }
}

TEST_CASE("maximal-Poisson and terminal third-moment bounds hold empirically") {
  // E max_{i<=n} P_i with P_i ~ Poisson(1) against the printed envelope.
  const long n = 50;
  Rng rng(13, "maxp", 0);
  std::vector<double> maxima;
  for (int rep = 0; rep < 20000; ++rep) {
    std::int64_t mx = 0;
    for (long i = 0; i < n; ++i) mx = std::max(mx, rng.poisson(1.0));
    maxima.push_back(static_cast<double>(mx));
  }
  const auto mm = teststat::moments(maxima);
  const double e1 = 1.0 + 2.0 / std::exp(1.0);
  const double envelope = (std::log(e1) + 2.0 * std::log(static_cast<double>(n))) /
                          std::log(std::log(static_cast<double>(n) + 2.0));
  CHECK(mm.mean + 3.0 * mm.se_mean <= envelope);

  // (E ||Y~||^3)^{2/3} <= (3/2)^2 n^{-1/2} sqrt(Sn1) (1 + 3 n Sn1)^{1/2}.
  const TimeChange sn = TimeChange::identity();
  const long np = 64;
  std::vector<double> sup3;
  for (int i = 0; i < 20000; ++i) {
    const double s =
        sim_compensated_poisson(np, sn, {13, "y3", static_cast<std::uint64_t>(i)})
            .sup_norm();
    sup3.push_back(s * s * s);
  }
  const auto m3 = teststat::moments(sup3);
  const double lhs = std::pow(m3.mean + 3.0 * m3.se_mean, 2.0 / 3.0);
  const double rhs = 2.25 / std::sqrt(static_cast<double>(np)) * std::sqrt(sn.total()) *
                     std::sqrt(1.0 + 3.0 * static_cast<double>(np) * sn.total());
  CHECK(lhs <= rhs);
}

TEST_CASE("degenerate corners: chain and jump-martingale agree at constant paths") {
  for (double x0 : {0.0, 1.0}) {
    const ModelParams mp{16, 0.0, 0.0, x0};
    const GridPath xn = sim_moran(mp, {14, "deg", 0});
    CHECK(xn.sup_norm() == doctest::Approx(x0));
    CHECK(xn.size() == 2);  // never leaves the corner
    CHECK(sim_mn(mp, {14, "deg.mn", 0}).sup_norm() == 0.0);
  }
}

TEST_CASE("distinct stream keys give empirically independent paths") {
  const TimeChange id = TimeChange::identity();
  const int n = 10000;
  std::vector<double> a, b;
  for (int i = 0; i < n; ++i) {
    a.push_back(
        sim_discretized_bm(16, id, {15, "ind.a", static_cast<std::uint64_t>(i)})(1.0));
    b.push_back(
        sim_discretized_bm(16, id, {15, "ind.b", static_cast<std::uint64_t>(i)})(1.0));
  }
  CHECK(std::fabs(teststat::correlation(a, b)) < 4.0 / std::sqrt(static_cast<double>(n)));
}
