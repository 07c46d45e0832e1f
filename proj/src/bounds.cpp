#include "tcsim/bounds.hpp"

#include <cmath>

#include "tcsim/errors.hpp"

namespace tcsim {
namespace {

const double kPi = 3.14159265358979323846264338327950288;
const double kLog2 = std::log(2.0);

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

double cube(double x) { return x * x * x; }

}  // namespace

double BoundBreakdown::term(const std::string& label) const {
  for (const auto& [l, v] : terms)
    if (l == label) return v;
  throw ConfigError("BoundBreakdown: no term labeled '" + label + "'");
}

BoundBreakdown bound_thm1(std::int64_t n, double s1, double m3, double gm) {
  require(n >= 1, "bound_thm1: need n >= 1");
  require(s1 > 0.0, "bound_thm1: need s1 > 0");
  require(gm >= 0.0, "bound_thm1: need gm >= 0");
  const double nd = static_cast<double>(n);
  require(2.0 * s1 * nd >= 1.0, "bound_thm1: need 2 s1 n >= 1");
  require(m3 >= 1.0, "bound_thm1: need m3 >= 1");

  const double lg = std::log(2.0 * s1 * nd);
  const double t1 = gm * (30.0 + 54.0 * std::cbrt(5.0) * s1) / std::sqrt(kPi * kLog2) *
                    std::sqrt(lg) / std::sqrt(nd);
  const double t2 = gm * s1 *
                    (1.0 + cube(1.5) * std::sqrt(2.0 / kPi) * s1 * std::sqrt(s1)) * m3 /
                    std::sqrt(nd);
  const double t3 =
      gm * 2160.0 / (std::sqrt(kPi) * kLog2 * std::sqrt(kLog2)) * lg * std::sqrt(lg) /
      (nd * std::sqrt(nd));

  BoundBreakdown b;
  b.inputs = {{"n", nd}, {"s1", s1}, {"m3", m3}, {"gm", gm}};
  b.terms = {{"n_inv_sqrt_log", t1}, {"n_inv_sqrt_moment", t2}, {"n_3_2_log", t3}};
  b.total = t1 + t2 + t3;
  return b;
}

BoundBreakdown bound_thm2(std::int64_t n, double S1, double Sn1, double dist,
                          double gm) {
  require(n >= 2, "bound_thm2: need n >= 2");
  require(S1 > 0.0 && Sn1 > 0.0, "bound_thm2: need S1, Sn1 > 0");
  require(dist >= 0.0, "bound_thm2: need dist >= 0");
  require(gm >= 0.0, "bound_thm2: need gm >= 0");
  const double nd = static_cast<double>(n);
  require(2.0 * S1 * nd >= 1.0, "bound_thm2: need 2 S1 n >= 1");

  const double c27 = 27.0 * std::sqrt(2.0) / (2.0 * std::sqrt(kPi));
  const double lg = std::log(2.0 * S1 * nd);
  const double ln = std::log(nd);
  const double e1 = 1.0 + 2.0 / std::exp(1.0);

  const double t_sqrt_dist = gm * (2.0 + c27 * S1) * std::sqrt(dist);
  const double t_dist_3_2 = gm * c27 * dist * std::sqrt(dist);
  const double t_n_half =
      gm / std::sqrt(nd) *
      ((30.0 + 54.0 * std::cbrt(5.0) * S1) / std::sqrt(kPi * kLog2) * std::sqrt(lg) +
       (1.0 + cube(1.5) * std::sqrt(2.0 / kPi) * Sn1 * std::sqrt(Sn1)) * Sn1 * e1 + 1.0 +
       (std::log(e1) + 2.0 * ln) / std::log(std::log(nd + 2.0)));
  const double lll3 = cube(std::log(std::log(nd + 3.0)));
  const double t_n_one =
      gm / nd * 4.5 * std::sqrt(Sn1) * std::sqrt(1.0 + 3.0 * nd * Sn1) *
      std::cbrt(4.0 + (16701.0 + 128.0 * cube(ln)) / lll3);
  const double t_n_3_2 =
      gm / (nd * std::sqrt(nd)) *
      (2160.0 / (std::sqrt(kPi) * kLog2 * std::sqrt(kLog2)) * lg * std::sqrt(lg) + 8.0 +
       (33402.0 + 256.0 * cube(ln)) / lll3);

  BoundBreakdown b;
  b.inputs = {{"n", nd}, {"S1", S1}, {"Sn1", Sn1}, {"dist", dist}, {"gm", gm}};
  b.terms = {{"sqrt_dist", t_sqrt_dist},
             {"dist_3_2", t_dist_3_2},
             {"n_inv_sqrt", t_n_half},
             {"n_inv", t_n_one},
             {"n_3_2", t_n_3_2}};
  b.notes = {"n_inv_sqrt log factor evaluated as log(2*S1*n)"};
  b.total = t_sqrt_dist + t_dist_3_2 + t_n_half + t_n_one + t_n_3_2;
  return b;
}

BoundBreakdown bound_thm3(std::int64_t n, double nu1, double nu2, double gm,
                          bool simplified) {
  require(n >= 2, "bound_thm3: need n >= 2");
  require(nu1 >= 0.0 && nu2 >= 0.0, "bound_thm3: need nu1, nu2 >= 0");
  require(gm >= 0.0, "bound_thm3: need gm >= 0");
  if (simplified) require(nu1 >= 1.0 && nu2 >= 1.0, "bound_thm3: simplified form needs nu1, nu2 >= 1");
  const double nd = static_cast<double>(n);

  BoundBreakdown b;
  b.inputs = {{"n", nd}, {"nu1", nu1}, {"nu2", nu2}, {"gm", gm},
              {"simplified", simplified ? 1.0 : 0.0}};

  const double n_quarter = 1.0 / std::sqrt(std::sqrt(nd));
  const double n_cubed = 1.0 / cube(nd);
  const double log1 = std::pow(std::log(nd * nd / 4.0 + nu1 * nd), 1.5);
  const double log2v = std::pow(std::log(nd * nd / 4.0 + nu2 * nd), 1.5);

  if (!simplified) {
    const double a = 18.0 + std::sqrt(nu1) + 47.0 * std::pow(nu1, 0.75) +
                     31.0 * std::pow(nu1, 1.5) + nu2 + 3.0 * nu2 * nu2 + 9.0 * cube(nu2);
    const double bb = 1.02e6 + 425.0 * std::sqrt(nu2) + 623.0 * nu2 +
                      39.0 * std::pow(nu2, 1.5) + 7.0 * std::pow(nu2, 2.5);
    const double c = 12.0 + 3.0 * nu2 + 3.0 * nu2 * nu2 + 9.0 * cube(nu2);
    const double d = 1.02e6 + 425.0 * std::sqrt(nu1) + 623.0 * nu1 +
                     39.0 * std::pow(nu1, 1.5) + 7.0 * std::pow(nu1, 2.5);
    const double drift =
        7.0 * (0.5 * (1.0 + 2.0 * nu2) * (nu1 + nu2) + 31.0 * cube(nu1 + nu2));
    const double t_quarter = gm * (a * bb + c * d + drift) * n_quarter;
    const double t_log = gm * 2112.0 * (a * log2v + c * log1) * n_cubed;
    b.terms = {{"n_quarter_block", t_quarter}, {"n_cubed_log_block", t_log}};
    b.total = t_quarter + t_log;
    return b;
  }

  const double p1 = 18.0 + 79.0 * std::pow(nu1, 1.5) + 13.0 * cube(nu2);
  const double p2 = 12.0 + 15.0 * cube(nu2);
  const double q = 1.02e6 + 1094.0 * std::pow(nu2, 2.5);
  const double drift = 7.0 * (31.5 * cube(nu1) + 32.5 * cube(nu2) +
                              nu1 * nu2 * (1.0 + 93.0 * nu1 + 93.0 * nu2));
  const double t_quarter = gm * (p1 * q + p2 * q + drift) * n_quarter;
  const double t_log_1 = gm * 2112.0 * p1 * n_cubed * log1;
  const double t_log_2 = gm * 2112.0 * p2 * n_cubed * log1;
  b.terms = {{"n_quarter_block", t_quarter},
             {"n_cubed_log_1", t_log_1},
             {"n_cubed_log_2", t_log_2}};
  b.notes = {"simplified-form constants transcribed verbatim (nu2 factor in both products, nu1 in both logs)"};
  b.total = t_quarter + t_log_1 + t_log_2;
  return b;
}

BmModulus bm_modulus_bounds(std::int64_t n, double s1) {
  require(n >= 1, "bm_modulus_bounds: need n >= 1");
  require(s1 > 0.0, "bm_modulus_bounds: need s1 > 0");
  const double nd = static_cast<double>(n);
  require(2.0 * s1 * nd >= 1.0, "bm_modulus_bounds: need 2 s1 n >= 1");
  const double lg = std::log(2.0 * s1 * nd);
  const double c = 6.0 / std::sqrt(kLog2);
  BmModulus m;
  m.k1 = 5.0 / std::sqrt(kPi) * c * std::sqrt(lg / nd);
  m.k2 = 2.5 * c * c * lg / nd;
  m.k3 = 5.0 / std::sqrt(kPi) * cube(c) * lg * std::sqrt(lg) / (nd * std::sqrt(nd));
  return m;
}

double doob_l3_bound(double s1) {
  require(s1 > 0.0, "doob_l3_bound: need s1 > 0");
  return cube(1.5) * 2.0 * std::sqrt(2.0 / kPi) * s1 * std::sqrt(s1);
}

namespace {

// E|P(1) - 1|^p by series over k with weights e^{-1}/k!.
double poisson_centered_abs_moment(double p) {
  const double einv = std::exp(-1.0);
  double sum = einv;  // k = 0 term: |0-1|^p * e^{-1}
  double w = einv;    // e^{-1}/k!
  for (int k = 1; k < 200; ++k) {
    w /= static_cast<double>(k);
    const double term = std::pow(static_cast<double>(k - 1), p) * w;
    sum += term;
    if (k > 3 && term < 1e-15 * sum) break;
  }
  return sum;
}

}  // namespace

double poisson_abs3_moment() { return poisson_centered_abs_moment(3.0); }
double poisson_abs1_moment() { return poisson_centered_abs_moment(1.0); }

double min_holding_prob(double lambda) {
  require(lambda > 1.0, "min_holding_prob: need lambda > 1");
  const double lam3 = cube(lambda);
  const auto imax = static_cast<std::int64_t>(std::floor(lam3));
  const double log_lambda = std::log(lambda);
  double sum = 0.0;
  for (std::int64_t i = 1; i <= imax; ++i) {
    const double id = static_cast<double>(i);
    // log of (1 - i/lambda^3)^i * e^{-lambda} lambda^{i-1} / (i-1)!
    const double lw = id * std::log1p(-id / lam3) - lambda + (id - 1.0) * log_lambda -
                      std::lgamma(id);
    sum += std::exp(lw);
    // Poisson weights fall off geometrically past the mode.
    if (id > lambda + 1.0 && lw < std::log(1e-18) + std::log(std::max(sum, 1e-300)))
      break;
  }
  return sum;
}

}  // namespace tcsim
