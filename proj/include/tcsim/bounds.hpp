#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tcsim {

// Term-by-term evaluation of one closed-form bound: total is the sum of the
// labeled terms; all terms are nonnegative; notes record evaluation choices.
struct BoundBreakdown {
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::pair<std::string, double>> terms;
  std::vector<std::string> notes;
  double total = 0.0;

  double term(const std::string& label) const;
};

// Scaled-random-walk vs time-changed-Brownian bound:
//   gm * (30 + 54*5^{1/3} s1)/sqrt(pi log 2) * n^{-1/2} sqrt(log(2 s1 n))
// + gm * s1 (1 + (3/2)^3 sqrt(2/pi) s1^{3/2}) m3 * n^{-1/2}
// + gm * 2160/(sqrt(pi) (log 2)^{3/2}) * n^{-3/2} (log(2 s1 n))^{3/2}.
// Requires n >= 1, s1 > 0, 2 s1 n >= 1, m3 >= 1.
BoundBreakdown bound_thm1(std::int64_t n, double s1, double m3, double gm);

// Compensated-Poisson vs time-changed-Brownian bound (five labeled groups).
// The log(2 s(1) n) factor in the n^{-1/2} group is evaluated with S1; the
// substitution is recorded in notes.
BoundBreakdown bound_thm2(std::int64_t n, double S1, double Sn1, double dist,
                          double gm);

// Moran-style vs Wright-Fisher-style bound; simplified = the nu >= 1 variant.
BoundBreakdown bound_thm3(std::int64_t n, double nu1, double nu2, double gm,
                          bool simplified);

struct BmModulus {
  double k1 = 0.0;  // E||A_n - Z||
  double k2 = 0.0;  // E||A_n - Z||^2
  double k3 = 0.0;  // E||A_n - Z||^3
};

// Discretization moduli for the coupled construction A_n(t) = B(floor(n s(t))/n):
//   k1 = (5/sqrt(pi)) (6/sqrt(log 2)) n^{-1/2} sqrt(log(2 s1 n))
//   k2 = (5/2) (6/sqrt(log 2))^2 n^{-1} log(2 s1 n)
//   k3 = (5/sqrt(pi)) (6/sqrt(log 2))^3 n^{-3/2} (log(2 s1 n))^{3/2}.
BmModulus bm_modulus_bounds(std::int64_t n, double s1);

// (3/2)^3 * 2 sqrt(2/pi) * s1^{3/2}, the maximal-process third-moment bound.
double doob_l3_bound(double s1);

// E|P(1) - 1|^3 = 1 + 2 e^{-1} by series, truncated below 1e-14.
double poisson_abs3_moment();
double poisson_abs1_moment();  // E|P(1) - 1| = 2 e^{-1}, same machinery

// sum_{i=1}^{floor(lambda^3)} (1 - i lambda^{-3})^i e^{-lambda}
// lambda^{i-1}/(i-1)!, with log-space Poisson weights. Requires lambda > 1.
double min_holding_prob(double lambda);

}  // namespace tcsim
