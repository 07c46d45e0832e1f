#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "tcsim/functionals.hpp"
#include "tcsim/grid_path.hpp"
#include "tcsim/rng.hpp"
#include "tcsim/time_change.hpp"

namespace tcsim {

// Ornstein-Uhlenbeck evolution time with its decay and mixing coefficients;
// mix(u) = sqrt(1 - e^{-2u}) so that stationarity is reached as u -> inf.
struct OUTime {
  double u = 0.0;
  double decay() const;  // e^{-u}
  double mix() const;    // sqrt(1 - e^{-2u})
};

// Law of the linear statistic L applied to the discretized comparison
// process: coefficients c_i = L(1_{[s^{-1}(i/n),1]}) / sqrt(n) and the exact
// variance v = sum c_i^2.
struct GaussianStatistic {
  std::vector<double> coeffs;
  double variance = 0.0;

  static GaussianStatistic build(const InnerStatistic& L, std::int64_t n,
                                 const TimeChange& s);
};

struct MCValue {
  double value = 0.0;
  double se = 0.0;
};

// Exact stationary mean E g(A_n) for the catalog (odd outers vanish, cosine
// gives e^{-v/2}, quadratic gives v).
double stationary_mean(const FunctionalSpec& g, std::int64_t n, const TimeChange& s);

// MC average of g(w e^{-u} + mix(u) A_n) over fresh draws; u = 0 short-circuits
// to g(w) with zero standard error.
MCValue ou_semigroup(const FunctionalSpec& g, const GridPath& w, double u,
                     std::int64_t n, const TimeChange& s, std::int64_t samples,
                     const StreamKey& key);

// Generator value -Dg(w)[w] + E D^2 g(w)[A_n^{(2)}]; the Gaussian expectation
// is the exact closed form phi''(Lw) * v.
double generator_apply(const FunctionalSpec& g, const GridPath& w, std::int64_t n,
                       const TimeChange& s);

struct SteinSolveOptions {
  double u_max = 30.0;           // requires >= 5 (tail bound unusable below)
  int quad_nodes = 64;           // Gauss-Legendre nodes on [0, u_max]
  std::int64_t samples = 4000;   // MC samples per node
  double se_mult = 3.0;          // MC margin folded into the reported error
};

struct SteinValue {
  double value = 0.0;
  double error = 0.0;  // tail bound + se_mult * aggregated MC standard error
};

// Solution of the Stein equation at w: -int_0^{u_max} (T_u g_centered)(w) du
// by fixed Gauss-Legendre nodes with ou_semigroup at each node (per-node
// sub-streams). Centering uses the exact stationary mean.
SteinValue stein_solution(const FunctionalSpec& g, const GridPath& w, std::int64_t n,
                          const TimeChange& s, const SteinSolveOptions& opt,
                          const StreamKey& key);

// Directional derivatives of the solution operator evaluated by deterministic
// quadrature (Gauss-Legendre in u, Gauss-Hermite for the OU mix). Used for
// the generator identity and the solution-norm spot checks.
double stein_solution_deriv1(const FunctionalSpec& g, const GridPath& w,
                             const GridPath& h, std::int64_t n, const TimeChange& s);
double stein_solution_deriv2(const FunctionalSpec& g, const GridPath& w,
                             const GridPath& h, const GridPath& k, std::int64_t n,
                             const TimeChange& s);

// Generator applied to the Stein solution of g, evaluated at w:
// A_n f(w) = Lw * int e^{-u} E phi'(..) du - v * int e^{-2u} E phi''(..) du.
double stein_generator_of_solution(const FunctionalSpec& g, const GridPath& w,
                                   std::int64_t n, const TimeChange& s);

// MC estimate of E[A_n f(Y)] with f the Stein solution of g, for Y drawn from
// the target ("scaled_rw:<dist>"), or of E[A_n g(A_n)] for the stationary
// target ("discretized_bm").
MCValue stein_identity_residual(const FunctionalSpec& g, std::string_view target,
                                std::int64_t n, const TimeChange& s,
                                std::int64_t samples, const StreamKey& key);

}  // namespace tcsim
