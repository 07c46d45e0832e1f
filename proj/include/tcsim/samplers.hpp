#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tcsim/grid_path.hpp"
#include "tcsim/rng.hpp"
#include "tcsim/time_change.hpp"

namespace tcsim {

// Population-model parameters; the time horizon is fixed at [0,1].
struct ModelParams {
  std::int64_t n = 1;  // population size / scaling integer, >= 1
  double nu1 = 0.0;    // a -> A mutation rate
  double nu2 = 0.0;    // A -> a mutation rate
  double x0 = 0.0;     // initial allele fraction; n*x0 integral for the chain

  void validate(bool require_integral_x0) const;
};

enum class StepDist {
  Rademacher,        // +-1
  CenteredPoisson1,  // Poisson(1) - 1
  StdNormal,
  Zero,              // degenerate test hook
};

StepDist parse_step_dist(std::string_view s);
double abs3_moment(StepDist d);  // E|X|^3 of the step law

// Scaled random walk run through the time change: piecewise-constant with
// breakpoints at s^{-1}(i/n), i = 1..floor(n s(1)); value after breakpoint i
// is n^{-1/2} times the i-step partial sum.
GridPath sim_scaled_rw(std::int64_t n, StepDist dist, const TimeChange& s,
                       const StreamKey& key);

// Same breakpoint structure with standard normal steps (the discretized
// Brownian comparison process).
GridPath sim_discretized_bm(std::int64_t n, const TimeChange& s, const StreamKey& key);

// B(s(t)) sampled forward on the given grid (must contain 0 and 1, strictly
// increasing); piecewise-linear.
GridPath sim_time_changed_bm(const TimeChange& s, std::span<const double> grid,
                             const StreamKey& key);

// (P(n Sn(t)) - n Sn(t)) / sqrt(n): event times from cumulative rate-1
// exponential spacings mapped back through the generalized inverse of n*Sn;
// piecewise-linear between events with a pre-jump breakpoint one ulp before
// each event so jumps and extremes are exact.
GridPath sim_compensated_poisson(std::int64_t n, const TimeChange& Sn,
                                 const StreamKey& key);

// Exact-event-time birth-death chain on {0, 1/n, ..., 1}: up rate
// n^2 x(1-x)/2 + n nu2 (1-x), down rate n^2 x(1-x)/2 + n nu1 x.
GridPath sim_moran(const ModelParams& params, const StreamKey& key);

// Euler-Maruyama with full truncation for
// dX = (nu2 - (nu1+nu2) X) dt + sqrt(X(1-X)) dB, clamped to [0,1];
// piecewise-linear on the dt-grid. Requires 0 < dt <= 1e-2.
GridPath sim_wright_fisher(const ModelParams& params, double dt, const StreamKey& key);

// M_n = P1(n^2 R1(t))/n - P2(n^2 Rm1(t))/n with the rate integrals built from
// a fresh Moran path and the Poisson drivers independent of it. The mutation
// drift integral is intentionally not added; it is available separately via
// integrated_rate(kind = In).
GridPath sim_mn(const ModelParams& params, const StreamKey& key);
GridPath sim_mn_given(const GridPath& xn, const ModelParams& params,
                      const StreamKey& key);

// M = W(int_0^t X(1-X)) + int_0^t (nu2 - (nu1+nu2) X) with W independent of X.
GridPath sim_m(const ModelParams& params, double dt, const StreamKey& key);
GridPath sim_m_given(const GridPath& x, const ModelParams& params,
                     const StreamKey& key);

// Independent Binomial(n, x(t))/n draws at each grid time (fixed-time
// marginal coupling).
std::vector<double> lookdown_marginals(const GridPath& x, std::int64_t n,
                                       std::span<const double> grid,
                                       const StreamKey& key);

// One Brownian realization drives both outputs: the discretized process reads
// B at operational times i/n, the limit reads B(s(t)) on the grid.
std::pair<GridPath, GridPath> sim_coupled_dbm_tcbm(std::int64_t n, const TimeChange& s,
                                                   std::span<const double> grid,
                                                   const StreamKey& key);

std::vector<double> uniform_grid(int cells);  // cells+1 points spanning [0,1]

}  // namespace tcsim
