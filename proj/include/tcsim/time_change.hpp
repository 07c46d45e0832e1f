#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tcsim/grid_path.hpp"

namespace tcsim {

// Nondecreasing continuous reparameterization s : [0,1] -> [0, s(1)] with
// s(0) = 0. Closed forms (identity, c*t, t^alpha) are strictly increasing and
// invert exactly; the tabulated form is piecewise-linear by construction so
// continuity holds.
class TimeChange {
 public:
  enum class Form { Identity, Linear, Power, Tabulated };

  static TimeChange identity();
  static TimeChange linear(double c);      // c > 0
  static TimeChange power(double alpha);   // t^alpha, alpha > 0
  static TimeChange tabulated(GridPath table);  // piecewise-linear, nondecreasing

  double operator()(double t) const;  // s(t), t in [0,1]
  double total() const;               // s(1)

  // Generalized inverse inf{t : s(t) >= y}; ties on flat segments resolve to
  // the leftmost time. Requires 0 <= y <= s(1).
  double inverse(double y) const;

  Form form() const { return form_; }
  bool closed_form() const { return form_ != Form::Tabulated; }
  const GridPath* table() const { return table_ ? &*table_ : nullptr; }
  double param() const { return param_; }

  std::string describe() const;

 private:
  TimeChange(Form f, double param, std::optional<GridPath> table);

  Form form_;
  double param_;  // c for Linear, alpha for Power
  std::optional<GridPath> table_;
};

double inverse_tc(const TimeChange& s, double y);

// sup_t |s(t) - s2(t)| over the merged breakpoint grid (refined uniformly when
// a curved closed form is involved); exact for piecewise-linear pairs.
double uniform_distance(const TimeChange& s, const TimeChange& s2);

enum class RateKind {
  R1,       // ((1/2) x + nu2/n)(1 - x)
  Rm1,      // ((1/2)(1 - x) + nu1/n) x
  R1Limit,  // (1/2) x (1 - x)
  In,       // nu2 - (nu1 + nu2) x   (signed)
  ILimit,   // nu2 - (nu1 + nu2) x   (signed, limit-process label)
};

// Integral over [0,t] of the selected integrand of x: exact for
// piecewise-constant x, trapezoidal for piecewise-linear x. Genetic kinds
// (R1, Rm1, R1Limit) require x in [0,1]. Always returns the tabulated
// integral path; signed kinds may be non-monotone.
GridPath integrated_rate(const GridPath& x, double nu1, double nu2, RateKind kind,
                         std::int64_t n);

// Same, wrapped as a TimeChange. Only valid for the nondecreasing kinds.
TimeChange integrated_rate_time_change(const GridPath& x, double nu1, double nu2,
                                       RateKind kind, std::int64_t n);

}  // namespace tcsim
