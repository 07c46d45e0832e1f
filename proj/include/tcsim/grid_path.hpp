#pragma once

#include <cstddef>
#include <vector>

namespace tcsim {

enum class PathKind {
  PiecewiseConstant,  // cadlag step function, right-continuous
  PiecewiseLinear,
};

// Finite-grid representation of a real path on [0,1]. Breakpoint times are
// strictly increasing with times.front() == 0 and times.back() == 1; values
// has the same length. Immutable after construction.
class GridPath {
 public:
  GridPath(std::vector<double> times, std::vector<double> values, PathKind kind);

  static GridPath constant(double value, PathKind kind = PathKind::PiecewiseConstant);
  static GridPath zero(PathKind kind = PathKind::PiecewiseConstant);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  PathKind kind() const { return kind_; }
  std::size_t size() const { return times_.size(); }

  // Right-continuous step value (piecewise-constant) or linear interpolant.
  // t must lie in [0,1].
  double operator()(double t) const;

  double sup_norm() const;  // max_i |values[i]|, exact for both kinds

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  PathKind kind_;
};

double eval_path(const GridPath& p, double t);
double sup_norm(const GridPath& p);

// Pointwise a*p + b*q on the merged breakpoint grid. Mixed kinds promote to
// piecewise-linear, with pre-jump breakpoints inserted one ulp before each
// step discontinuity so cadlag extremes survive the promotion.
GridPath combine(double a, const GridPath& p, double b, const GridPath& q);

// Exact integral of the path over [0,1] (step sums / trapezoid).
double integral(const GridPath& p);

}  // namespace tcsim
