#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcsim/grid_path.hpp"

namespace tcsim {

// Smooth scalar outer map with certified derivative constants. The bounded
// members carry finite (sup|phi|, sup|phi'|, sup|phi''|, Lip(phi'')); the
// growth members (Quadratic, Linear) are admitted only where polynomial
// growth is acceptable and have no four-constant norm bound.
enum class OuterKind { Sine, Cosine, CubicSaturating, Quadratic, Linear };

struct OuterMap {
  OuterKind kind;
  double sup_phi;     // sup |phi|           (infinity for growth members)
  double sup_dphi;    // sup |phi'|
  double sup_d2phi;   // sup |phi''|
  double lip_d2phi;   // Lipschitz constant of phi'' (= certified sup |phi'''|)
  bool bounded;

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

  static OuterMap make(OuterKind kind);
};

enum class InnerKind { PointEval, TimeAverage, WeightedSum };

// Bounded linear statistic on paths. Point evaluation uses the cadlag value.
struct InnerStatistic {
  InnerKind kind = InnerKind::TimeAverage;
  double t0 = 0.0;                                   // PointEval
  std::vector<std::pair<double, double>> weights;    // WeightedSum: (t_i, a_i)

  static InnerStatistic point_eval(double t0);
  static InnerStatistic time_average();
  static InnerStatistic weighted_sum(std::vector<std::pair<double, double>> w);

  double operator()(const GridPath& p) const;  // L(p), exact per path kind
  double norm() const;                         // ||L||
  double indicator_value(double a) const;      // L(1_{[a,1]})
  std::string describe() const;
};

// Test functional g(w) = scale * phi(L(w)) + offset with exact first and
// second derivatives and a closed-form norm bound for the bounded outers.
class FunctionalSpec {
 public:
  FunctionalSpec(OuterMap outer, InnerStatistic inner, double scale = 1.0,
                 double offset = 0.0);

  // Catalog ids: "<outer>_<inner>" with outer in {sin, cos, cubic, quad, lin}
  // and inner in {avg, eval@<t>, wsum[t:a,...]}, e.g. "sin_avg",
  // "cos_eval@0.5", "sin_wsum[0.25:1,0.75:-1]".
  static FunctionalSpec parse(std::string_view id);

  double operator()(const GridPath& p) const;
  double deriv1(const GridPath& p, const GridPath& h) const;
  double deriv2(const GridPath& p, const GridPath& h, const GridPath& k) const;

  // sup|phi| + sup|phi'| ||L|| + sup|phi''| ||L||^2 + Lip(phi'') ||L||^3,
  // scaled; a certified upper bound for the weighted-supremum norm.
  // DomainError for the growth outers.
  double m_norm_bound() const;

  // Lipschitz constant of g in sup-norm for bounded outers: scale*sup|phi'|*||L||.
  double lipschitz_bound() const;

  const OuterMap& outer() const { return outer_; }
  const InnerStatistic& inner() const { return inner_; }
  double scale() const { return scale_; }
  double offset() const { return offset_; }

  FunctionalSpec scaled(double c) const;
  FunctionalSpec with_offset(double c) const;

  std::string id() const;

 private:
  OuterMap outer_;
  InnerStatistic inner_;
  double scale_;
  double offset_;
};

double eval_functional(const FunctionalSpec& g, const GridPath& p);

// order 1: phi'(Lp) * Lh; order 2: phi''(Lp) * (Lh)(Lk). k required for order 2.
double differentiate(const FunctionalSpec& g, const GridPath& p, const GridPath& h,
                     const GridPath* k, int order);

double m_norm_bound(const FunctionalSpec& g);

struct FrechetReport {
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;  // max remainder / ||h||^3
  double bound = 0.0;      // certified remainder coefficient used
};

// Samples (w, h) pairs and checks the second-order Taylor remainder of g
// against the certified coefficient. Violations are reported, not thrown.
FrechetReport frechet_check(const FunctionalSpec& g, int trials, std::uint64_t seed);

}  // namespace tcsim
