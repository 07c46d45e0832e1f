#include "tcsim/functionals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "tcsim/errors.hpp"
#include "tcsim/rng.hpp"

namespace tcsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// phi(x) = x^3 (1+x^2)^{-3/2}: odd, saturates at +-1.
// phi'  = 3x^2 (1+x^2)^{-5/2}, maximum 2*(3/5)^{5/2} at x^2 = 2/3.
// phi'' = 3x(2-3x^2)(1+x^2)^{-7/2}, |phi''| <= 1.1554 (max 1.15534).
// phi'''(0) = 6 is the global extreme of phi''', so Lip(phi'') = 6.
double cubic_sat(double x) {
  const double s = 1.0 + x * x;
  return x * x * x / (s * std::sqrt(s));
}
double cubic_sat_d1(double x) {
  const double s = 1.0 + x * x;
  return 3.0 * x * x / (s * s * std::sqrt(s));
}
double cubic_sat_d2(double x) {
  const double s = 1.0 + x * x;
  return 3.0 * x * (2.0 - 3.0 * x * x) / (s * s * s * std::sqrt(s));
}

}  // namespace

OuterMap OuterMap::make(OuterKind kind) {
  switch (kind) {
    case OuterKind::Sine: return {kind, 1.0, 1.0, 1.0, 1.0, true};
    case OuterKind::Cosine: return {kind, 1.0, 1.0, 1.0, 1.0, true};
    case OuterKind::CubicSaturating:
      return {kind, 1.0, 0.55771, 1.1554, 6.0, true};
    case OuterKind::Quadratic: return {kind, kInf, kInf, 2.0, 0.0, false};
    case OuterKind::Linear: return {kind, kInf, 1.0, 0.0, 0.0, false};
  }
  throw ConfigError("OuterMap: unknown kind");
}

double OuterMap::value(double x) const {
  switch (kind) {
    case OuterKind::Sine: return std::sin(x);
    case OuterKind::Cosine: return std::cos(x);
    case OuterKind::CubicSaturating: return cubic_sat(x);
    case OuterKind::Quadratic: return x * x;
    case OuterKind::Linear: return x;
  }
  return 0.0;
}

double OuterMap::d1(double x) const {
  switch (kind) {
    case OuterKind::Sine: return std::cos(x);
    case OuterKind::Cosine: return -std::sin(x);
    case OuterKind::CubicSaturating: return cubic_sat_d1(x);
    case OuterKind::Quadratic: return 2.0 * x;
    case OuterKind::Linear: return 1.0;
  }
  return 0.0;
}

double OuterMap::d2(double x) const {
  switch (kind) {
    case OuterKind::Sine: return -std::sin(x);
    case OuterKind::Cosine: return -std::cos(x);
    case OuterKind::CubicSaturating: return cubic_sat_d2(x);
    case OuterKind::Quadratic: return 2.0;
    case OuterKind::Linear: return 0.0;
  }
  return 0.0;
}

InnerStatistic InnerStatistic::point_eval(double t0) {
  if (!(t0 >= 0.0 && t0 <= 1.0)) throw DomainError("point_eval: t0 outside [0,1]");
  InnerStatistic s;
  s.kind = InnerKind::PointEval;
  s.t0 = t0;
  return s;
}

InnerStatistic InnerStatistic::time_average() {
  InnerStatistic s;
  s.kind = InnerKind::TimeAverage;
  return s;
}

InnerStatistic InnerStatistic::weighted_sum(std::vector<std::pair<double, double>> w) {
  if (w.empty()) throw ConfigError("weighted_sum: need at least one (t, a) pair");
  for (auto& [t, a] : w)
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("weighted_sum: t outside [0,1]");
  InnerStatistic s;
  s.kind = InnerKind::WeightedSum;
  s.weights = std::move(w);
  return s;
}

double InnerStatistic::operator()(const GridPath& p) const {
  switch (kind) {
    case InnerKind::PointEval: return p(t0);
    case InnerKind::TimeAverage: return integral(p);
    case InnerKind::WeightedSum: {
      double acc = 0.0;
      for (const auto& [t, a] : weights) acc += a * p(t);
      return acc;
    }
  }
  return 0.0;
}

double InnerStatistic::norm() const {
  if (kind != InnerKind::WeightedSum) return 1.0;
  double acc = 0.0;
  for (const auto& [t, a] : weights) acc += std::fabs(a);
  return acc;
}

double InnerStatistic::indicator_value(double a) const {
  switch (kind) {
    case InnerKind::PointEval: return t0 >= a ? 1.0 : 0.0;
    case InnerKind::TimeAverage: return 1.0 - a;
    case InnerKind::WeightedSum: {
      double acc = 0.0;
      for (const auto& [t, c] : weights)
        if (t >= a) acc += c;
      return acc;
    }
  }
  return 0.0;
}

std::string InnerStatistic::describe() const {
  switch (kind) {
    case InnerKind::PointEval: {
      std::ostringstream os;
      os << "eval@" << t0;
      return os.str();
    }
    case InnerKind::TimeAverage: return "avg";
    case InnerKind::WeightedSum: {
      std::ostringstream os;
      os << "wsum[";
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (i) os << ',';
        os << weights[i].first << ':' << weights[i].second;
      }
      os << ']';
      return os.str();
    }
  }
  return "?";
}

FunctionalSpec::FunctionalSpec(OuterMap outer, InnerStatistic inner, double scale,
                               double offset)
    : outer_(outer), inner_(std::move(inner)), scale_(scale), offset_(offset) {
  if (!std::isfinite(scale_) || !std::isfinite(offset_))
    throw ConfigError("FunctionalSpec: scale/offset must be finite");
}

double FunctionalSpec::operator()(const GridPath& p) const {
  return scale_ * outer_.value(inner_(p)) + offset_;
}

double FunctionalSpec::deriv1(const GridPath& p, const GridPath& h) const {
  return scale_ * outer_.d1(inner_(p)) * inner_(h);
}

double FunctionalSpec::deriv2(const GridPath& p, const GridPath& h,
                              const GridPath& k) const {
  return scale_ * outer_.d2(inner_(p)) * inner_(h) * inner_(k);
}

double FunctionalSpec::m_norm_bound() const {
  if (!outer_.bounded)
    throw DomainError("m_norm_bound: unbounded outer map; use the weighted definition");
  const double L = inner_.norm();
  return std::fabs(scale_) *
         (outer_.sup_phi + outer_.sup_dphi * L + outer_.sup_d2phi * L * L +
          outer_.lip_d2phi * L * L * L);
}

double FunctionalSpec::lipschitz_bound() const {
  if (!std::isfinite(outer_.sup_dphi))
    throw DomainError("lipschitz_bound: outer derivative unbounded");
  return std::fabs(scale_) * outer_.sup_dphi * inner_.norm();
}

FunctionalSpec FunctionalSpec::scaled(double c) const {
  return FunctionalSpec(outer_, inner_, scale_ * c, offset_ * c);
}

FunctionalSpec FunctionalSpec::with_offset(double c) const {
  return FunctionalSpec(outer_, inner_, scale_, offset_ + c);
}

std::string FunctionalSpec::id() const {
  std::string o;
  switch (outer_.kind) {
    case OuterKind::Sine: o = "sin"; break;
    case OuterKind::Cosine: o = "cos"; break;
    case OuterKind::CubicSaturating: o = "cubic"; break;
    case OuterKind::Quadratic: o = "quad"; break;
    case OuterKind::Linear: o = "lin"; break;
  }
  return o + "_" + inner_.describe();
}

namespace {

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
    throw ConfigError(std::string("functional id: bad number in ") + what);
  return v;
}

}  // namespace

FunctionalSpec FunctionalSpec::parse(std::string_view id) {
  const auto us = id.find('_');
  if (us == std::string_view::npos)
    throw ConfigError("functional id: expected <outer>_<inner>, got '" + std::string(id) + "'");
  const std::string_view outer = id.substr(0, us);
  const std::string_view inner = id.substr(us + 1);

  OuterKind ok;
  if (outer == "sin") ok = OuterKind::Sine;
  else if (outer == "cos") ok = OuterKind::Cosine;
  else if (outer == "cubic") ok = OuterKind::CubicSaturating;
  else if (outer == "quad") ok = OuterKind::Quadratic;
  else if (outer == "lin") ok = OuterKind::Linear;
  else throw ConfigError("functional id: unknown outer map '" + std::string(outer) + "'");

  InnerStatistic st;
  if (inner == "avg") {
    st = InnerStatistic::time_average();
  } else if (inner.rfind("eval@", 0) == 0) {
    st = InnerStatistic::point_eval(parse_double(inner.substr(5), "eval@"));
  } else if (inner.rfind("wsum[", 0) == 0 && inner.back() == ']') {
    std::vector<std::pair<double, double>> w;
    std::string_view body = inner.substr(5, inner.size() - 6);
    while (!body.empty()) {
      const auto comma = body.find(',');
      std::string_view item = body.substr(0, comma);
      const auto colon = item.find(':');
      if (colon == std::string_view::npos)
        throw ConfigError("functional id: wsum entries are t:a");
      w.emplace_back(parse_double(item.substr(0, colon), "wsum t"),
                     parse_double(item.substr(colon + 1), "wsum a"));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    st = InnerStatistic::weighted_sum(std::move(w));
  } else {
    throw ConfigError("functional id: unknown inner statistic '" + std::string(inner) + "'");
  }
  return FunctionalSpec(OuterMap::make(ok), std::move(st));
}

double eval_functional(const FunctionalSpec& g, const GridPath& p) { return g(p); }

double differentiate(const FunctionalSpec& g, const GridPath& p, const GridPath& h,
                     const GridPath* k, int order) {
  if (order == 1) return g.deriv1(p, h);
  if (order == 2) {
    if (k == nullptr) throw ConfigError("differentiate: order 2 requires k");
    return g.deriv2(p, h, *k);
  }
  throw ConfigError("differentiate: order must be 1 or 2");
}

double m_norm_bound(const FunctionalSpec& g) { return g.m_norm_bound(); }

namespace {

GridPath random_walk_path(Rng& rng, int breakpoints, double step_scale, PathKind kind) {
  std::vector<double> t{0.0};
  for (int i = 0; i < breakpoints; ++i) t.push_back(rng.uniform());
  t.push_back(1.0);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  if (t.back() != 1.0) t.push_back(1.0);
  std::vector<double> v(t.size());
  v[0] = step_scale * rng.normal();
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = v[i - 1] + step_scale * rng.normal();
  return GridPath(std::move(t), std::move(v), kind);
}

}  // namespace

FrechetReport frechet_check(const FunctionalSpec& g, int trials, std::uint64_t seed) {
  Rng rng(seed, "frechet_check", 0);
  FrechetReport rep;
  rep.trials = trials;
  // Remainder coefficient: Lip(phi'')||L||^3/6 is the tight Taylor constant;
  // the reported bound uses the full norm bound when available so the check
  // matches the certified constants users see.
  const double L = g.inner().norm();
  const double taylor = std::fabs(g.scale()) * g.outer().lip_d2phi * L * L * L / 6.0;
  rep.bound = g.outer().bounded ? g.m_norm_bound() : taylor;
  for (int i = 0; i < trials; ++i) {
    GridPath w = random_walk_path(rng, 6, 0.5, PathKind::PiecewiseConstant);
    GridPath h = random_walk_path(rng, 6, 0.3, PathKind::PiecewiseConstant);
    GridPath wh = combine(1.0, w, 1.0, h);
    const double rem = std::fabs(g(wh) - g(w) - g.deriv1(w, h) - 0.5 * g.deriv2(w, h, h));
    const double hn = h.sup_norm();
    if (hn == 0.0) {
      if (rem > 1e-12) ++rep.violations;
      continue;
    }
    const double ratio = rem / (hn * hn * hn);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > rep.bound + 1e-9) ++rep.violations;
  }
  return rep;
}

}  // namespace tcsim
