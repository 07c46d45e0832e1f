#include "tcsim/time_change.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "tcsim/errors.hpp"

namespace tcsim {

TimeChange::TimeChange(Form f, double param, std::optional<GridPath> table)
    : form_(f), param_(param), table_(std::move(table)) {}

TimeChange TimeChange::identity() { return TimeChange(Form::Identity, 1.0, std::nullopt); }

TimeChange TimeChange::linear(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("TimeChange::linear: need c > 0");
  return TimeChange(Form::Linear, c, std::nullopt);
}

TimeChange TimeChange::power(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("TimeChange::power: need alpha > 0");
  return TimeChange(Form::Power, alpha, std::nullopt);
}

TimeChange TimeChange::tabulated(GridPath table) {
  if (table.kind() != PathKind::PiecewiseLinear)
    throw StructuralError("TimeChange::tabulated: table must be piecewise-linear");
  const auto& v = table.values();
  if (v.front() != 0.0) throw StructuralError("TimeChange::tabulated: s(0) must be 0");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) throw StructuralError("TimeChange::tabulated: values must be nondecreasing");
  return TimeChange(Form::Tabulated, 0.0, std::move(table));
}

double TimeChange::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("TimeChange: t outside [0,1]");
  switch (form_) {
    case Form::Identity: return t;
    case Form::Linear: return param_ * t;
    case Form::Power: return std::pow(t, param_);
    case Form::Tabulated: return (*table_)(t);
  }
  return 0.0;
}

double TimeChange::total() const {
  return form_ == Form::Tabulated ? table_->values().back() : (*this)(1.0);
}

double TimeChange::inverse(double y) const {
  if (!(y >= 0.0) || y > total() * (1.0 + 1e-15) + 1e-300)
    throw DomainError("inverse_tc: y outside [0, s(1)]");
  y = std::min(y, total());
  switch (form_) {
    case Form::Identity: return y;
    case Form::Linear: return y / param_;
    case Form::Power: return std::pow(y, 1.0 / param_);
    case Form::Tabulated: break;
  }
  const auto& t = table_->times();
  const auto& v = table_->values();
  // Leftmost index with v[i] >= y, then linear solve on the segment before it.
  auto it = std::lower_bound(v.begin(), v.end(), y);
  std::size_t i = static_cast<std::size_t>(it - v.begin());
  if (i == 0) return t[0];
  const double v0 = v[i - 1], v1 = v[i];
  if (v1 == v0) return t[i - 1];
  const double w = (y - v0) / (v1 - v0);
  return t[i - 1] + w * (t[i] - t[i - 1]);
}

namespace {

std::uint64_t fnv1a_doubles(const std::vector<double>& xs, std::uint64_t h) {
  for (double x : xs) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof x);
    std::memcpy(&bits, &x, sizeof bits);
    for (int b = 0; b < 64; b += 8) {
      h ^= (bits >> b) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

}  // namespace

std::string TimeChange::describe() const {
  switch (form_) {
    case Form::Identity: return "identity";
    case Form::Linear: return "linear:" + std::to_string(param_);
    case Form::Power: return "power:" + std::to_string(param_);
    case Form::Tabulated: {
      // Content fingerprint so distinct tables never compare equal.
      const std::uint64_t h =
          fnv1a_doubles(table_->values(), fnv1a_doubles(table_->times(), 0xCBF29CE484222325ULL));
      return "tabulated[" + std::to_string(table_->size()) + "]#" + std::to_string(h);
    }
  }
  return "?";
}

double inverse_tc(const TimeChange& s, double y) { return s.inverse(y); }

double uniform_distance(const TimeChange& s, const TimeChange& s2) {
  std::vector<double> grid{0.0, 1.0};
  auto add_table = [&grid](const TimeChange& tc) {
    if (const GridPath* tab = tc.table())
      grid.insert(grid.end(), tab->times().begin(), tab->times().end());
  };
  add_table(s);
  add_table(s2);
  const bool curved = s.form() == TimeChange::Form::Power || s2.form() == TimeChange::Form::Power;
  if (curved) {
    const int k = 4096;
    for (int i = 1; i < k; ++i) grid.push_back(static_cast<double>(i) / k);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double m = 0.0;
  for (double t : grid) m = std::max(m, std::fabs(s(t) - s2(t)));
  return m;
}

namespace {

double rate_integrand(double x, double nu1, double nu2, RateKind kind, double n,
                      bool genetic) {
  if (genetic && !(x >= 0.0 && x <= 1.0))
    throw DomainError("integrated_rate: integrand path must take values in [0,1]");
  switch (kind) {
    case RateKind::R1: return (0.5 * x + nu2 / n) * (1.0 - x);
    case RateKind::Rm1: return (0.5 * (1.0 - x) + nu1 / n) * x;
    case RateKind::R1Limit: return 0.5 * x * (1.0 - x);
    case RateKind::In:
    case RateKind::ILimit: return nu2 - (nu1 + nu2) * x;
  }
  return 0.0;
}

}  // namespace

GridPath integrated_rate(const GridPath& x, double nu1, double nu2, RateKind kind,
                         std::int64_t n) {
  const bool genetic =
      kind == RateKind::R1 || kind == RateKind::Rm1 || kind == RateKind::R1Limit;
  if ((kind == RateKind::R1 || kind == RateKind::Rm1) && n < 1)
    throw DomainError("integrated_rate: need n >= 1");
  if (nu1 < 0.0 || nu2 < 0.0) throw DomainError("integrated_rate: mutation rates must be >= 0");
  const double nd = static_cast<double>(std::max<std::int64_t>(n, 1));

  const auto& t = x.times();
  const auto& v = x.values();
  std::vector<double> out(t.size());
  out[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i];
    if (x.kind() == PathKind::PiecewiseConstant) {
      acc += rate_integrand(v[i], nu1, nu2, kind, nd, genetic) * dt;
    } else {
      const double fa = rate_integrand(v[i], nu1, nu2, kind, nd, genetic);
      const double fb = rate_integrand(v[i + 1], nu1, nu2, kind, nd, genetic);
      acc += 0.5 * (fa + fb) * dt;
    }
    out[i + 1] = acc;
  }
  return GridPath(t, std::move(out), PathKind::PiecewiseLinear);
}

TimeChange integrated_rate_time_change(const GridPath& x, double nu1, double nu2,
                                       RateKind kind, std::int64_t n) {
  if (kind == RateKind::In || kind == RateKind::ILimit)
    throw DomainError("integrated_rate_time_change: signed kinds are plain paths, not time changes");
  GridPath p = integrated_rate(x, nu1, nu2, kind, n);
  // Monotone up to roundoff by construction (integrand >= 0); clamp dips.
  std::vector<double> vs = p.values();
  for (std::size_t i = 1; i < vs.size(); ++i) vs[i] = std::max(vs[i], vs[i - 1]);
  return TimeChange::tabulated(GridPath(p.times(), std::move(vs), PathKind::PiecewiseLinear));
}

}  // namespace tcsim
