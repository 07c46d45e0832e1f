#include "tcsim/grid_path.hpp"

#include <algorithm>
#include <cmath>

#include "tcsim/errors.hpp"

namespace tcsim {

GridPath::GridPath(std::vector<double> times, std::vector<double> values, PathKind kind)
    : times_(std::move(times)), values_(std::move(values)), kind_(kind) {
  if (times_.size() < 2) throw StructuralError("GridPath: need at least the endpoints 0 and 1");
  if (times_.size() != values_.size())
    throw StructuralError("GridPath: times and values lengths differ");
  if (times_.front() != 0.0 || times_.back() != 1.0)
    throw StructuralError("GridPath: times must start at 0 and end at 1");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw StructuralError("GridPath: times must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v)) throw StructuralError("GridPath: values must be finite");
}

GridPath GridPath::constant(double value, PathKind kind) {
  return GridPath({0.0, 1.0}, {value, value}, kind);
}

GridPath GridPath::zero(PathKind kind) { return constant(0.0, kind); }

double GridPath::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("eval_path: t outside [0,1]");
  // Last breakpoint <= t.
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (kind_ == PathKind::PiecewiseConstant || i + 1 == times_.size()) return values_[i];
  const double t0 = times_[i], t1 = times_[i + 1];
  const double w = (t - t0) / (t1 - t0);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double GridPath::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

double eval_path(const GridPath& p, double t) { return p(t); }
double sup_norm(const GridPath& p) { return p.sup_norm(); }

namespace {

// Interior times where a step path actually jumps.
void append_jump_pre_times(const GridPath& p, std::vector<double>& out) {
  const auto& t = p.times();
  const auto& v = p.values();
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (v[i] != v[i - 1]) {
      const double pre = std::nextafter(t[i], 0.0);
      if (pre > 0.0) out.push_back(pre);
    }
  }
}

}  // namespace

GridPath combine(double a, const GridPath& p, double b, const GridPath& q) {
  const bool mixed = p.kind() != q.kind();
  const PathKind kind = mixed ? PathKind::PiecewiseLinear : p.kind();

  std::vector<double> grid;
  grid.reserve(p.size() + q.size() + 8);
  grid.insert(grid.end(), p.times().begin(), p.times().end());
  grid.insert(grid.end(), q.times().begin(), q.times().end());
  if (mixed) {
    if (p.kind() == PathKind::PiecewiseConstant) append_jump_pre_times(p, grid);
    if (q.kind() == PathKind::PiecewiseConstant) append_jump_pre_times(q, grid);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(a * p(t) + b * q(t));
  return GridPath(std::move(grid), std::move(values), kind);
}

double integral(const GridPath& p) {
  const auto& t = p.times();
  const auto& v = p.values();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i];
    acc += (p.kind() == PathKind::PiecewiseConstant) ? v[i] * dt
                                                     : 0.5 * (v[i] + v[i + 1]) * dt;
  }
  return acc;
}

}  // namespace tcsim
