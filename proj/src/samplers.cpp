#include "tcsim/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "tcsim/errors.hpp"

namespace tcsim {
namespace {

constexpr double kSqrt8OverPi = 1.5957691216057308;  // E|N(0,1)|^3

// Append (t, v), merging onto the previous node when times collide in fp.
void push_node(std::vector<double>& ts, std::vector<double>& vs, double t, double v) {
  if (!ts.empty() && t <= ts.back()) {
    vs.back() = v;
    return;
  }
  ts.push_back(t);
  vs.push_back(v);
}

GridPath finish_path(std::vector<double> ts, std::vector<double> vs, PathKind kind) {
  if (ts.empty() || ts.front() != 0.0) {
    ts.insert(ts.begin(), 0.0);
    vs.insert(vs.begin(), vs.empty() ? 0.0 : vs.front());
  }
  if (ts.back() < 1.0) {
    ts.push_back(1.0);
    vs.push_back(vs.back());
  }
  return GridPath(std::move(ts), std::move(vs), kind);
}

}  // namespace

void ModelParams::validate(bool require_integral_x0) const {
  if (n < 1) throw DomainError("ModelParams: need n >= 1");
  if (nu1 < 0.0 || nu2 < 0.0) throw DomainError("ModelParams: mutation rates must be >= 0");
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("ModelParams: x0 outside [0,1]");
  if (require_integral_x0) {
    const double k = x0 * static_cast<double>(n);
    if (std::fabs(k - std::llround(k)) > 1e-9)
      throw DomainError("ModelParams: n*x0 must be integral for the chain");
  }
}

StepDist parse_step_dist(std::string_view s) {
  if (s == "rademacher") return StepDist::Rademacher;
  if (s == "centered_poisson1") return StepDist::CenteredPoisson1;
  if (s == "std_normal") return StepDist::StdNormal;
  if (s == "zero") return StepDist::Zero;
  throw ConfigError("unknown step distribution '" + std::string(s) + "'");
}

double abs3_moment(StepDist d) {
  switch (d) {
    case StepDist::Rademacher: return 1.0;
    case StepDist::CenteredPoisson1: return 1.0 + 2.0 / std::exp(1.0);
    case StepDist::StdNormal: return kSqrt8OverPi;
    case StepDist::Zero: return 0.0;
  }
  return 0.0;
}

namespace {

double draw_step(Rng& rng, StepDist d) {
  switch (d) {
    case StepDist::Rademacher: return rng.uniform() < 0.5 ? 1.0 : -1.0;
    case StepDist::CenteredPoisson1: return static_cast<double>(rng.poisson(1.0)) - 1.0;
    case StepDist::StdNormal: return rng.normal();
    case StepDist::Zero: return 0.0;
  }
  return 0.0;
}

}  // namespace

GridPath sim_scaled_rw(std::int64_t n, StepDist dist, const TimeChange& s,
                       const StreamKey& key) {
  if (n < 1) throw DomainError("sim_scaled_rw: need n >= 1");
  const double nd = static_cast<double>(n);
  const auto m = static_cast<std::int64_t>(std::floor(nd * s.total()));
  Rng rng(key);
  std::vector<double> ts{0.0}, vs{0.0};
  double sum = 0.0;
  const double root_n = std::sqrt(nd);
  for (std::int64_t i = 1; i <= m; ++i) {
    sum += draw_step(rng, dist);
    push_node(ts, vs, s.inverse(static_cast<double>(i) / nd), sum / root_n);
  }
  return finish_path(std::move(ts), std::move(vs), PathKind::PiecewiseConstant);
}

GridPath sim_discretized_bm(std::int64_t n, const TimeChange& s, const StreamKey& key) {
  return sim_scaled_rw(n, StepDist::StdNormal, s, key);
}

GridPath sim_time_changed_bm(const TimeChange& s, std::span<const double> grid,
                             const StreamKey& key) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
    throw StructuralError("sim_time_changed_bm: grid must span [0,1]");
  Rng rng(key);
  std::vector<double> ts(grid.begin(), grid.end());
  std::vector<double> vs(ts.size());
  vs[0] = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!(ts[i] > ts[i - 1]))
      throw StructuralError("sim_time_changed_bm: grid must be strictly increasing");
    const double dv = s(ts[i]) - s(ts[i - 1]);
    vs[i] = vs[i - 1] + std::sqrt(std::max(dv, 0.0)) * rng.normal();
  }
  return GridPath(std::move(ts), std::move(vs), PathKind::PiecewiseLinear);
}

GridPath sim_compensated_poisson(std::int64_t n, const TimeChange& Sn,
                                 const StreamKey& key) {
  if (n < 1) throw DomainError("sim_compensated_poisson: need n >= 1");
  const double nd = static_cast<double>(n);
  const double total_op = nd * Sn.total();
  if (total_op == 0.0) return GridPath::zero(PathKind::PiecewiseLinear);
  const double root_n = std::sqrt(nd);

  // Event times in [0,1].
  Rng rng(key);
  std::vector<double> events;
  double op = rng.exponential();
  while (op < total_op) {
    events.push_back(Sn.inverse(op / nd));
    op += rng.exponential();
  }

  // Compensator slope changes: tabulated breakpoints keep the representation
  // exact; curved closed forms get a uniform refinement.
  std::vector<double> extra;
  if (const GridPath* tab = Sn.table()) {
    extra.assign(tab->times().begin(), tab->times().end());
  } else if (Sn.form() == TimeChange::Form::Power) {
    for (int i = 1; i < 256; ++i) extra.push_back(i / 256.0);
  }

  std::vector<double> ts{0.0}, vs{0.0};
  std::size_t next_extra = 0;
  auto value_at = [&](double t, std::size_t count) {
    return (static_cast<double>(count) - nd * Sn(t)) / root_n;
  };
  for (std::size_t k = 0; k < events.size(); ++k) {
    const double tau = std::min(events[k], 1.0);
    while (next_extra < extra.size() && extra[next_extra] < tau) {
      if (extra[next_extra] > ts.back())
        push_node(ts, vs, extra[next_extra], value_at(extra[next_extra], k));
      ++next_extra;
    }
    const double pre = std::nextafter(tau, 0.0);
    if (pre > ts.back()) push_node(ts, vs, pre, value_at(pre, k));
    push_node(ts, vs, tau, value_at(tau, k + 1));
  }
  while (next_extra < extra.size()) {
    if (extra[next_extra] > ts.back() && extra[next_extra] < 1.0)
      push_node(ts, vs, extra[next_extra], value_at(extra[next_extra], events.size()));
    ++next_extra;
  }
  if (ts.back() < 1.0) push_node(ts, vs, 1.0, value_at(1.0, events.size()));
  return finish_path(std::move(ts), std::move(vs), PathKind::PiecewiseLinear);
}

GridPath sim_moran(const ModelParams& params, const StreamKey& key) {
  params.validate(true);
  const std::int64_t n = params.n;
  const double nd = static_cast<double>(n);
  std::int64_t k = std::llround(params.x0 * nd);
  Rng rng(key);
  std::vector<double> ts{0.0}, vs{static_cast<double>(k) / nd};
  double t = 0.0;
  for (;;) {
    const double kd = static_cast<double>(k);
    const double resample = 0.5 * kd * (nd - kd);
    const double up = resample + params.nu2 * (nd - kd);
    const double down = resample + params.nu1 * kd;
    const double rate = up + down;
    if (rate <= 0.0) break;  // absorbing corner with no mutation pressure
    t += rng.exponential() / rate;
    if (t >= 1.0) break;
    k += (rng.uniform() * rate < up) ? 1 : -1;
    push_node(ts, vs, t, static_cast<double>(k) / nd);
  }
  return finish_path(std::move(ts), std::move(vs), PathKind::PiecewiseConstant);
}

GridPath sim_wright_fisher(const ModelParams& params, double dt, const StreamKey& key) {
  params.validate(false);
  if (!(dt > 0.0 && dt <= 1e-2)) throw ConfigError("sim_wright_fisher: need 0 < dt <= 1e-2");
  Rng rng(key);
  const auto steps = static_cast<std::int64_t>(std::ceil(1.0 / dt - 1e-12));
  std::vector<double> ts{0.0}, vs{params.x0};
  double x = params.x0;
  double t_prev = 0.0;
  for (std::int64_t i = 1; i <= steps; ++i) {
    const double t = (i == steps) ? 1.0 : dt * static_cast<double>(i);
    const double h = t - t_prev;
    const double drift = params.nu2 - (params.nu1 + params.nu2) * x;
    const double diff = std::sqrt(std::max(0.0, x * (1.0 - x)));
    x += drift * h + diff * std::sqrt(h) * rng.normal();
    x = std::clamp(x, 0.0, 1.0);
    push_node(ts, vs, t, x);
    t_prev = t;
  }
  return finish_path(std::move(ts), std::move(vs), PathKind::PiecewiseLinear);
}

namespace {

// Poisson event times in path time, mapped through the inverse of n2 * R.
std::vector<double> poisson_event_times(const TimeChange& R, double n2, Rng& rng) {
  std::vector<double> out;
  const double total = n2 * R.total();
  double op = rng.exponential();
  while (op < total) {
    out.push_back(R.inverse(op / n2));
    op += rng.exponential();
  }
  return out;
}

}  // namespace

GridPath sim_mn_given(const GridPath& xn, const ModelParams& params, const StreamKey& key) {
  params.validate(false);
  const double nd = static_cast<double>(params.n);
  const double n2 = nd * nd;
  const TimeChange r1 =
      integrated_rate_time_change(xn, params.nu1, params.nu2, RateKind::R1, params.n);
  const TimeChange rm1 =
      integrated_rate_time_change(xn, params.nu1, params.nu2, RateKind::Rm1, params.n);

  Rng rng_up(key.sub("p1"));
  Rng rng_down(key.sub("pm1"));
  const std::vector<double> ups = poisson_event_times(r1, n2, rng_up);
  const std::vector<double> downs = poisson_event_times(rm1, n2, rng_down);

  // Merge jump times with the driving chain's breakpoints (zero-delta nodes).
  std::vector<std::pair<double, int>> ev;
  ev.reserve(ups.size() + downs.size() + xn.size());
  for (double t : ups) ev.emplace_back(t, +1);
  for (double t : downs) ev.emplace_back(t, -1);
  for (double t : xn.times())
    if (t > 0.0 && t < 1.0) ev.emplace_back(t, 0);
  std::sort(ev.begin(), ev.end());

  std::vector<double> ts{0.0}, vs{0.0};
  std::int64_t count = 0;
  std::size_t i = 0;
  while (i < ev.size()) {
    const double t = ev[i].first;
    while (i < ev.size() && ev[i].first == t) count += ev[i++].second;
    if (t >= 1.0) break;
    push_node(ts, vs, t, static_cast<double>(count) / nd);
  }
  return finish_path(std::move(ts), std::move(vs), PathKind::PiecewiseConstant);
}

GridPath sim_mn(const ModelParams& params, const StreamKey& key) {
  params.validate(true);
  const GridPath xn = sim_moran(params, key.sub("xn"));
  return sim_mn_given(xn, params, key);
}

GridPath sim_m_given(const GridPath& x, const ModelParams& params, const StreamKey& key) {
  params.validate(false);
  GridPath half = integrated_rate(x, params.nu1, params.nu2, RateKind::R1Limit, 1);
  std::vector<double> rv = half.values();
  for (double& v : rv) v *= 2.0;  // int x(1-x)
  const GridPath drift = integrated_rate(x, params.nu1, params.nu2, RateKind::In, 1);

  Rng rng(key.sub("w"));
  const auto& ts = x.times();
  std::vector<double> vs(ts.size());
  vs[0] = 0.0;
  double w = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double dv = std::max(rv[i] - rv[i - 1], 0.0);
    w += std::sqrt(dv) * rng.normal();
    vs[i] = w + drift.values()[i];
  }
  return GridPath(ts, std::move(vs), PathKind::PiecewiseLinear);
}

GridPath sim_m(const ModelParams& params, double dt, const StreamKey& key) {
  const GridPath x = sim_wright_fisher(params, dt, key.sub("x"));
  return sim_m_given(x, params, key);
}

std::vector<double> lookdown_marginals(const GridPath& x, std::int64_t n,
                                       std::span<const double> grid,
                                       const StreamKey& key) {
  if (n < 1) throw DomainError("lookdown_marginals: need n >= 1");
  Rng rng(key);
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const double p = x(t);
    if (!(p >= 0.0 && p <= 1.0))
      throw DomainError("lookdown_marginals: driving path must stay in [0,1]");
    out.push_back(static_cast<double>(rng.binomial(n, p)) / static_cast<double>(n));
  }
  return out;
}

std::pair<GridPath, GridPath> sim_coupled_dbm_tcbm(std::int64_t n, const TimeChange& s,
                                                   std::span<const double> grid,
                                                   const StreamKey& key) {
  if (n < 1) throw DomainError("sim_coupled_dbm_tcbm: need n >= 1");
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
    throw StructuralError("sim_coupled_dbm_tcbm: grid must span [0,1]");
  const double nd = static_cast<double>(n);
  const auto m = static_cast<std::int64_t>(std::floor(nd * s.total()));

  // Operational-time grid: images of the path grid plus the lattice i/n.
  std::vector<double> op;
  op.reserve(grid.size() + static_cast<std::size_t>(m));
  for (double t : grid) op.push_back(s(t));
  for (std::int64_t i = 1; i <= m; ++i) op.push_back(static_cast<double>(i) / nd);
  std::sort(op.begin(), op.end());
  op.erase(std::unique(op.begin(), op.end()), op.end());

  Rng rng(key);
  std::vector<double> bval(op.size());
  double prev_op = 0.0, b = 0.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    b += std::sqrt(std::max(op[i] - prev_op, 0.0)) * rng.normal();
    prev_op = op[i];
    bval[i] = b;
  }
  auto b_at = [&](double u) {
    auto it = std::lower_bound(op.begin(), op.end(), u);
    if (it == op.end() || *it != u) throw StructuralError("coupled sampler: off-grid lookup");
    return bval[static_cast<std::size_t>(it - op.begin())];
  };

  std::vector<double> ats{0.0}, avs{0.0};
  for (std::int64_t i = 1; i <= m; ++i)
    push_node(ats, avs, s.inverse(static_cast<double>(i) / nd),
              b_at(static_cast<double>(i) / nd));
  GridPath a = finish_path(std::move(ats), std::move(avs), PathKind::PiecewiseConstant);

  std::vector<double> zts(grid.begin(), grid.end()), zvs(grid.size());
  for (std::size_t i = 0; i < zts.size(); ++i) zvs[i] = b_at(s(zts[i]));
  GridPath z(std::move(zts), std::move(zvs), PathKind::PiecewiseLinear);
  return {std::move(a), std::move(z)};
}

std::vector<double> uniform_grid(int cells) {
  if (cells < 1) throw ConfigError("uniform_grid: need at least one cell");
  std::vector<double> g(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) g[static_cast<std::size_t>(i)] = static_cast<double>(i) / cells;
  g.front() = 0.0;
  g.back() = 1.0;
  return g;
}

}  // namespace tcsim
