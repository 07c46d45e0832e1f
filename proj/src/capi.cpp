#include "tcsim.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "tcsim/bounds.hpp"
#include "tcsim/errors.hpp"
#include "tcsim/functionals.hpp"
#include "tcsim/grid_path.hpp"
#include "tcsim/harness.hpp"
#include "tcsim/io.hpp"
#include "tcsim/samplers.hpp"
#include "tcsim/stein.hpp"
#include "tcsim/time_change.hpp"

struct tcsim_path {
  tcsim::GridPath p;
};
struct tcsim_timechange {
  tcsim::TimeChange s;
};
struct tcsim_functional {
  tcsim::FunctionalSpec g;
};
struct tcsim_breakdown {
  tcsim::BoundBreakdown b;
};

namespace {

thread_local std::string tl_error;

void set_error(const char* msg) { tl_error = msg ? msg : ""; }

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
tcsim_status guarded(F&& f) {
  try {
    return f();
  } catch (const tcsim::ConfigError& e) {
    set_error(e.what());
    return TCSIM_ERR_CONFIG;
  } catch (const tcsim::DomainError& e) {
    set_error(e.what());
    return TCSIM_ERR_DOMAIN;
  } catch (const tcsim::StructuralError& e) {
    set_error(e.what());
    return TCSIM_ERR_DOMAIN;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return TCSIM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return TCSIM_ERR_INTERNAL;
  }
}

tcsim_status need(const void* p, const char* what) {
  if (p != nullptr) return TCSIM_OK;
  set_error(what);
  return TCSIM_ERR_CONFIG;
}

tcsim::StreamKey make_key(uint64_t root, const char* lane, uint64_t index) {
  return {root, lane ? std::string(lane) : std::string(), index};
}

tcsim::RateKind parse_rate_kind(const char* kind) {
  const std::string k = kind ? kind : "";
  if (k == "R1") return tcsim::RateKind::R1;
  if (k == "Rm1") return tcsim::RateKind::Rm1;
  if (k == "R1_limit") return tcsim::RateKind::R1Limit;
  if (k == "In") return tcsim::RateKind::In;
  if (k == "I_limit") return tcsim::RateKind::ILimit;
  throw tcsim::ConfigError("unknown rate kind '" + k + "'");
}

}  // namespace

extern "C" {

const char* tcsim_version(void) { return tcsim::kVersion; }

const char* tcsim_last_error(void) { return tl_error.c_str(); }

void tcsim_string_free(char* s) { delete[] s; }

/* ------------------------------- paths -------------------------------- */

tcsim_status tcsim_path_new(const double* times, const double* values, size_t len,
                            int piecewise_linear, tcsim_path** out) {
  if (auto st = need(out, "tcsim_path_new: out is null")) return st;
  if (auto st = need(times, "tcsim_path_new: times is null")) return st;
  if (auto st = need(values, "tcsim_path_new: values is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::GridPath(
        std::vector<double>(times, times + len), std::vector<double>(values, values + len),
        piecewise_linear ? tcsim::PathKind::PiecewiseLinear
                         : tcsim::PathKind::PiecewiseConstant)};
    return TCSIM_OK;
  });
}

void tcsim_path_free(tcsim_path* p) { delete p; }

size_t tcsim_path_size(const tcsim_path* p) { return p ? p->p.size() : 0; }

tcsim_status tcsim_path_data(const tcsim_path* p, const double** times,
                             const double** values, int* piecewise_linear) {
  if (auto st = need(p, "tcsim_path_data: path is null")) return st;
  if (times) *times = p->p.times().data();
  if (values) *values = p->p.values().data();
  if (piecewise_linear)
    *piecewise_linear = p->p.kind() == tcsim::PathKind::PiecewiseLinear ? 1 : 0;
  return TCSIM_OK;
}

tcsim_status tcsim_path_eval(const tcsim_path* p, double t, double* out) {
  if (auto st = need(p, "tcsim_path_eval: path is null")) return st;
  if (auto st = need(out, "tcsim_path_eval: out is null")) return st;
  return guarded([&] {
    *out = p->p(t);
    return TCSIM_OK;
  });
}

tcsim_status tcsim_path_sup_norm(const tcsim_path* p, double* out) {
  if (auto st = need(p, "tcsim_path_sup_norm: path is null")) return st;
  if (auto st = need(out, "tcsim_path_sup_norm: out is null")) return st;
  *out = p->p.sup_norm();
  return TCSIM_OK;
}

tcsim_status tcsim_path_integral(const tcsim_path* p, double* out) {
  if (auto st = need(p, "tcsim_path_integral: path is null")) return st;
  if (auto st = need(out, "tcsim_path_integral: out is null")) return st;
  *out = tcsim::integral(p->p);
  return TCSIM_OK;
}

tcsim_status tcsim_path_combine(double a, const tcsim_path* p, double b,
                                const tcsim_path* q, tcsim_path** out) {
  if (auto st = need(p, "tcsim_path_combine: p is null")) return st;
  if (auto st = need(q, "tcsim_path_combine: q is null")) return st;
  if (auto st = need(out, "tcsim_path_combine: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::combine(a, p->p, b, q->p)};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_path_to_csv(const tcsim_path* p, char** out) {
  if (auto st = need(p, "tcsim_path_to_csv: path is null")) return st;
  if (auto st = need(out, "tcsim_path_to_csv: out is null")) return st;
  return guarded([&] {
    *out = dup_string(tcsim::path_to_csv(p->p));
    return TCSIM_OK;
  });
}

tcsim_status tcsim_path_from_csv(const char* csv, tcsim_path** out) {
  if (auto st = need(csv, "tcsim_path_from_csv: csv is null")) return st;
  if (auto st = need(out, "tcsim_path_from_csv: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::path_from_csv(csv)};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_path_to_json(const tcsim_path* p, char** out) {
  if (auto st = need(p, "tcsim_path_to_json: path is null")) return st;
  if (auto st = need(out, "tcsim_path_to_json: out is null")) return st;
  return guarded([&] {
    *out = dup_string(tcsim::path_to_json(p->p));
    return TCSIM_OK;
  });
}

tcsim_status tcsim_path_from_json(const char* json, tcsim_path** out) {
  if (auto st = need(json, "tcsim_path_from_json: json is null")) return st;
  if (auto st = need(out, "tcsim_path_from_json: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::path_from_json(json)};
    return TCSIM_OK;
  });
}

/* ---------------------------- time changes ---------------------------- */

tcsim_status tcsim_timechange_parse(const char* spec, tcsim_timechange** out) {
  if (auto st = need(spec, "tcsim_timechange_parse: spec is null")) return st;
  if (auto st = need(out, "tcsim_timechange_parse: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_timechange{tcsim::parse_time_change(spec)};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_timechange_tabulated(const tcsim_path* table, tcsim_timechange** out) {
  if (auto st = need(table, "tcsim_timechange_tabulated: table is null")) return st;
  if (auto st = need(out, "tcsim_timechange_tabulated: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_timechange{tcsim::TimeChange::tabulated(table->p)};
    return TCSIM_OK;
  });
}

void tcsim_timechange_free(tcsim_timechange* s) { delete s; }

tcsim_status tcsim_timechange_eval(const tcsim_timechange* s, double t, double* out) {
  if (auto st = need(s, "tcsim_timechange_eval: handle is null")) return st;
  if (auto st = need(out, "tcsim_timechange_eval: out is null")) return st;
  return guarded([&] {
    *out = s->s(t);
    return TCSIM_OK;
  });
}

tcsim_status tcsim_timechange_total(const tcsim_timechange* s, double* out) {
  if (auto st = need(s, "tcsim_timechange_total: handle is null")) return st;
  if (auto st = need(out, "tcsim_timechange_total: out is null")) return st;
  *out = s->s.total();
  return TCSIM_OK;
}

tcsim_status tcsim_timechange_inverse(const tcsim_timechange* s, double y, double* out) {
  if (auto st = need(s, "tcsim_timechange_inverse: handle is null")) return st;
  if (auto st = need(out, "tcsim_timechange_inverse: out is null")) return st;
  return guarded([&] {
    *out = s->s.inverse(y);
    return TCSIM_OK;
  });
}

tcsim_status tcsim_uniform_distance(const tcsim_timechange* s,
                                    const tcsim_timechange* s2, double* out) {
  if (auto st = need(s, "tcsim_uniform_distance: s is null")) return st;
  if (auto st = need(s2, "tcsim_uniform_distance: s2 is null")) return st;
  if (auto st = need(out, "tcsim_uniform_distance: out is null")) return st;
  return guarded([&] {
    *out = tcsim::uniform_distance(s->s, s2->s);
    return TCSIM_OK;
  });
}

tcsim_status tcsim_integrated_rate(const tcsim_path* x, double nu1, double nu2,
                                   const char* kind, int64_t n, tcsim_path** out) {
  if (auto st = need(x, "tcsim_integrated_rate: x is null")) return st;
  if (auto st = need(out, "tcsim_integrated_rate: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::integrated_rate(x->p, nu1, nu2, parse_rate_kind(kind), n)};
    return TCSIM_OK;
  });
}

/* ----------------------------- functionals ---------------------------- */

tcsim_status tcsim_functional_parse(const char* id, tcsim_functional** out) {
  if (auto st = need(id, "tcsim_functional_parse: id is null")) return st;
  if (auto st = need(out, "tcsim_functional_parse: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_functional{tcsim::FunctionalSpec::parse(id)};
    return TCSIM_OK;
  });
}

void tcsim_functional_free(tcsim_functional* g) { delete g; }

tcsim_status tcsim_functional_eval(const tcsim_functional* g, const tcsim_path* p,
                                   double* out) {
  if (auto st = need(g, "tcsim_functional_eval: functional is null")) return st;
  if (auto st = need(p, "tcsim_functional_eval: path is null")) return st;
  if (auto st = need(out, "tcsim_functional_eval: out is null")) return st;
  return guarded([&] {
    *out = g->g(p->p);
    return TCSIM_OK;
  });
}

tcsim_status tcsim_functional_diff(const tcsim_functional* g, const tcsim_path* p,
                                   const tcsim_path* h, const tcsim_path* k, int order,
                                   double* out) {
  if (auto st = need(g, "tcsim_functional_diff: functional is null")) return st;
  if (auto st = need(p, "tcsim_functional_diff: p is null")) return st;
  if (auto st = need(h, "tcsim_functional_diff: h is null")) return st;
  if (auto st = need(out, "tcsim_functional_diff: out is null")) return st;
  return guarded([&] {
    *out = tcsim::differentiate(g->g, p->p, h->p, k ? &k->p : nullptr, order);
    return TCSIM_OK;
  });
}

tcsim_status tcsim_functional_m_norm_bound(const tcsim_functional* g, double* out) {
  if (auto st = need(g, "tcsim_functional_m_norm_bound: functional is null")) return st;
  if (auto st = need(out, "tcsim_functional_m_norm_bound: out is null")) return st;
  return guarded([&] {
    *out = g->g.m_norm_bound();
    return TCSIM_OK;
  });
}

tcsim_status tcsim_frechet_check(const tcsim_functional* g, int trials, uint64_t seed,
                                 char** json_report) {
  if (auto st = need(g, "tcsim_frechet_check: functional is null")) return st;
  if (auto st = need(json_report, "tcsim_frechet_check: out is null")) return st;
  return guarded([&] {
    const tcsim::FrechetReport r = tcsim::frechet_check(g->g, trials, seed);
    nlohmann::json j;
    j["functional"] = g->g.id();
    j["trials"] = r.trials;
    j["violations"] = r.violations;
    j["max_ratio"] = r.max_ratio;
    j["bound"] = r.bound;
    *json_report = dup_string(j.dump());
    return TCSIM_OK;
  });
}

/* ------------------------------ samplers ------------------------------ */

tcsim_status tcsim_sim_scaled_rw(int64_t n, const char* step_dist,
                                 const tcsim_timechange* s, uint64_t root,
                                 const char* lane, uint64_t index, tcsim_path** out) {
  if (auto st = need(step_dist, "tcsim_sim_scaled_rw: step_dist is null")) return st;
  if (auto st = need(s, "tcsim_sim_scaled_rw: time change is null")) return st;
  if (auto st = need(out, "tcsim_sim_scaled_rw: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::sim_scaled_rw(n, tcsim::parse_step_dist(step_dist), s->s,
                                               make_key(root, lane, index))};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_sim_discretized_bm(int64_t n, const tcsim_timechange* s,
                                      uint64_t root, const char* lane, uint64_t index,
                                      tcsim_path** out) {
  if (auto st = need(s, "tcsim_sim_discretized_bm: time change is null")) return st;
  if (auto st = need(out, "tcsim_sim_discretized_bm: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::sim_discretized_bm(n, s->s, make_key(root, lane, index))};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_sim_time_changed_bm(const tcsim_timechange* s, const double* grid,
                                       size_t grid_len, uint64_t root, const char* lane,
                                       uint64_t index, tcsim_path** out) {
  if (auto st = need(s, "tcsim_sim_time_changed_bm: time change is null")) return st;
  if (auto st = need(grid, "tcsim_sim_time_changed_bm: grid is null")) return st;
  if (auto st = need(out, "tcsim_sim_time_changed_bm: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::sim_time_changed_bm(
        s->s, std::span<const double>(grid, grid_len), make_key(root, lane, index))};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_sim_compensated_poisson(int64_t n, const tcsim_timechange* Sn,
                                           uint64_t root, const char* lane,
                                           uint64_t index, tcsim_path** out) {
  if (auto st = need(Sn, "tcsim_sim_compensated_poisson: time change is null")) return st;
  if (auto st = need(out, "tcsim_sim_compensated_poisson: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{
        tcsim::sim_compensated_poisson(n, Sn->s, make_key(root, lane, index))};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_sim_moran(int64_t n, double nu1, double nu2, double x0,
                             uint64_t root, const char* lane, uint64_t index,
                             tcsim_path** out) {
  if (auto st = need(out, "tcsim_sim_moran: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{
        tcsim::sim_moran({n, nu1, nu2, x0}, make_key(root, lane, index))};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_sim_wright_fisher(double nu1, double nu2, double x0, double dt,
                                     uint64_t root, const char* lane, uint64_t index,
                                     tcsim_path** out) {
  if (auto st = need(out, "tcsim_sim_wright_fisher: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{
        tcsim::sim_wright_fisher({1, nu1, nu2, x0}, dt, make_key(root, lane, index))};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_sim_mn(int64_t n, double nu1, double nu2, double x0, uint64_t root,
                          const char* lane, uint64_t index, tcsim_path** out) {
  if (auto st = need(out, "tcsim_sim_mn: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{tcsim::sim_mn({n, nu1, nu2, x0}, make_key(root, lane, index))};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_sim_m(double nu1, double nu2, double x0, double dt, uint64_t root,
                         const char* lane, uint64_t index, tcsim_path** out) {
  if (auto st = need(out, "tcsim_sim_m: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_path{
        tcsim::sim_m({1, nu1, nu2, x0}, dt, make_key(root, lane, index))};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_lookdown_marginals(const tcsim_path* x, int64_t n,
                                      const double* grid, size_t grid_len,
                                      uint64_t root, const char* lane, uint64_t index,
                                      double* out_values) {
  if (auto st = need(x, "tcsim_lookdown_marginals: path is null")) return st;
  if (auto st = need(grid, "tcsim_lookdown_marginals: grid is null")) return st;
  if (auto st = need(out_values, "tcsim_lookdown_marginals: out is null")) return st;
  return guarded([&] {
    const auto vals = tcsim::lookdown_marginals(
        x->p, n, std::span<const double>(grid, grid_len), make_key(root, lane, index));
    std::memcpy(out_values, vals.data(), vals.size() * sizeof(double));
    return TCSIM_OK;
  });
}

/* ------------------------------- bounds ------------------------------- */

tcsim_status tcsim_bound_thm1(int64_t n, double s1, double m3, double gm,
                              tcsim_breakdown** out) {
  if (auto st = need(out, "tcsim_bound_thm1: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_breakdown{tcsim::bound_thm1(n, s1, m3, gm)};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_bound_thm2(int64_t n, double S1, double Sn1, double dist, double gm,
                              tcsim_breakdown** out) {
  if (auto st = need(out, "tcsim_bound_thm2: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_breakdown{tcsim::bound_thm2(n, S1, Sn1, dist, gm)};
    return TCSIM_OK;
  });
}

tcsim_status tcsim_bound_thm3(int64_t n, double nu1, double nu2, double gm,
                              int simplified, tcsim_breakdown** out) {
  if (auto st = need(out, "tcsim_bound_thm3: out is null")) return st;
  return guarded([&] {
    *out = new tcsim_breakdown{tcsim::bound_thm3(n, nu1, nu2, gm, simplified != 0)};
    return TCSIM_OK;
  });
}

void tcsim_breakdown_free(tcsim_breakdown* b) { delete b; }

tcsim_status tcsim_breakdown_total(const tcsim_breakdown* b, double* out) {
  if (auto st = need(b, "tcsim_breakdown_total: handle is null")) return st;
  if (auto st = need(out, "tcsim_breakdown_total: out is null")) return st;
  *out = b->b.total;
  return TCSIM_OK;
}

size_t tcsim_breakdown_terms(const tcsim_breakdown* b) {
  return b ? b->b.terms.size() : 0;
}

tcsim_status tcsim_breakdown_term(const tcsim_breakdown* b, size_t i,
                                  const char** label, double* value) {
  if (auto st = need(b, "tcsim_breakdown_term: handle is null")) return st;
  if (i >= b->b.terms.size()) {
    set_error("tcsim_breakdown_term: index out of range");
    return TCSIM_ERR_CONFIG;
  }
  if (label) *label = b->b.terms[i].first.c_str();
  if (value) *value = b->b.terms[i].second;
  return TCSIM_OK;
}

tcsim_status tcsim_breakdown_to_json(const tcsim_breakdown* b, char** out) {
  if (auto st = need(b, "tcsim_breakdown_to_json: handle is null")) return st;
  if (auto st = need(out, "tcsim_breakdown_to_json: out is null")) return st;
  return guarded([&] {
    *out = dup_string(tcsim::breakdown_to_json(b->b));
    return TCSIM_OK;
  });
}

tcsim_status tcsim_bm_modulus_bounds(int64_t n, double s1, double out_k[3]) {
  if (auto st = need(out_k, "tcsim_bm_modulus_bounds: out is null")) return st;
  return guarded([&] {
    const tcsim::BmModulus m = tcsim::bm_modulus_bounds(n, s1);
    out_k[0] = m.k1;
    out_k[1] = m.k2;
    out_k[2] = m.k3;
    return TCSIM_OK;
  });
}

tcsim_status tcsim_doob_l3_bound(double s1, double* out) {
  if (auto st = need(out, "tcsim_doob_l3_bound: out is null")) return st;
  return guarded([&] {
    *out = tcsim::doob_l3_bound(s1);
    return TCSIM_OK;
  });
}

tcsim_status tcsim_poisson_abs3_moment(double* out) {
  if (auto st = need(out, "tcsim_poisson_abs3_moment: out is null")) return st;
  *out = tcsim::poisson_abs3_moment();
  return TCSIM_OK;
}

tcsim_status tcsim_min_holding_prob(double lambda, double* out) {
  if (auto st = need(out, "tcsim_min_holding_prob: out is null")) return st;
  return guarded([&] {
    *out = tcsim::min_holding_prob(lambda);
    return TCSIM_OK;
  });
}

/* ------------------------------- stein -------------------------------- */

tcsim_status tcsim_ou_semigroup(const tcsim_functional* g, const tcsim_path* w,
                                double u, int64_t n, const tcsim_timechange* s,
                                int64_t samples, uint64_t root, const char* lane,
                                uint64_t index, double* value, double* se) {
  if (auto st = need(g, "tcsim_ou_semigroup: functional is null")) return st;
  if (auto st = need(w, "tcsim_ou_semigroup: path is null")) return st;
  if (auto st = need(s, "tcsim_ou_semigroup: time change is null")) return st;
  if (auto st = need(value, "tcsim_ou_semigroup: value out is null")) return st;
  return guarded([&] {
    const tcsim::MCValue r =
        tcsim::ou_semigroup(g->g, w->p, u, n, s->s, samples, make_key(root, lane, index));
    *value = r.value;
    if (se) *se = r.se;
    return TCSIM_OK;
  });
}

tcsim_status tcsim_generator_apply(const tcsim_functional* g, const tcsim_path* w,
                                   int64_t n, const tcsim_timechange* s, double* out) {
  if (auto st = need(g, "tcsim_generator_apply: functional is null")) return st;
  if (auto st = need(w, "tcsim_generator_apply: path is null")) return st;
  if (auto st = need(s, "tcsim_generator_apply: time change is null")) return st;
  if (auto st = need(out, "tcsim_generator_apply: out is null")) return st;
  return guarded([&] {
    *out = tcsim::generator_apply(g->g, w->p, n, s->s);
    return TCSIM_OK;
  });
}

tcsim_status tcsim_stein_solution(const tcsim_functional* g, const tcsim_path* w,
                                  int64_t n, const tcsim_timechange* s, double u_max,
                                  int nodes, int64_t samples, uint64_t root,
                                  const char* lane, uint64_t index, double* value,
                                  double* error) {
  if (auto st = need(g, "tcsim_stein_solution: functional is null")) return st;
  if (auto st = need(w, "tcsim_stein_solution: path is null")) return st;
  if (auto st = need(s, "tcsim_stein_solution: time change is null")) return st;
  if (auto st = need(value, "tcsim_stein_solution: value out is null")) return st;
  return guarded([&] {
    tcsim::SteinSolveOptions opt;
    opt.u_max = u_max;
    opt.quad_nodes = nodes;
    opt.samples = samples;
    const tcsim::SteinValue r =
        tcsim::stein_solution(g->g, w->p, n, s->s, opt, make_key(root, lane, index));
    *value = r.value;
    if (error) *error = r.error;
    return TCSIM_OK;
  });
}

tcsim_status tcsim_stein_identity_residual(const tcsim_functional* g,
                                           const char* target, int64_t n,
                                           const tcsim_timechange* s, int64_t samples,
                                           uint64_t root, const char* lane,
                                           uint64_t index, double* value, double* se) {
  if (auto st = need(g, "tcsim_stein_identity_residual: functional is null")) return st;
  if (auto st = need(target, "tcsim_stein_identity_residual: target is null")) return st;
  if (auto st = need(s, "tcsim_stein_identity_residual: time change is null")) return st;
  if (auto st = need(value, "tcsim_stein_identity_residual: value out is null")) return st;
  return guarded([&] {
    const tcsim::MCValue r = tcsim::stein_identity_residual(
        g->g, target, n, s->s, samples, make_key(root, lane, index));
    *value = r.value;
    if (se) *se = r.se;
    return TCSIM_OK;
  });
}

/* ------------------------------ harness ------------------------------- */

tcsim_status tcsim_run(const char* subcommand, const char* config_text, char** output,
                       char** manifest) {
  if (auto st = need(subcommand, "tcsim_run: subcommand is null")) return st;
  if (auto st = need(config_text, "tcsim_run: config_text is null")) return st;
  return guarded([&] {
    const tcsim::RunResult r =
        tcsim::run_subcommand(subcommand, tcsim::parse_kv_text(config_text));
    if (output) *output = dup_string(r.output);
    if (manifest) *manifest = dup_string(r.manifest);
    return r.status == 4 ? TCSIM_ERR_ASSERT : TCSIM_OK;
  });
}

}  // extern "C"
