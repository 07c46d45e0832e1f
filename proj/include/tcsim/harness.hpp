#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tcsim/functionals.hpp"
#include "tcsim/io.hpp"
#include "tcsim/samplers.hpp"
#include "tcsim/time_change.hpp"

namespace tcsim {

enum class Coupling { Independent, CommonRandom, Lookdown };
Coupling parse_coupling(std::string_view s);
const char* coupling_name(Coupling c);

// One configured process sampler: id plus the parameters it reads.
struct SamplerSpec {
  std::string id;      // base id, e.g. "scaled_rw:rademacher", "mn"
  ModelParams params;  // n, nu1, nu2, x0
  double dt = 1e-3;
  int grid_cells = 256;
  TimeChange s = TimeChange::identity();

  std::string base() const;        // id up to the first ':'
  StepDist step_dist() const;      // for scaled_rw ids
  GridPath sample(const StreamKey& key) const;

  static SamplerSpec from_config(const std::string& id, const KvConfig& cfg,
                                 const std::string& role = "");
};

struct GapEstimate {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double diff = 0.0;    // mean_a - mean_b
  double stderr_ = 0.0;
  double ci95 = 0.0;    // 1.96 * stderr
  std::int64_t n_paths = 0;
  std::string coupling;
  std::uint64_t seed = 0;
  std::string functional;
};

// Monte Carlo estimate of E g(A) - E g(B), paired under common-random or
// lookdown coupling, pooled-variance otherwise. Deterministic for fixed
// (config, seed) regardless of worker count.
GapEstimate estimate_gap(const FunctionalSpec& g, const SamplerSpec& a,
                         const SamplerSpec& b, std::int64_t n_paths, Coupling coupling,
                         std::uint64_t seed, int workers = 1);

// Dominating theorem bound for the pair, scaled by the functional's certified
// norm bound; nullopt when no shipped bound applies to the pair.
std::optional<double> pair_bound(const FunctionalSpec& g, const SamplerSpec& a,
                                 const SamplerSpec& b);

struct RatePoint {
  std::int64_t n = 0;
  GapEstimate gap;
  double bound = 0.0;
  std::uint64_t seed = 0;
};

std::vector<RatePoint> rate_sweep(const FunctionalSpec& g, SamplerSpec a, SamplerSpec b,
                                  const std::vector<std::int64_t>& n_list,
                                  std::int64_t n_paths, Coupling coupling,
                                  std::uint64_t seed, int workers = 1);

std::string rate_points_to_csv(const std::vector<RatePoint>& pts);
std::string gap_to_json(const GapEstimate& gap, std::optional<double> bound);

struct SlopeFit {
  double slope = 0.0;
  double se = 0.0;
  int used = 0;
  int dropped = 0;  // nonpositive values filtered before the log-log fit
};

// Least-squares slope of log(value) against log(n); needs >= 4 surviving
// points, else ConfigError.
SlopeFit fit_rate(const std::vector<double>& ns, const std::vector<double>& values);

// Deterministic fixed-order pairwise sum.
double pairwise_sum(const std::vector<double>& xs);

// Runs f(i) for i in [0, count) across the given number of workers; results
// must be written into index-addressed slots by the caller.
void parallel_for_indexed(std::int64_t count, int workers,
                          const std::function<void(std::int64_t)>& f);

struct RunResult {
  int status = 0;  // 0 ok, 4 failed --assert check
  std::string output;
  std::string manifest;
};

// Executes one CLI subcommand ("simulate", "bound", "gap", "rate",
// "stein-check", "holding-prob") against a flat key=value configuration.
RunResult run_subcommand(const std::string& sub, const KvConfig& cfg);

TimeChange parse_time_change(std::string_view spec);

}  // namespace tcsim
