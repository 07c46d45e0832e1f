// Command-line front end; talks to the core exclusively through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tcsim.h"

namespace {

struct Options {
  std::string config_file;
  std::map<std::string, std::string> values;  // flag overrides, key = config key
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_file, "flat key=value config file");
  auto bind = [cmd, &opt](const std::string& flag, const std::string& key,
                          const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [key, &opt](const std::string& v) { opt.values[key] = v; }, help);
  };
  bind("--seed", "seed", "root seed (u64)");
  bind("--paths", "paths", "Monte Carlo path count");
  bind("--workers", "workers", "worker thread count");
  bind("--format", "format", "output format: csv|json");
  bind("--out", "out", "write output to this file (manifest goes to <out>.manifest.json)");
  cmd->add_flag_callback("--assert", [&opt] { opt.values["assert"] = "1"; },
                         "exit 4 when the subcommand's check fails");
}

void bind_key(CLI::App* cmd, Options& opt, const std::string& flag,
              const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [key, &opt](const std::string& v) { opt.values[key] = v; }, help);
}

std::string build_config_text(const Options& opt) {
  std::ostringstream out;
  if (!opt.config_file.empty()) {
    std::ifstream in(opt.config_file, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open config file '" << opt.config_file << "'\n";
      std::exit(2);
    }
    out << in.rdbuf() << "\n";
  }
  for (const auto& [k, v] : opt.values) out << k << " = " << v << "\n";  // overrides
  return out.str();
}

int exit_code(tcsim_status st) {
  switch (st) {
    case TCSIM_OK: return 0;
    case TCSIM_ERR_CONFIG: return 2;
    case TCSIM_ERR_DOMAIN: return 3;
    case TCSIM_ERR_ASSERT: return 4;
    default: return 5;
  }
}

int run(const std::string& sub, const Options& opt) {
  const std::string cfg = build_config_text(opt);
  char* output = nullptr;
  char* manifest = nullptr;
  const tcsim_status st = tcsim_run(sub.c_str(), cfg.c_str(), &output, &manifest);
  if (st != TCSIM_OK && st != TCSIM_ERR_ASSERT) {
    std::cerr << "error: " << tcsim_last_error() << "\n";
    return exit_code(st);
  }
  const auto it = opt.values.find("out");
  if (it != opt.values.end()) {
    std::ofstream f(it->second, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << it->second << "'\n";
      tcsim_string_free(output);
      tcsim_string_free(manifest);
      return 2;
    }
    f << output;
    std::ofstream mf(it->second + ".manifest.json", std::ios::binary);
    mf << manifest;
  } else {
    std::cout << output;
  }
  tcsim_string_free(output);
  tcsim_string_free(manifest);
  return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("tcsim — time-changed process simulation and bound checks (") +
               tcsim_version() + ")"};
  app.require_subcommand(1);

  Options o_sim, o_bound, o_gap, o_rate, o_stein, o_hold;

  auto* sim = app.add_subcommand("simulate", "sample an ensemble of paths to CSV/JSONL");
  add_common(sim, o_sim);
  bind_key(sim, o_sim, "--sampler", "sampler", "sampler id, e.g. scaled_rw:rademacher, moran, mn");
  bind_key(sim, o_sim, "--n", "n", "population size / scaling integer");
  bind_key(sim, o_sim, "--nu1", "nu1", "mutation rate a->A");
  bind_key(sim, o_sim, "--nu2", "nu2", "mutation rate A->a");
  bind_key(sim, o_sim, "--x0", "x0", "initial allele fraction");
  bind_key(sim, o_sim, "--dt", "dt", "Euler step size");
  bind_key(sim, o_sim, "--grid", "grid", "uniform grid cells for grid-based samplers");
  bind_key(sim, o_sim, "--s", "s", "time change: identity | linear:<c> | power:<a> | table:<csv>");

  auto* bound = app.add_subcommand("bound", "evaluate a closed-form bound breakdown");
  add_common(bound, o_bound);
  bind_key(bound, o_bound, "--theorem", "theorem", "1, 2 or 3");
  bind_key(bound, o_bound, "--n", "n", "scaling integer");
  bind_key(bound, o_bound, "--s1", "s1", "s(1) for theorem 1");
  bind_key(bound, o_bound, "--S1", "S1", "S(1) for theorem 2");
  bind_key(bound, o_bound, "--Sn1", "Sn1", "S^(n)(1) for theorem 2");
  bind_key(bound, o_bound, "--dist", "dist", "||S - S^(n)|| for theorem 2");
  bind_key(bound, o_bound, "--m3", "m3", "E|X1|^3 for theorem 1");
  bind_key(bound, o_bound, "--gm", "gm", "functional norm factor");
  bind_key(bound, o_bound, "--nu1", "nu1", "mutation rate for theorem 3");
  bind_key(bound, o_bound, "--nu2", "nu2", "mutation rate for theorem 3");
  bound->add_flag_callback("--simplified", [&o_bound] { o_bound.values["simplified"] = "1"; },
                           "use the nu >= 1 simplified form of theorem 3");

  auto* gap = app.add_subcommand("gap", "Monte Carlo |E g(A) - E g(B)| estimate");
  add_common(gap, o_gap);
  bind_key(gap, o_gap, "--g", "g", "functional id, e.g. sin_avg, cos_eval@0.5");
  bind_key(gap, o_gap, "--sampler-a", "sampler_a", "first sampler id");
  bind_key(gap, o_gap, "--sampler-b", "sampler_b", "second sampler id");
  bind_key(gap, o_gap, "--coupling", "coupling", "independent | common_random | lookdown");
  bind_key(gap, o_gap, "--n", "n", "scaling integer");
  bind_key(gap, o_gap, "--nu1", "nu1", "");
  bind_key(gap, o_gap, "--nu2", "nu2", "");
  bind_key(gap, o_gap, "--x0", "x0", "");
  bind_key(gap, o_gap, "--dt", "dt", "");
  bind_key(gap, o_gap, "--grid", "grid", "");
  bind_key(gap, o_gap, "--s", "s", "time change spec");
  bind_key(gap, o_gap, "--bound", "bound", "auto|none: attach the dominating bound");

  auto* rate = app.add_subcommand("rate", "gap + bound sweep over an n list, CSV out");
  add_common(rate, o_rate);
  bind_key(rate, o_rate, "--g", "g", "functional id");
  bind_key(rate, o_rate, "--sampler-a", "sampler_a", "first sampler id");
  bind_key(rate, o_rate, "--sampler-b", "sampler_b", "second sampler id");
  bind_key(rate, o_rate, "--coupling", "coupling", "coupling mode");
  bind_key(rate, o_rate, "--n-list", "n_list", "comma-separated increasing n values");
  bind_key(rate, o_rate, "--nu1", "nu1", "");
  bind_key(rate, o_rate, "--nu2", "nu2", "");
  bind_key(rate, o_rate, "--x0", "x0", "");
  bind_key(rate, o_rate, "--dt", "dt", "");
  bind_key(rate, o_rate, "--grid", "grid", "");
  bind_key(rate, o_rate, "--s", "s", "time change spec");
  bind_key(rate, o_rate, "--fit", "fit", "none|gap|bound: log-log slope fit in the manifest");

  auto* stein = app.add_subcommand("stein-check", "Stein identity residual report (JSON)");
  add_common(stein, o_stein);
  bind_key(stein, o_stein, "--g", "g", "functional id");
  bind_key(stein, o_stein, "--target", "target", "discretized_bm | scaled_rw:<dist>");
  bind_key(stein, o_stein, "--n", "n", "scaling integer");
  bind_key(stein, o_stein, "--s", "s", "time change spec");
  bind_key(stein, o_stein, "--samples", "samples", "Monte Carlo samples");

  auto* hold = app.add_subcommand("holding-prob", "minimal-holding-time probability");
  add_common(hold, o_hold);
  bind_key(hold, o_hold, "--lambda", "lambda", "holding rate (> 1)");
  bind_key(hold, o_hold, "--mc-trials", "mc_trials", "simplex-spacings MC cross-check trials");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return run("simulate", o_sim);
  if (bound->parsed()) return run("bound", o_bound);
  if (gap->parsed()) return run("gap", o_gap);
  if (rate->parsed()) return run("rate", o_rate);
  if (stein->parsed()) return run("stein-check", o_stein);
  if (hold->parsed()) return run("holding-prob", o_hold);
  return 2;
}
