// Copyright 2026 The qbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qbench command-line tool. Exit codes: 0 success, 1 runtime failure,
// 2 configuration or usage error.

#include "qbench/qbench.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public qbench::Error {
 public:
  using Error::Error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qbench::Error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Parses "re,im" (or a bare real part).
qbench::Complex parse_amplitude(const std::string& token) {
  const auto comma = token.find(',');
  auto parse_real = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("malformed amplitude '" + token + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("malformed amplitude '" + token + "'");
    return v;
  };
  if (comma == std::string::npos) return {parse_real(token), 0.0};
  return {parse_real(token.substr(0, comma)), parse_real(token.substr(comma + 1))};
}

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  std::string config;
};

struct SweepFlags {
  std::string noise;
  int steps = 0;
  std::string state;
  int n_states = 0;
  std::string mode;
  std::uint64_t shots = 0;
  int repeats = 0;
  double ci_level = 0.0;
  int bootstrap_resamples = 0;
  double t2_ratio = 0.0;
  double sigma_fraction = 0.0;
  bool deterministic_thermal = false;
};

int cmd_sweep(const CLI::App& app, const CLI::App& sub, const Globals& g, const SweepFlags& f) {
  qbench::SweepSettings s;
  if (const char* env = std::getenv("QBENCH_SEED")) {
    try {
      s.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw qbench::ConfigError(std::string("QBENCH_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  if (!g.config.empty()) qbench::apply_config(qbench::load_config_file(g.config), s);

  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (app.count("--seed")) s.seed = g.seed;
  if (app.count("--threads")) s.threads = g.threads;
  if (given("--noise")) s.noise = f.noise;
  if (given("--steps")) s.steps = f.steps;
  if (given("--state")) s.state = f.state;
  if (given("--n-states")) s.n_states = f.n_states;
  if (given("--mode")) s.mode = f.mode;
  if (given("--shots")) s.shots = f.shots;
  if (given("--repeats")) s.repeats = f.repeats;
  if (given("--ci-level")) s.ci_level = f.ci_level;
  if (given("--bootstrap-resamples")) s.bootstrap_resamples = f.bootstrap_resamples;
  if (given("--t2-ratio")) s.t2_ratio = f.t2_ratio;
  if (given("--sigma-fraction")) s.thermal_sigma_fraction = f.sigma_fraction;
  if (given("--deterministic-thermal")) s.thermal_deterministic = f.deterministic_thermal;

  const auto cfg = qbench::to_sweep_config(s);
  const std::string out = g.out.empty() ? "sweep.csv" : g.out;

  const auto start = std::chrono::steady_clock::now();
  const auto records = qbench::run_sweep(cfg);
  qbench::write_file_atomic(out, qbench::emit_csv(records));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t undefined = 0;
  for (const auto& r : records) undefined += r.gamma_undefined ? 1 : 0;
  std::printf("sweep: %zu records, %zu gamma-undefined, %.2f s, wrote %s\n", records.size(), undefined, secs,
              out.c_str());
  return kExitOk;
}

int cmd_kappa_n(const std::vector<std::string>& tokens, const std::string& file) {
  std::vector<std::string> all = tokens;
  if (!file.empty()) {
    std::istringstream in(read_text(file));
    std::string tok;
    while (in >> tok) all.push_back(tok);
  }
  if (all.empty()) throw UsageError("kappa-n needs at least one amplitude");
  std::vector<qbench::Complex> x;
  for (const auto& t : all) x.push_back(parse_amplitude(t));
  std::printf("n = %zu\n", x.size());
  std::printf("kappa_n (programming form) = %.6e\n", qbench::kappa_n(x));
  std::printf("kappa_n (defining form)    = %.6e\n", qbench::kappa_n_defining(x));
  return kExitOk;
}

int cmd_validate() {
  const auto results = qbench::run_validation_suite();
  std::vector<std::string> failed;
  for (const auto& r : results) {
    std::printf("%s  %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    if (!r.passed) failed.push_back(r.name);
  }
  if (failed.empty()) {
    std::printf("validate: all %zu checks passed\n", results.size());
    return kExitOk;
  }
  std::string list;
  for (const auto& n : failed) list += (list.empty() ? "" : ", ") + n;
  std::fprintf(stderr, "validate: failed checks: %s\n", list.c_str());
  return kExitRuntime;
}

int cmd_plot(const std::string& csv_path, const qbench::PlotSpec& spec, const std::string& out) {
  const auto table = qbench::parse_csv(read_text(csv_path));
  std::string svg;
  try {
    svg = qbench::render_svg(table, spec);
  } catch (const qbench::PlotError& e) {
    throw UsageError(e.what());
  }
  const std::string target = out.empty() ? "plot.svg" : out;
  qbench::write_file_atomic(target, svg);
  std::printf("plot: wrote %s\n", target.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise benchmarks for the joint Peres-Sorkin test on two-qubit circuits"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Root seed (falls back to QBENCH_SEED, then the config)");
  app.add_option("--threads", g.threads, "Worker threads (0 = machine parallelism)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Output path");
  app.add_option("--config", g.config, "JSON configuration document");

  SweepFlags f;
  auto* sweep = app.add_subcommand("sweep", "Run a noise sweep and write a CSV");
  sweep->add_option("--noise", f.noise, "readout | depolarizing | thermal | readout-depolarizing");
  sweep->add_option("--steps", f.steps, "Grid points per axis");
  sweep->add_option("--state", f.state, "specific | random");
  sweep->add_option("--n-states", f.n_states, "Random ensemble size");
  sweep->add_option("--mode", f.mode, "exact | shots");
  sweep->add_option("--shots", f.shots, "Shots per circuit in shot mode");
  sweep->add_option("--repeats", f.repeats, "Repeats per point in shot mode");
  sweep->add_option("--ci-level", f.ci_level, "Bootstrap confidence level");
  sweep->add_option("--bootstrap-resamples", f.bootstrap_resamples, "Bootstrap resamples");
  sweep->add_option("--t2-ratio", f.t2_ratio, "T2 / T1 on the thermal axis");
  sweep->add_option("--sigma-fraction", f.sigma_fraction, "Relative spread of sampled T1/T2");
  sweep->add_flag("--deterministic-thermal", f.deterministic_thermal, "Use mean T1/T2 without sampling");

  std::vector<std::string> amplitudes;
  std::string amp_file;
  auto* kn = app.add_subcommand("kappa-n", "Evaluate the n-path Sorkin parameter for amplitudes 're,im'");
  kn->add_option("amplitudes", amplitudes, "Amplitudes as re,im");
  kn->add_option("--file", amp_file, "File with whitespace-separated amplitudes");

  auto* val = app.add_subcommand("validate", "Run the fast invariant suite");

  std::string csv_path;
  qbench::PlotSpec spec;
  auto* plot = app.add_subcommand("plot", "Scatter-plot two CSV columns as SVG");
  plot->add_option("--csv", csv_path, "Input CSV")->required();
  plot->add_option("--x", spec.x, "Column for the x axis")->required();
  plot->add_option("--y", spec.y, "Column for the y axis")->required();
  plot->add_flag("--log-x", spec.log_x, "Logarithmic x axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(app, *sweep, g, f);
    if (kn->parsed()) return cmd_kappa_n(amplitudes, amp_file);
    if (val->parsed()) return cmd_validate();
    if (plot->parsed()) return cmd_plot(csv_path, spec, g.out);
  } catch (const qbench::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
