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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include "oracle.hpp"
#include "qbench/qbench.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace {

using namespace qbench;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

oracle::V4 oracle_state(const PreparationParams& p) { return oracle::prepared_state(p.theta1, p.theta2, p.phi1, p.phi2); }

std::vector<PreparationParams> random_states(int n, std::uint64_t seed, double min_modulus = 0.0) {
  std::vector<PreparationParams> out;
  RngStream rng = RngStream::derive(seed, {0xACCE97});
  while (static_cast<int>(out.size()) < n) {
    const auto prep = random_preparation(rng);
    const auto amp = analytic_amplitudes(prep);
    if (std::abs(amp[0]) >= min_modulus && std::abs(amp[1]) >= min_modulus && std::abs(amp[3]) >= min_modulus) {
      out.push_back(prep);
    }
  }
  return out;
}

SweepConfig exact_sweep(NoiseAxis axis, std::vector<PreparationParams> states, int steps) {
  SweepConfig cfg;
  cfg.axis = axis;
  cfg.grid = default_grid(axis, steps);
  cfg.states = ExplicitStates{std::move(states)};
  cfg.mode = Mode::Exact;
  cfg.seed = 1;
  return cfg;
}

Outcome ideal_joint_test() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_k = 0.0, worst_f = 0.0;
  for (const auto& prep : random_states(100, 1, 0.05)) {
    RngStream rng(0);
    const auto r = run_joint_test(prep, {}, Mode::Exact, 0, rng);
    worst_k = std::max(worst_k, std::abs(r.sorkin.kappa));
    worst_f = r.peres ? std::max(worst_f, std::abs(r.peres->f - 1.0)) : INFINITY;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst_k <= 1e-10 && worst_f <= 1e-8 && secs < 5.0,
          fmt("100 states, max |kappa| = %.2e, max |F-1| = %.2e, %.2f s", worst_k, worst_f, secs)};
}

Outcome readout_fixed_points() {
  auto cfg = exact_sweep(NoiseAxis::Readout, random_states(50, 2), 3);
  double worst = 0.0;
  for (const auto& r : run_sweep(cfg)) {
    if (*r.p_readout == 0.0 || *r.p_readout == 0.5) worst = std::max(worst, std::abs(r.kappa));
  }
  return {worst <= 1e-10, fmt("50 states, max |kappa| at p = 0 and 0.5 = %.2e", worst)};
}

Outcome readout_quadratic() {
  const auto states = random_states(20, 3);
  const auto recs = run_sweep(exact_sweep(NoiseAxis::Readout, states, 21));
  double worst = 0.0;
  for (std::size_t s = 0; s < states.size(); ++s) {
    Eigen::MatrixXd a(21, 3);
    Eigen::VectorXd b(21);
    for (int i = 0; i < 21; ++i) {
      const auto& r = recs[s * 21 + static_cast<std::size_t>(i)];
      const double p = *r.p_readout;
      a.row(i) << 1.0, p, p * p;
      b(i) = r.kappa;
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    worst = std::max(worst, (a * c - b).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-9, fmt("20 states x 21 points, max quadratic-fit residual = %.2e", worst)};
}

Outcome readout_threshold_check() {
  const auto prep = specific_state_params();
  const auto psi = oracle_state(prep);
  double worst = 0.0;
  for (double p : linspace(0.0, 1.0, 101)) {
    const auto o = oracle::readout_projections(psi, p);
    NoiseModel m;
    m.readout = ReadoutError::symmetric(p);
    RngStream rng(0);
    const auto pp = measure_projections(prep, m, {}, Mode::Exact, 0, rng);
    const double diffs[] = {pp.p012 - o.p012, pp.p01 - o.p01, pp.p12 - o.p12, pp.p20 - o.p20,
                            pp.p0 - o.p0,     pp.p1 - o.p1,   pp.p2 - o.p2,   sorkin_kappa(pp).kappa - oracle::kappa(o)};
    for (double d : diffs) worst = std::max(worst, std::abs(d));
  }
  const bool oracle_ok = worst <= 1e-6;
  std::string threshold;
  bool threshold_ok = false;
  try {
    const auto t = readout_threshold(prep, 1e-3);
    threshold_ok = t && std::abs(*t - 0.90) <= 0.02;
    threshold = t ? fmt("threshold p = %.4f", *t) : std::string("F never crosses 1");
  } catch (const GammaUndefined& e) {
    threshold = std::string("scan aborted: ") + e.what();
  }
  double f_max = 0.0, p_at = 0.0;
  for (double p : linspace(0.5, 0.999, 500)) {
    const double f = oracle::peres(oracle::readout_projections(psi, p));
    if (f > f_max) {
      f_max = f;
      p_at = p;
    }
  }
  return {oracle_ok && threshold_ok,
          fmt("oracle agreement %.2e; %s; oracle max F on (0.5, 1) = %.4f at p = %.3f (expected crossing 0.90 +/- 0.02)",
              worst, threshold.c_str(), f_max, p_at)};
}

Outcome depolarizing_bounds() {
  const auto recs = run_sweep(exact_sweep(NoiseAxis::Depolarizing, random_states(20, 5), 21));
  double worst_k = 0.0, worst_f = -INFINITY;
  int undefined = 0;
  for (const auto& r : recs) {
    if (*r.p_depol1 == 0.0 || *r.p_depol1 == 1.0) worst_k = std::max(worst_k, std::abs(r.kappa));
    if (r.f) {
      worst_f = std::max(worst_f, *r.f);
    } else {
      ++undefined;
    }
  }
  return {worst_k <= 1e-10 && worst_f <= 1.0 + 1e-9 && undefined == 0,
          fmt("20 states x 21 points, max |kappa| at p = 0 and 1 = %.2e, max F = %.12f, undefined = %d", worst_k,
              worst_f, undefined)};
}

Outcome thermal_recovery() {
  auto cfg = exact_sweep(NoiseAxis::Thermal, random_states(20, 6), 21);
  cfg.thermal_deterministic = true;
  const auto recs = run_sweep(cfg);
  const double min_t1 = 10.0 * cfg.durations.reset_ns;
  double end_k = 0.0, end_f = 0.0;
  int mono_k = 0, mono_f = 0;
  const std::size_t n_points = cfg.grid.size();
  for (std::size_t s = 0; s < 20; ++s) {
    double prev_k = INFINITY, prev_f = INFINITY;
    bool ok_k = true, ok_f = true;
    for (std::size_t i = 0; i < n_points; ++i) {
      const auto& r = recs[s * n_points + i];
      const double dk = std::abs(r.kappa), df = r.f ? std::abs(*r.f - 1.0) : INFINITY;
      if (*r.t1_ns >= min_t1) {
        ok_k = ok_k && dk <= prev_k + 1e-12;
        ok_f = ok_f && df <= prev_f + 1e-12;
        prev_k = dk;
        prev_f = df;
      }
      if (i + 1 == n_points) {
        end_k = std::max(end_k, dk);
        end_f = std::max(end_f, df);
      }
    }
    mono_k += ok_k ? 1 : 0;
    mono_f += ok_f ? 1 : 0;
  }
  return {end_k < 1e-3 && end_f < 1e-2 && mono_k == 20 && mono_f == 20,
          fmt("T1 = 1e5 ns, T2 = 2 T1, 20 states: max |kappa| = %.3e (< 1e-3), max |F-1| = %.3e (< 1e-2); "
              "for T1 >= %.0f ns |kappa| monotone in %d/20 states, |F-1| in %d/20",
              end_k, end_f, min_t1, mono_k, mono_f)};
}

Outcome kappa_n_identity() {
  RngStream rng = RngStream::derive(7, {0x4B4E});
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < 1000; ++k) {
      std::vector<Complex> x(static_cast<std::size_t>(n));
      double norm = 0.0;
      const double scale = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
      for (auto& v : x) {
        v = scale * Complex(rng.normal(), rng.normal());
        norm += std::norm(v);
      }
      worst = std::max({worst, std::abs(kappa_n(x)) / norm, std::abs(kappa_n_defining(x)) / norm});
    }
  }
  return {worst <= 1e-10, fmt("n = 1..8, 1000 vectors each, max relative |kappa_n| = %.2e", worst)};
}

Outcome channel_validity() {
  const auto rep = channel_fuzz(10000, 8);
  return {rep.failures == 0,
          fmt("%d trials, %d failures, worst trace error %.2e, hermitian error %.2e, min eigenvalue %.2e", rep.trials,
              rep.failures, rep.worst_trace_error, rep.worst_hermitian_error, rep.worst_min_eigenvalue)};
}

Outcome statistical_coverage() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::uint64_t kShots = 10000;
  std::string detail;
  bool ok = true;
  for (double p : {0.1, 0.5}) {
    RngStream rng = RngStream::derive(9, {static_cast<std::uint64_t>(p * 1000)});
    const double probs[] = {p, 1.0 - p};
    int covered = 0;
    for (int t = 0; t < 10000; ++t) {
      const double est = estimate_probs(sample_counts(probs, kShots, rng))[0];
      covered += std::abs(est - p) <= delta_p(est, kShots) ? 1 : 0;
    }
    const double rate = covered / 10000.0;
    ok = ok && rate >= 0.93 && rate <= 0.97;
    detail += fmt("dP coverage at p = %.1f: %.2f%%; ", p, 100 * rate);
  }

  SweepConfig cfg;
  cfg.axis = NoiseAxis::Readout;
  cfg.grid = {{.readout_p = 0.1}};
  cfg.states = SpecificState{};
  const double exact_kappa = run_sweep(cfg).front().kappa;
  cfg.mode = Mode::Shots;
  cfg.shots = 100000;
  cfg.repeats = 30;
  cfg.ci_level = 0.99;
  cfg.bootstrap_resamples = 10000;
  int covered = 0;
  constexpr int kMeta = 50;
  for (int m = 0; m < kMeta; ++m) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(m);
    const auto r = run_sweep(cfg).front();
    covered += (*r.kappa_ci_lo <= exact_kappa && exact_kappa <= *r.kappa_ci_hi) ? 1 : 0;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ok = ok && covered >= 45 && secs < 300.0;
  detail += fmt("kappa 99%% bootstrap CI covers exact %.4e in %d/%d meta-trials; %.1f s", exact_kappa, covered, kMeta,
                secs);
  return {ok, detail};
}

Outcome reproducibility() {
  auto run = [](Mode mode) {
    SweepConfig cfg;
    cfg.axis = NoiseAxis::ReadoutDepolarizing;
    cfg.grid = default_grid(cfg.axis, 3);
    cfg.states = RandomStates{3, 42};
    cfg.seed = 42;
    cfg.mode = mode;
    cfg.shots = 2000;
    cfg.repeats = 5;
    cfg.bootstrap_resamples = 500;
    cfg.threads = 3;
    const auto a = emit_csv(run_sweep(cfg));
    cfg.threads = 1;
    return std::pair{a, emit_csv(run_sweep(cfg))};
  };
  const auto exact = run(Mode::Exact);
  const auto shots = run(Mode::Shots);
  const bool ok = exact.first == exact.second && shots.first == shots.second;
  return {ok, fmt("exact mode %s, shot mode %s (%zu bytes)", exact.first == exact.second ? "identical" : "differs",
                  shots.first == shots.second ? "identical" : "differs", shots.first.size())};
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"ideal joint test on random states", 5, ideal_joint_test},
      {"readout kappa fixed points", 10, readout_fixed_points},
      {"readout kappa quadratic in p", 10, readout_quadratic},
      {"readout oracle and F threshold", 30, readout_threshold_check},
      {"depolarizing kappa and F bounds", 20, depolarizing_bounds},
      {"thermal recovery at long T1", 30, thermal_recovery},
      {"kappa_n identity", 5, kappa_n_identity},
      {"channel trace and positivity", 30, channel_validity},
      {"statistical coverage", 300, statistical_coverage},
      {"bit-identical reruns", 10, reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool passed = o.passed && secs < c.limit_s;
    failed += passed ? 0 : 1;
    std::printf("criterion %2zu %s  %s: %s [%.2f s of %.0f s]\n", i + 1, passed ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu passed, %d failed\n", criteria.size() - static_cast<std::size_t>(failed), failed);
  return failed == 0 ? 0 : 1;
}
