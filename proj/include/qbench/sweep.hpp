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

// Joint Peres/Sorkin test runs and noise-parameter sweeps.
//
// Every (state, grid point, repeat) task draws from its own substream
// derived from the root seed, so output is independent of thread count and
// scheduling.

#pragma once

#include "qbench/circuits.hpp"
#include "qbench/metrics.hpp"
#include "qbench/noise.hpp"
#include "qbench/rng.hpp"
#include "qbench/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

namespace qbench {

enum class Mode { Exact, Shots };

inline std::string_view to_string(Mode m) { return m == Mode::Exact ? "exact" : "shots"; }

struct JointTestResult {
  ProjectionProbabilities pp;
  std::optional<PeresResult> peres;  // empty when a gamma is undefined
  std::string gamma_diagnostic;
  SorkinResult sorkin;
};

/// Outcome-00 probability of prep followed by each projection setting.
inline ProjectionProbabilities measure_projections(const PreparationParams& prep, const NoiseModel& model,
                                                   std::span<const RelaxationTimes> times, Mode mode,
                                                   std::uint64_t shots, RngStream& rng,
                                                   const GateDurations& durations = {}) {
  const auto prep_plan = build_preparation(prep, durations);
  ProjectionProbabilities pp;
  for (const auto& setting : projection_settings()) {
    const auto plan = prep_plan.then(build_projection(setting.params, durations));
    const auto probs = simulate_with_times(plan, model, times);
    if (mode == Mode::Exact) {
      pp[setting.label] = probs[0];
    } else {
      pp[setting.label] = estimate_probs(sample_counts(probs, shots, rng))[0];
    }
  }
  return pp;
}

inline JointTestResult evaluate_joint(const ProjectionProbabilities& pp) {
  JointTestResult r;
  r.pp = pp;
  r.sorkin = sorkin_kappa(pp);
  try {
    r.peres = peres_f(pp);
  } catch (const GammaUndefined& e) {
    r.gamma_diagnostic = e.what();
  }
  return r;
}

inline JointTestResult run_joint_test(const PreparationParams& prep, const NoiseModel& model, Mode mode,
                                      std::uint64_t shots, RngStream& rng, const GateDurations& durations = {}) {
  model.validate();
  const auto times = sample_register_times(rng, model, 2);
  return evaluate_joint(measure_projections(prep, model, times, mode, shots, rng, durations));
}

enum class NoiseAxis { Readout, Depolarizing, Thermal, ReadoutDepolarizing };

inline std::string_view to_string(NoiseAxis a) {
  switch (a) {
    case NoiseAxis::Readout: return "readout";
    case NoiseAxis::Depolarizing: return "depolarizing";
    case NoiseAxis::Thermal: return "thermal";
    case NoiseAxis::ReadoutDepolarizing: return "readout-depolarizing";
  }
  return "?";
}

inline std::optional<NoiseAxis> parse_noise_axis(std::string_view s) {
  for (auto a : {NoiseAxis::Readout, NoiseAxis::Depolarizing, NoiseAxis::Thermal, NoiseAxis::ReadoutDepolarizing}) {
    if (s == to_string(a)) return a;
  }
  return std::nullopt;
}

/// One grid point; unset fields leave the base model untouched.
struct NoisePoint {
  std::optional<double> readout_p{};
  std::optional<double> depol_p{};
  std::optional<double> t1_ns{};
  std::optional<double> t2_ns{};
};

inline std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw Error("grid needs at least one step");
  if (steps == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  v.back() = hi;
  return v;
}

inline std::vector<double> logspace(double lo, double hi, int steps) {
  auto e = linspace(std::log10(lo), std::log10(hi), steps);
  for (auto& x : e) x = std::pow(10.0, x);
  return e;
}

/// Uniform p in [0, 1]; thermal T1 log-spaced over [10 ns, 1e5 ns] with
/// T2 = t2_ratio * T1; the two-axis grid is the full Cartesian product.
inline std::vector<NoisePoint> default_grid(NoiseAxis axis, int steps, double t2_ratio = 2.0) {
  std::vector<NoisePoint> grid;
  switch (axis) {
    case NoiseAxis::Readout:
      for (double p : linspace(0.0, 1.0, steps)) grid.push_back({.readout_p = p});
      break;
    case NoiseAxis::Depolarizing:
      for (double p : linspace(0.0, 1.0, steps)) grid.push_back({.depol_p = p});
      break;
    case NoiseAxis::Thermal:
      for (double t1 : logspace(10.0, 1e5, steps)) grid.push_back({.t1_ns = t1, .t2_ns = t2_ratio * t1});
      break;
    case NoiseAxis::ReadoutDepolarizing:
      for (double pr : linspace(0.0, 1.0, steps)) {
        for (double pd : linspace(0.0, 1.0, steps)) grid.push_back({.readout_p = pr, .depol_p = pd});
      }
      break;
  }
  return grid;
}

struct RandomStates {
  int n_states = 20;
  std::uint64_t seed = 0;
};
struct SpecificState {};
struct ExplicitStates {
  std::vector<PreparationParams> states;
};
using StateSource = std::variant<RandomStates, SpecificState, ExplicitStates>;

inline std::vector<PreparationParams> resolve_states(const StateSource& source) {
  if (const auto* r = std::get_if<RandomStates>(&source)) {
    if (r->n_states < 1) throw Error("n_states must be at least 1");
    std::vector<PreparationParams> out;
    for (int i = 0; i < r->n_states; ++i) {
      auto rng = RngStream::derive(r->seed, {0x5747E5ULL, static_cast<std::uint64_t>(i)});
      out.push_back(random_preparation(rng));
    }
    return out;
  }
  if (std::holds_alternative<SpecificState>(source)) return {specific_state_params()};
  const auto& e = std::get<ExplicitStates>(source);
  if (e.states.empty()) throw Error("explicit state list is empty");
  return e.states;
}

struct SweepConfig {
  NoiseAxis axis = NoiseAxis::Readout;
  std::vector<NoisePoint> grid;
  StateSource states = SpecificState{};
  Mode mode = Mode::Exact;
  std::uint64_t shots = 100000;
  int repeats = 30;
  double ci_level = 0.99;
  int bootstrap_resamples = 10000;
  std::uint64_t seed = 0;
  NoiseModel base;  // noise present at every grid point
  GateDurations durations;
  double thermal_sigma_fraction = 0.1;
  bool thermal_deterministic = false;
  int threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (grid.empty()) throw Error("sweep grid is empty");
    base.validate();
    durations.validate();
    if (mode == Mode::Shots) {
      if (shots < 1) throw Error("shots must be at least 1");
      if (repeats < 2) throw Error("shot mode needs at least 2 repeats for a bootstrap interval");
      if (!(ci_level > 0.0 && ci_level < 1.0)) throw Error("ci_level must lie in (0, 1)");
      if (bootstrap_resamples < 1) throw Error("bootstrap_resamples must be positive");
    }
    if (!(thermal_sigma_fraction >= 0.0)) throw Error("thermal sigma_fraction must be >= 0");
    for (const auto& pt : grid) {
      if (pt.readout_p && !(*pt.readout_p >= 0.0 && *pt.readout_p <= 1.0)) throw Error("readout p outside [0, 1]");
      if (pt.depol_p && !(*pt.depol_p >= 0.0 && *pt.depol_p <= 1.0)) throw Error("depolarizing p outside [0, 1]");
      if (pt.t1_ns.has_value() != pt.t2_ns.has_value()) throw Error("thermal grid points need both T1 and T2");
      if (pt.t1_ns) {
        ThermalRelaxation{*pt.t1_ns, *pt.t2_ns, thermal_sigma_fraction, thermal_deterministic}.validate();
      }
    }
    resolve_states(states);
  }
};

inline NoiseModel model_at(const SweepConfig& cfg, const NoisePoint& pt) {
  NoiseModel m = cfg.base;
  if (pt.readout_p) m.readout = ReadoutError::symmetric(*pt.readout_p, 2);
  if (pt.depol_p) m.depolarizing = DepolarizingError{*pt.depol_p, *pt.depol_p};
  if (pt.t1_ns) {
    m.thermal = ThermalRelaxation{*pt.t1_ns, *pt.t2_ns, cfg.thermal_sigma_fraction, cfg.thermal_deterministic};
  }
  return m;
}

struct SweepRecord {
  int state_id = 0;
  std::size_t point_index = 0;
  PreparationParams prep;
  std::string noise_type;
  std::optional<double> p_readout;
  std::optional<double> p_depol1;
  std::optional<double> p_depol2;
  std::optional<double> t1_ns;
  std::optional<double> t2_ns;
  Mode mode = Mode::Exact;
  std::optional<std::uint64_t> shots;
  std::optional<int> repeats;
  double kappa = 0.0;
  std::optional<double> kappa_ci_lo;
  std::optional<double> kappa_ci_hi;
  std::optional<double> f;
  std::optional<double> f_ci_lo;
  std::optional<double> f_ci_hi;
  std::optional<double> g01;
  std::optional<double> g12;
  std::optional<double> g20;
  bool gamma_undefined = false;
  std::uint64_t seed = 0;
};

namespace detail {

inline void describe_model(SweepRecord& rec, const NoiseModel& m) {
  if (m.readout) {
    const auto& c = m.readout->per_qubit.front();
    rec.p_readout = c[0][1];
  }
  if (m.depolarizing) {
    rec.p_depol1 = m.depolarizing->p1;
    rec.p_depol2 = m.depolarizing->p2;
  }
  if (m.thermal) {
    rec.t1_ns = m.thermal->t1_mean_ns;
    rec.t2_ns = m.thermal->t2_mean_ns;
  }
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline SweepRecord run_task(const SweepConfig& cfg, const PreparationParams& prep, int state_id,
                            std::size_t point_index) {
  const auto model = model_at(cfg, cfg.grid[point_index]);
  SweepRecord rec;
  rec.state_id = state_id;
  rec.point_index = point_index;
  rec.prep = canonical(prep);
  rec.noise_type = std::string(to_string(cfg.axis));
  rec.mode = cfg.mode;
  rec.seed = cfg.seed;
  describe_model(rec, model);
  const auto sid = static_cast<std::uint64_t>(state_id);
  const auto pid = static_cast<std::uint64_t>(point_index);

  if (cfg.mode == Mode::Exact) {
    auto rng = RngStream::derive(cfg.seed, {sid, pid, 0});
    const auto r = run_joint_test(prep, model, Mode::Exact, 0, rng, cfg.durations);
    rec.kappa = r.sorkin.kappa;
    if (r.peres) {
      rec.f = r.peres->f;
      rec.g01 = r.peres->gammas.g01;
      rec.g12 = r.peres->gammas.g12;
      rec.g20 = r.peres->gammas.g20;
    } else {
      rec.gamma_undefined = true;
    }
    return rec;
  }

  rec.shots = cfg.shots;
  rec.repeats = cfg.repeats;
  std::vector<double> kappas, fs, g01s, g12s, g20s;
  for (int rep = 0; rep < cfg.repeats; ++rep) {
    auto rng = RngStream::derive(cfg.seed, {sid, pid, static_cast<std::uint64_t>(rep) + 1});
    const auto r = run_joint_test(prep, model, Mode::Shots, cfg.shots, rng, cfg.durations);
    kappas.push_back(r.sorkin.kappa);
    if (r.peres) {
      fs.push_back(r.peres->f);
      g01s.push_back(r.peres->gammas.g01);
      g12s.push_back(r.peres->gammas.g12);
      g20s.push_back(r.peres->gammas.g20);
    } else {
      rec.gamma_undefined = true;
    }
  }
  auto boot_rng = RngStream::derive(cfg.seed, {sid, pid, 0xB0075ULL});
  const auto kci = bootstrap_ci(kappas, cfg.ci_level, cfg.bootstrap_resamples, boot_rng);
  rec.kappa = kci.mean;
  rec.kappa_ci_lo = kci.lo;
  rec.kappa_ci_hi = kci.hi;
  if (!rec.gamma_undefined) {
    const auto fci = bootstrap_ci(fs, cfg.ci_level, cfg.bootstrap_resamples, boot_rng);
    rec.f = fci.mean;
    rec.f_ci_lo = fci.lo;
    rec.f_ci_hi = fci.hi;
    rec.g01 = mean_of(g01s);
    rec.g12 = mean_of(g12s);
    rec.g20 = mean_of(g20s);
  }
  return rec;
}

}  // namespace detail

/// Runs `task(i)` for i in [0, n) on a worker pool; rethrows the first
/// failure after all workers stop.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

/// One record per (state, grid point), ordered by state then grid index.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto states = resolve_states(cfg.states);
  const std::size_t n_points = cfg.grid.size();
  std::vector<SweepRecord> records(states.size() * n_points);
  parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t s = i / n_points, p = i % n_points;
    records[i] = detail::run_task(cfg, states[s], static_cast<int>(s), p);
  });
  return records;
}

/// Exact-mode F at a single noise strength along a one-parameter axis.
inline double exact_f_at(const PreparationParams& prep, NoiseAxis axis, double p, const NoiseModel& base,
                         const GateDurations& durations) {
  NoiseModel m = base;
  if (axis == NoiseAxis::Readout) {
    m.readout = ReadoutError::symmetric(p, 2);
  } else if (axis == NoiseAxis::Depolarizing) {
    m.depolarizing = DepolarizingError{p, p};
  } else {
    throw Error("threshold scans run along the readout or depolarizing axis");
  }
  RngStream rng(0);
  const auto r = run_joint_test(prep, m, Mode::Exact, 0, rng, durations);
  if (!r.peres) {
    char where[64];
    std::snprintf(where, sizeof where, " (noise strength p = %.6g)", p);
    throw GammaUndefined("", r.gamma_diagnostic + where);
  }
  return r.peres->f;
}

/// Scans p over (0.5, 1] in steps of `resolution` and returns the first p
/// with F(p) >= 1 while F(p - resolution) < 1, or nothing if F never
/// crosses 1 from below.
inline std::optional<double> f_threshold(const PreparationParams& prep, NoiseAxis axis, double resolution,
                                         const NoiseModel& base = {}, const GateDurations& durations = {}) {
  if (!(resolution > 0.0 && resolution <= 0.5)) throw Error("resolution must lie in (0, 0.5]");
  const auto steps = static_cast<long>(std::floor(0.5 / resolution + 1e-9));
  double prev = exact_f_at(prep, axis, 0.5, base, durations);
  for (long k = 1; k <= steps; ++k) {
    const double p = std::min(1.0, 0.5 + static_cast<double>(k) * resolution);
    const double f = exact_f_at(prep, axis, p, base, durations);
    if (f >= 1.0 && prev < 1.0) return p;
    prev = f;
  }
  return std::nullopt;
}

inline std::optional<double> readout_threshold(const PreparationParams& prep, double resolution,
                                               const NoiseModel& base = {}, const GateDurations& durations = {}) {
  return f_threshold(prep, NoiseAxis::Readout, resolution, base, durations);
}

}  // namespace qbench
