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

// Fast invariant suite run by `qbench validate`.

#pragma once

#include "qbench/config.hpp"
#include "qbench/metrics.hpp"
#include "qbench/noise.hpp"
#include "qbench/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace qbench {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Random mixed state of `n_qubits`: G G^dagger / Tr with Gaussian G.
inline DensityMatrix random_density_matrix(int n_qubits, RngStream& rng) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  CMatrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  }
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::from_matrix(std::move(m));
}

struct ChannelFuzzReport {
  int trials = 0;
  int failures = 0;
  double worst_trace_error = 0.0;
  double worst_hermitian_error = 0.0;
  double worst_min_eigenvalue = 0.0;
};

/// Applies random channels with random parameters to random states on one or
/// two qubits and tracks the worst invariant deviations.
inline ChannelFuzzReport channel_fuzz(int trials, std::uint64_t seed) {
  ChannelFuzzReport rep;
  RngStream rng = RngStream::derive(seed, {0xC4A77E1});
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    DensityMatrix rho = random_density_matrix(n, rng);
    const int q = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
    switch (rng.next_u64() % 5) {
      case 0: rho = depolarize(rho, rng.uniform(), {q}); break;
      case 1:
        rho = n == 2 ? depolarize(rho, rng.uniform(), {0, 1}) : depolarize(rho, rng.uniform(), {0});
        break;
      case 2: {
        const double t1 = 10.0 + 1e5 * rng.uniform();
        const double t2 = 2.0 * t1 * std::max(rng.uniform(), 1e-3);
        rho = thermal_relax(rho, q, 1e4 * rng.uniform(), t1, t2);
        break;
      }
      case 3: rho = reset_qubit(rho, q); break;
      default: {
        const double pi = std::numbers::pi;
        const auto u = u_matrix(pi * rng.uniform(), 2 * pi * rng.uniform(), 2 * pi * rng.uniform());
        rho = apply_unitary(rho, embed_unitary(u, {q}, n));
        if (n == 2) rho = apply_unitary(rho, embed_unitary(gates::cnot(), {q, 1 - q}, 2));
        break;
      }
    }
    const auto d = rho.diagnostics();
    ++rep.trials;
    if (!d.ok()) ++rep.failures;
    rep.worst_trace_error = std::max(rep.worst_trace_error, d.trace_error);
    rep.worst_hermitian_error = std::max(rep.worst_hermitian_error, d.hermitian_error);
    rep.worst_min_eigenvalue = std::min(rep.worst_min_eigenvalue, d.min_eigenvalue);
  }
  return rep;
}

/// |<phi(t)|psi>|^2 from the closed-form amplitudes.
inline double overlap_probability(const PreparationParams& prep, const ProjectionParams& proj) {
  const auto psi = analytic_amplitudes(prep);
  const auto phi = projection_state(proj);
  Complex ip = 0.0;
  for (std::size_t i = 0; i < psi.dim(); ++i) ip += std::conj(phi[i]) * psi[i];
  return std::norm(ip);
}

inline CheckResult check_channel_validity(int trials = 2000, std::uint64_t seed = 1) {
  const auto rep = channel_fuzz(trials, seed);
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d trials, worst trace error %.3g, hermitian error %.3g, min eigenvalue %.3g",
                rep.trials, rep.worst_trace_error, rep.worst_hermitian_error, rep.worst_min_eigenvalue);
  return {"channel trace/PSD", rep.failures == 0, buf};
}

inline CheckResult check_oracle_equivalence(int n_states = 20, std::uint64_t seed = 2) {
  double worst = 0.0;
  for (int s = 0; s < n_states; ++s) {
    RngStream rng = RngStream::derive(seed, {static_cast<std::uint64_t>(s)});
    const auto prep = random_preparation(rng);
    const auto pp = measure_projections(prep, {}, {}, Mode::Exact, 0, rng);
    for (const auto& setting : projection_settings()) {
      worst = std::max(worst, std::abs(pp[setting.label] - overlap_probability(prep, setting.params)));
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%d states, worst |circuit - closed form| = %.3g", n_states, worst);
  return {"oracle equivalence", worst < 1e-10, buf};
}

inline CheckResult check_kappa_n_fuzz(int per_n = 200, std::uint64_t seed = 3) {
  double worst = 0.0;
  RngStream rng = RngStream::derive(seed, {0x4B4E});
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < per_n; ++k) {
      std::vector<Complex> x(static_cast<std::size_t>(n));
      double norm = 0.0;
      for (auto& v : x) {
        v = Complex(rng.normal(), rng.normal());
        norm += std::norm(v);
      }
      worst = std::max({worst, std::abs(kappa_n(x)) / norm, std::abs(kappa_n_defining(x)) / norm});
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "n = 1..8, worst relative |kappa_n| = %.3g", worst);
  return {"kappa_n identity", worst < 1e-10, buf};
}

using KappaFunction = std::function<double(const ProjectionProbabilities&)>;

/// kappa must vanish at readout p = 0 and p = 0.5 for the benchmark state.
inline CheckResult check_kappa_fixed_points(const KappaFunction& kappa = [](const ProjectionProbabilities& pp) {
  return sorkin_kappa(pp).kappa;
}) {
  const auto prep = specific_state_params();
  std::string detail;
  bool ok = true;
  for (double p : {0.0, 0.5}) {
    NoiseModel m;
    m.readout = ReadoutError::symmetric(p);
    RngStream rng(0);
    const double k = kappa(measure_projections(prep, m, {}, Mode::Exact, 0, rng));
    char buf[80];
    std::snprintf(buf, sizeof buf, "%skappa(p=%.1f) = %.3g", detail.empty() ? "" : ", ", p, k);
    detail += buf;
    ok = ok && std::abs(k) <= 1e-10;
  }
  return {"kappa fixed points", ok, detail};
}

/// A thermal section with T2 = 3 T1 must be rejected at load time.
inline CheckResult check_thermal_rejection() {
  SweepSettings s;
  try {
    apply_config(parse_config_text(R"({"noise": {"thermal": {"t1_ns": 1000, "t2_ns": 3000}}})"), s);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    const bool cp = msg.find("not completely positive") != std::string::npos;
    return {"thermal T2 > 2 T1 rejected", cp, msg};
  }
  return {"thermal T2 > 2 T1 rejected", false, "config with T2 = 3 T1 was accepted"};
}

inline std::vector<CheckResult> run_validation_suite() {
  return {check_channel_validity(), check_oracle_equivalence(), check_kappa_n_fuzz(), check_kappa_fixed_points(),
          check_thermal_rejection()};
}

}  // namespace qbench
