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

// Noise channels attached to circuit instructions, and classical readout
// confusion applied to outcome distributions.

#pragma once

#include "qbench/circuits.hpp"
#include "qbench/qcore.hpp"
#include "qbench/rng.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qbench {

/// Row-stochastic confusion matrix: entry [true][observed].
using Confusion = std::array<std::array<double, 2>, 2>;

struct ReadoutError {
  std::vector<Confusion> per_qubit;

  static ReadoutError symmetric(double p, int n_qubits = 2) {
    ReadoutError r;
    r.per_qubit.assign(static_cast<std::size_t>(n_qubits), Confusion{{{1.0 - p, p}, {p, 1.0 - p}}});
    r.validate();
    return r;
  }

  void validate() const {
    if (per_qubit.empty()) throw Error("readout error needs at least one qubit");
    for (const auto& m : per_qubit) {
      for (const auto& row : m) {
        for (double v : row) {
          if (!(v >= 0.0 && v <= 1.0)) throw Error("readout confusion entries must lie in [0, 1]");
        }
        if (std::abs(row[0] + row[1] - 1.0) > 1e-12) throw Error("readout confusion rows must sum to 1");
      }
    }
  }
};

struct DepolarizingError {
  double p1 = 0.0;  // one-qubit gates
  double p2 = 0.0;  // two-qubit gates

  void validate() const {
    if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
      throw Error("depolarizing probabilities must lie in [0, 1]");
    }
  }
};

struct ThermalRelaxation {
  double t1_mean_ns = 0.0;
  double t2_mean_ns = 0.0;
  double sigma_fraction = 0.1;
  bool deterministic = false;

  void validate() const {
    if (!(t1_mean_ns > 0.0) || !std::isfinite(t1_mean_ns)) throw Error("T1 must be positive");
    if (!(t2_mean_ns > 0.0) || !std::isfinite(t2_mean_ns)) throw Error("T2 must be positive");
    if (t2_mean_ns > 2.0 * t1_mean_ns) {
      throw Error("thermal relaxation with T2 > 2*T1 is not completely positive (T1 = " +
                  std::to_string(t1_mean_ns) + " ns, T2 = " + std::to_string(t2_mean_ns) + " ns)");
    }
    if (!(sigma_fraction >= 0.0) || !std::isfinite(sigma_fraction)) throw Error("sigma_fraction must be >= 0");
  }
};

struct NoiseModel {
  std::optional<ReadoutError> readout;
  std::optional<DepolarizingError> depolarizing;
  std::optional<ThermalRelaxation> thermal;

  bool is_ideal() const { return !readout && !depolarizing && !thermal; }

  void validate() const {
    if (readout) readout->validate();
    if (depolarizing) depolarizing->validate();
    if (thermal) thermal->validate();
  }
};

/// Applies the tensor product of per-qubit confusion matrices to an outcome
/// distribution.
inline std::vector<double> apply_readout(std::span<const double> probs, const ReadoutError& r) {
  const int n = qubits_for_dim(probs.size());
  if (static_cast<int>(r.per_qubit.size()) != n) {
    throw DimensionError("readout error covers " + std::to_string(r.per_qubit.size()) + " qubit(s), distribution has " +
                         std::to_string(n));
  }
  std::vector<double> cur(probs.begin(), probs.end());
  std::vector<double> next(cur.size());
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    const auto& m = r.per_qubit[static_cast<std::size_t>(q)];
    for (std::size_t y = 0; y < cur.size(); ++y) {
      const std::size_t y_bit = (y & bit) ? 1 : 0;
      const std::size_t base = y & ~bit;
      next[y] = m[0][y_bit] * cur[base] + m[1][y_bit] * cur[base | bit];
    }
    std::swap(cur, next);
  }
  return cur;
}

/// rho -> (1 - p) rho + p Tr_S(rho) (x) I_S / 2^|S| on the qubit set S.
inline DensityMatrix depolarize(const DensityMatrix& rho, double p, std::span<const int> qubits) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("depolarizing probability must lie in [0, 1]");
  const int n = rho.n_qubits();
  std::size_t mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n) throw DimensionError("depolarized qubit out of range");
    mask |= std::size_t{1} << q;
  }
  if (p == 0.0 || mask == 0) return rho;

  const std::size_t dim = rho.dim();
  const double sub_dim = static_cast<double>(std::size_t{1} << qubits.size());
  const CMatrix& m = rho.matrix();
  CMatrix out = (1.0 - p) * m;
  // Enumerate subsets of the mask for the partial trace.
  std::vector<std::size_t> sub_states;
  for (std::size_t s = mask;; s = (s - 1) & mask) {
    sub_states.push_back(s);
    if (s == 0) break;
  }
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & mask) != (c & mask)) continue;
      Complex traced = 0.0;
      const std::size_t r_rest = r & ~mask, c_rest = c & ~mask;
      for (std::size_t s : sub_states) {
        traced += m(static_cast<Eigen::Index>(r_rest | s), static_cast<Eigen::Index>(c_rest | s));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += p * traced / sub_dim;
    }
  }
  return DensityMatrix::unchecked(std::move(out));
}

inline DensityMatrix depolarize(const DensityMatrix& rho, double p, std::initializer_list<int> qubits) {
  return depolarize(rho, p, std::span<const int>(qubits.begin(), qubits.size()));
}

/// Zero-temperature relaxation of one qubit for `duration_ns`: the |1>
/// population decays by e^{-t/T1} into |0>, coherences decay by e^{-t/T2}.
inline DensityMatrix thermal_relax(const DensityMatrix& rho, int qubit, double duration_ns, double t1_ns,
                                   double t2_ns) {
  if (!(t1_ns > 0.0) || !(t2_ns > 0.0)) throw Error("T1 and T2 must be positive");
  if (t2_ns > 2.0 * t1_ns) throw Error("thermal relaxation with T2 > 2*T1 is not completely positive");
  if (!(duration_ns >= 0.0)) throw Error("relaxation duration must be non-negative");
  const int n = rho.n_qubits();
  if (qubit < 0 || qubit >= n) throw DimensionError("relaxed qubit out of range");
  if (duration_ns == 0.0) return rho;

  const double population = std::exp(-duration_ns / t1_ns);
  const double coherence = std::exp(-duration_ns / t2_ns);
  const std::size_t bit = std::size_t{1} << qubit;
  const std::size_t dim = rho.dim();
  const CMatrix& m = rho.matrix();
  CMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
      const bool r1 = r & bit, c1 = c & bit;
      if (!r1 && !c1) {
        out(ri, ci) = m(ri, ci) + (1.0 - population) * m(static_cast<Eigen::Index>(r | bit),
                                                          static_cast<Eigen::Index>(c | bit));
      } else if (r1 && c1) {
        out(ri, ci) = population * m(ri, ci);
      } else {
        out(ri, ci) = coherence * m(ri, ci);
      }
    }
  }
  return DensityMatrix::unchecked(std::move(out));
}

/// Resets one qubit to |0> (trace-preserving).
inline DensityMatrix reset_qubit(const DensityMatrix& rho, int qubit) {
  const int n = rho.n_qubits();
  if (qubit < 0 || qubit >= n) throw DimensionError("reset qubit out of range");
  const std::size_t bit = std::size_t{1} << qubit;
  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    if (r & bit) continue;
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      if (c & bit) continue;
      const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
      out(ri, ci) = m(ri, ci) + m(static_cast<Eigen::Index>(r | bit), static_cast<Eigen::Index>(c | bit));
    }
  }
  return DensityMatrix::unchecked(std::move(out));
}

struct RelaxationTimes {
  double t1_ns = 0.0;
  double t2_ns = 0.0;
};

inline RelaxationTimes sample_relaxation_times(RngStream& rng, const ThermalRelaxation& tr) {
  tr.validate();
  if (tr.deterministic || tr.sigma_fraction == 0.0) return {tr.t1_mean_ns, tr.t2_mean_ns};
  auto draw_positive = [&](double mean) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const double x = mean + tr.sigma_fraction * mean * rng.normal();
      if (x > 0.0) return x;
    }
    return mean;
  };
  const double t1 = draw_positive(tr.t1_mean_ns);
  const double t2 = draw_positive(tr.t2_mean_ns);
  return {t1, std::min(t2, 2.0 * t1)};
}

/// One relaxation-time pair per qubit, or empty when the model has no
/// thermal component.
inline std::vector<RelaxationTimes> sample_register_times(RngStream& rng, const NoiseModel& model, int n_qubits) {
  std::vector<RelaxationTimes> times;
  if (!model.thermal) return times;
  for (int q = 0; q < n_qubits; ++q) times.push_back(sample_relaxation_times(rng, *model.thermal));
  return times;
}

/// Exact outcome distribution of a plan under a model whose relaxation
/// times have already been drawn.
inline std::vector<double> simulate_with_times(const CircuitPlan& plan, const NoiseModel& model,
                                               std::span<const RelaxationTimes> times) {
  const int n = plan.n_qubits();
  if (!plan.ends_in_measurement()) throw Error("plan must end in measurement instructions");
  if (model.thermal && static_cast<int>(times.size()) != n) {
    throw Error("relaxation times must be provided for every qubit");
  }
  auto rho = DensityMatrix::basis_state(n, 0);
  auto relax = [&](const std::vector<int>& qubits, double duration) {
    if (!model.thermal) return;
    for (int q : qubits) {
      const auto& t = times[static_cast<std::size_t>(q)];
      rho = thermal_relax(rho, q, duration, t.t1_ns, t.t2_ns);
    }
  };

  for (const auto& ins : plan.instructions()) {
    const auto qubits = qubits_of(ins.kind);
    if (std::holds_alternative<Reset>(ins.kind)) {
      rho = reset_qubit(rho, qubits[0]);
    } else if (!std::holds_alternative<Measure>(ins.kind)) {
      rho = apply_unitary(rho, instruction_unitary(ins.kind, n));
      if (model.depolarizing) {
        const double p = qubits.size() == 1 ? model.depolarizing->p1 : model.depolarizing->p2;
        rho = depolarize(rho, p, qubits);
      }
    }
    relax(qubits, ins.duration_ns);
  }

  auto probs = basis_probabilities(rho);
  if (model.readout) probs = apply_readout(probs, *model.readout);
  return probs;
}

inline std::vector<double> simulate_noisy(const CircuitPlan& plan, const NoiseModel& model, RngStream& rng) {
  model.validate();
  const auto times = sample_register_times(rng, model, plan.n_qubits());
  return simulate_with_times(plan, model, times);
}

inline std::vector<double> simulate_ideal(const CircuitPlan& plan) { return simulate_with_times(plan, {}, {}); }

}  // namespace qbench
