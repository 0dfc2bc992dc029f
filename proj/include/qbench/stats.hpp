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

#pragma once

#include "qbench/metrics.hpp"
#include "qbench/qcore.hpp"
#include "qbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace qbench {

struct ShotCounts {
  std::vector<std::uint64_t> counts;  // indexed by outcome
  std::uint64_t n_shots = 0;
};

/// Multinomial draw made of `n_shots` independent categorical samples.
inline ShotCounts sample_counts(std::span<const double> probs, std::uint64_t n_shots, RngStream& rng) {
  if (n_shots == 0) throw Error("at least one shot is required");
  if (probs.empty()) throw Error("empty outcome distribution");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw Error("outcome probabilities must be non-negative");
    acc += probs[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw Error("outcome probabilities sum to zero");
  for (auto& c : cdf) c /= acc;
  // The last outcome with non-zero weight closes the interval exactly.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) {
      for (std::size_t j = i; j < cdf.size(); ++j) cdf[j] = 1.0;
      break;
    }
  }

  ShotCounts out{std::vector<std::uint64_t>(probs.size(), 0), n_shots};
  const std::size_t last = cdf.size() - 1;
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    const double u = rng.uniform();
    std::size_t k = 0;
    while (k < last && !(u < cdf[k])) ++k;
    ++out.counts[k];
  }
  return out;
}

inline std::vector<double> estimate_probs(const ShotCounts& c) {
  if (c.n_shots == 0) throw Error("shot counts are empty");
  const std::uint64_t total = std::accumulate(c.counts.begin(), c.counts.end(), std::uint64_t{0});
  if (total != c.n_shots) throw Error("counts do not sum to the shot total");
  std::vector<double> p(c.counts.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(c.counts[i]) / static_cast<double>(c.n_shots);
  return p;
}

struct BootstrapCI {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.99;
  int n_resamples = 10000;

  double half_width() const { return 0.5 * (hi - lo); }
};

/// Linear-interpolated quantile of sorted data.
inline double sorted_quantile(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Percentile bootstrap of the sample mean.
inline BootstrapCI bootstrap_ci(std::span<const double> samples, double level, int n_resamples, RngStream& rng) {
  if (samples.size() < 2) throw Error("bootstrap needs at least two samples");
  if (!(level > 0.0 && level < 1.0)) throw Error("confidence level must lie in (0, 1)");
  if (n_resamples < 1) throw Error("bootstrap needs at least one resample");

  const std::size_t n = samples.size();
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  std::vector<double> means(static_cast<std::size_t>(n_resamples));
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += samples[static_cast<std::size_t>(rng.next_u64() % n)];
    m = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - level) / 2.0;
  return {mean, sorted_quantile(means, tail), sorted_quantile(means, 1.0 - tail), level, n_resamples};
}

inline BootstrapCI bootstrap_ci(std::span<const double> samples, RngStream& rng) {
  return bootstrap_ci(samples, 0.99, 10000, rng);
}

/// 95% binomial fluctuation of a relative frequency: 1.96 sqrt(p(1-p)/N).
inline double delta_p(double p, std::uint64_t n) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("probability must lie in [0, 1]");
  if (n == 0) throw Error("trial count must be positive");
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

/// Largest |dF| over sign choices of the gamma errors, with
/// dF = 2 dg01 (g01 - g12 g20) + 2 dg12 (g12 - g01 g20) + 2 dg20 (g20 - g01 g12).
inline double propagate_f_error(const GammaSet& g, double dg01, double dg12, double dg20) {
  const double c01 = 2.0 * (g.g01 - g.g12 * g.g20);
  const double c12 = 2.0 * (g.g12 - g.g01 * g.g20);
  const double c20 = 2.0 * (g.g20 - g.g01 * g.g12);
  double best = 0.0;
  for (int signs = 0; signs < 8; ++signs) {
    const double s0 = (signs & 1) ? -1.0 : 1.0;
    const double s1 = (signs & 2) ? -1.0 : 1.0;
    const double s2 = (signs & 4) ? -1.0 : 1.0;
    best = std::max(best, std::abs(s0 * dg01 * c01 + s1 * dg12 * c12 + s2 * dg20 * c20));
  }
  return best;
}

/// First-order worst-case error of gamma = (2 p_ij - p_i - p_j) / (2 sqrt(p_i p_j)).
inline double propagate_gamma_error(double p_ij, double p_i, double p_j, double dp_ij, double dp_i, double dp_j) {
  const double g = gamma(p_ij, p_i, p_j);
  const double root = std::sqrt(p_i * p_j);
  const double d_ij = 1.0 / root;
  const double d_i = -1.0 / (2.0 * root) - g / (2.0 * p_i);
  const double d_j = -1.0 / (2.0 * root) - g / (2.0 * p_j);
  return std::abs(d_ij) * std::abs(dp_ij) + std::abs(d_i) * std::abs(dp_i) + std::abs(d_j) * std::abs(dp_j);
}

struct ErrorEstimate {
  ProjectionProbabilities delta_p;
  GammaSet delta_gamma;
  double delta_f = 0.0;
  double confidence = 0.95;
};

/// Shot-noise error budget for one joint test estimated from `n_shots`
/// shots per projection setting.
inline ErrorEstimate estimate_errors(const ProjectionProbabilities& pp, std::uint64_t n_shots) {
  ErrorEstimate e;
  for (auto label : kProjectionLabels) e.delta_p[label] = delta_p(std::clamp(pp[label], 0.0, 1.0), n_shots);
  const auto& d = e.delta_p;
  e.delta_gamma.g01 = propagate_gamma_error(pp.p01, pp.p0, pp.p1, d.p01, d.p0, d.p1);
  e.delta_gamma.g12 = propagate_gamma_error(pp.p12, pp.p1, pp.p2, d.p12, d.p1, d.p2);
  e.delta_gamma.g20 = propagate_gamma_error(pp.p20, pp.p2, pp.p0, d.p20, d.p2, d.p0);
  e.delta_f = propagate_f_error(gammas(pp), e.delta_gamma.g01, e.delta_gamma.g12, e.delta_gamma.g20);
  return e;
}

}  // namespace qbench
