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

// Interference metrics computed from projection probabilities.
//
// All probabilities are overlaps with *normalized* projection states, so a
// pair probability p_ij = |x_i + x_j|^2 / 2 and the triple probability
// p012 = |x_0 + x_1 + x_2|^2 / 3. The factors 2 and 3 below undo that
// normalization so that ideal pure states give gamma_ij = cos(phase
// difference), F = 1 and kappa = 0.

#pragma once

#include "qbench/circuits.hpp"
#include "qbench/qcore.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qbench {

inline constexpr double kMarginalFloor = 1e-9;

class GammaUndefined : public Error {
 public:
  GammaUndefined(std::string pair, const std::string& message) : Error(message), pair_(std::move(pair)) {}

  static GammaUndefined for_marginals(std::string pair, double p_i, double p_j) {
    std::string msg = "gamma_" + pair + " undefined: marginal probabilities " + std::to_string(p_i) + ", " +
                      std::to_string(p_j) + " must exceed 1e-9";
    return GammaUndefined(std::move(pair), msg);
  }

  const std::string& pair() const { return pair_; }

 private:
  std::string pair_;
};

struct ProjectionProbabilities {
  double p012 = 0.0;
  double p01 = 0.0;
  double p12 = 0.0;
  double p20 = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  double& operator[](ProjectionLabel label) {
    switch (label) {
      case ProjectionLabel::P012: return p012;
      case ProjectionLabel::P01: return p01;
      case ProjectionLabel::P12: return p12;
      case ProjectionLabel::P20: return p20;
      case ProjectionLabel::P0: return p0;
      case ProjectionLabel::P1: return p1;
      case ProjectionLabel::P2: return p2;
    }
    throw Error("unknown projection label");
  }

  double operator[](ProjectionLabel label) const { return const_cast<ProjectionProbabilities&>(*this)[label]; }
};

struct GammaSet {
  double g01 = 0.0;
  double g12 = 0.0;
  double g20 = 0.0;
};

struct PeresResult {
  GammaSet gammas;
  double f = 0.0;
};

struct SorkinResult {
  double kappa = 0.0;
};

/// gamma_ij = (2 p_ij - p_i - p_j) / (2 sqrt(p_i p_j)).
inline double gamma(double p_ij, double p_i, double p_j, const std::string& pair = "ij") {
  if (!(p_i > kMarginalFloor) || !(p_j > kMarginalFloor)) throw GammaUndefined::for_marginals(pair, p_i, p_j);
  return (2.0 * p_ij - p_i - p_j) / (2.0 * std::sqrt(p_i * p_j));
}

inline GammaSet gammas(const ProjectionProbabilities& pp) {
  return {gamma(pp.p01, pp.p0, pp.p1, "01"), gamma(pp.p12, pp.p1, pp.p2, "12"), gamma(pp.p20, pp.p2, pp.p0, "20")};
}

inline PeresResult peres_f(const GammaSet& g) {
  const double f = g.g01 * g.g01 + g.g12 * g.g12 + g.g20 * g.g20 - 2.0 * g.g01 * g.g12 * g.g20;
  return {g, f};
}

inline PeresResult peres_f(const ProjectionProbabilities& pp) { return peres_f(gammas(pp)); }

/// kappa = 3 p012 - 2 (p01 + p12 + p20) + (p0 + p1 + p2).
inline SorkinResult sorkin_kappa(const ProjectionProbabilities& pp) {
  return {3.0 * pp.p012 - 2.0 * (pp.p01 + pp.p12 + pp.p20) + (pp.p0 + pp.p1 + pp.p2)};
}

/// n-path Sorkin parameter on path amplitudes:
///   |sum x_i|^2 - sum_{i<j} |x_i + x_j|^2 + (n - 2) sum |x_i|^2,
/// which vanishes identically.
inline double kappa_n(std::span<const Complex> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error("kappa_n needs at least one amplitude");
  Complex total = 0.0;
  double singles = 0.0;
  for (const auto& xi : x) {
    total += xi;
    singles += std::norm(xi);
  }
  double pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs += std::norm(x[i] + x[j]);
  }
  return std::norm(total) - pairs + (static_cast<double>(n) - 2.0) * singles;
}

/// The same quantity in its defining form, summing over all ordered pairs
/// (including i == j): |sum x_i|^2 - (1/2) sum_{i,j} |x_i + x_j|^2
/// + n sum |x_i|^2.
inline double kappa_n_defining(std::span<const Complex> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error("kappa_n needs at least one amplitude");
  Complex total = 0.0;
  double singles = 0.0;
  for (const auto& xi : x) {
    total += xi;
    singles += std::norm(xi);
  }
  double all_pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) all_pairs += std::norm(x[i] + x[j]);
  }
  return std::norm(total) - 0.5 * all_pairs + static_cast<double>(n) * singles;
}

/// Measured subset-projection probabilities for an n-path test. Each is an
/// overlap with a normalized equal superposition of the named paths.
struct SubsetProbabilities {
  std::optional<double> full;
  std::map<std::pair<int, int>, double> pairs;  // keys with first < second
  std::vector<double> singles;
};

/// n p_full - 2 sum_{i<j} p_ij + (n - 2) sum p_i; zero under the Born rule.
inline double kappa_n_defect(const SubsetProbabilities& sp, int n) {
  if (n < 1) throw Error("kappa_n_defect needs n >= 1");
  if (!sp.full) throw Error("missing full-superposition probability");
  if (static_cast<int>(sp.singles.size()) != n) {
    throw Error("expected " + std::to_string(n) + " single-path probabilities, got " +
                std::to_string(sp.singles.size()));
  }
  double pair_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto it = sp.pairs.find({i, j});
      if (it == sp.pairs.end()) {
        throw Error("missing pair probability (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      pair_sum += it->second;
    }
  }
  double single_sum = 0.0;
  for (double p : sp.singles) single_sum += p;
  return n * *sp.full - 2.0 * pair_sum + (n - 2.0) * single_sum;
}

}  // namespace qbench
