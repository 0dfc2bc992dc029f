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

// Test-only reference computations written directly from the textbook
// formulas with explicit 4x4 matrices. They share no code with the library
// beyond the Eigen types.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;
using V4 = Eigen::Vector4cd;

inline constexpr double kPi = std::numbers::pi;

inline M2 u3(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  M2 m;
  m << c, -std::polar(1.0, lambda) * s, std::polar(1.0, phi) * s, std::polar(1.0, phi + lambda) * c;
  return m;
}

inline M2 ry(double theta) { return u3(theta, 0, 0); }

inline M4 kron(const M2& a, const M2& b) {
  M4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

// Basis index 2*a + b for label |a b>; b is the rightmost qubit.
inline M4 on_b(const M2& u) { return kron(M2::Identity(), u); }
inline M4 on_a(const M2& u) { return kron(u, M2::Identity()); }

// Controlled by b, acting on a.
inline M4 controlled_on_a(const M2& u) {
  M2 p0 = M2::Zero(), p1 = M2::Zero();
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  return kron(M2::Identity(), p0) + kron(u, p1);
}

inline M2 phase(double lambda) {
  M2 m = M2::Identity();
  m(1, 1) = std::polar(1.0, lambda);
  return m;
}

// cos(t1/2)|00> + e^{i phi1} sin(t1/2) cos(t2/2)|01> + e^{i(phi1+phi2)} sin(t1/2) sin(t2/2)|11>
inline V4 prepared_state(double t1, double t2, double phi1, double phi2) {
  V4 v(1, 0, 0, 0);
  v = on_b(ry(t1)) * v;
  v = on_b(phase(phi1)) * v;
  v = controlled_on_a(ry(t2)) * v;
  v = controlled_on_a(phase(phi2)) * v;
  return v;
}

// Projection unitary W with W|phi(t1,t2)> = |00>.
inline M4 projection_unitary(double t1, double t2) {
  return (controlled_on_a(ry(t2)) * on_b(ry(t1))).adjoint();
}

inline M2 confusion(double p) {
  M2 m;
  m << 1 - p, p, p, 1 - p;
  return m;
}

// Outcome distribution of rho in the computational basis with symmetric
// readout flips of probability p on both qubits.
inline Eigen::Vector4d readout_distribution(const M4& rho, double p) {
  Eigen::Vector4d diag;
  for (int i = 0; i < 4; ++i) diag(i) = rho(i, i).real();
  const Eigen::Matrix4d r = kron(confusion(p), confusion(p)).real().transpose();
  return r * diag;
}

struct Seven {
  double p012, p01, p12, p20, p0, p1, p2;
};

inline std::array<std::array<double, 2>, 7> projection_angles() {
  const double a = 2 * std::acos(1 / std::sqrt(3.0));
  return {{{a, kPi / 2}, {kPi / 2, 0}, {kPi, kPi / 2}, {kPi / 2, kPi}, {0, 0}, {kPi, 0}, {kPi, kPi}}};
}

// P(00) of each projection with readout error p applied to the ideal state.
inline Seven readout_projections(const V4& psi, double p) {
  const auto ang = projection_angles();
  std::array<double, 7> out{};
  for (int k = 0; k < 7; ++k) {
    const M4 w = projection_unitary(ang[k][0], ang[k][1]);
    const V4 out_state = w * psi;
    const M4 rho = out_state * out_state.adjoint();
    out[k] = readout_distribution(rho, p)(0);
  }
  return {out[0], out[1], out[2], out[3], out[4], out[5], out[6]};
}

inline double kappa(const Seven& s) { return 3 * s.p012 - 2 * (s.p01 + s.p12 + s.p20) + s.p0 + s.p1 + s.p2; }

inline double peres(const Seven& s) {
  auto g = [](double pij, double pi, double pj) { return (2 * pij - pi - pj) / (2 * std::sqrt(pi * pj)); };
  const double a = g(s.p01, s.p0, s.p1), b = g(s.p12, s.p1, s.p2), c = g(s.p20, s.p2, s.p0);
  return a * a + b * b + c * c - 2 * a * b * c;
}

}  // namespace oracle
