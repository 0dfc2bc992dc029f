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

// Preparation and projection circuits for the joint interference test,
// compiled to the gate set {U(theta, phi, lambda), CNOT, reset, measure}.
//
// The prepared state lives on the three levels |00>, |01>, |11>:
//
//   cos(t1/2)|00> + e^{i p1} sin(t1/2) cos(t2/2)|01>
//                 + e^{i(p1+p2)} sin(t1/2) sin(t2/2)|11>
//
// Level 0 is |00>, level 1 is |01>, level 2 is |11>.

#pragma once

#include "qbench/qcore.hpp"
#include "qbench/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qbench {

struct SingleU {
  int qubit = 0;
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
};

struct Cnot {
  int control = 0;
  int target = 1;
};

struct Reset {
  int qubit = 0;
};

struct Measure {
  int qubit = 0;
};

using GateKind = std::variant<SingleU, Cnot, Reset, Measure>;

struct GateInstruction {
  GateKind kind;
  double duration_ns = 0.0;
};

/// Per-instruction durations used for thermal relaxation.
struct GateDurations {
  double single_u_ns = 100.0;
  double cnot_ns = 300.0;
  double reset_ns = 1000.0;
  double measure_ns = 1000.0;

  double of(const GateKind& kind) const {
    struct Visitor {
      const GateDurations& d;
      double operator()(const SingleU&) const { return d.single_u_ns; }
      double operator()(const Cnot&) const { return d.cnot_ns; }
      double operator()(const Reset&) const { return d.reset_ns; }
      double operator()(const Measure&) const { return d.measure_ns; }
    };
    return std::visit(Visitor{*this}, kind);
  }

  double longest() const { return std::max({single_u_ns, cnot_ns, reset_ns, measure_ns}); }

  void validate() const {
    for (double d : {single_u_ns, cnot_ns, reset_ns, measure_ns}) {
      if (!(d > 0.0) || !std::isfinite(d)) throw Error("gate durations must be positive and finite");
    }
  }
};

inline std::vector<int> qubits_of(const GateKind& kind) {
  struct Visitor {
    std::vector<int> operator()(const SingleU& g) const { return {g.qubit}; }
    std::vector<int> operator()(const Cnot& g) const { return {g.control, g.target}; }
    std::vector<int> operator()(const Reset& g) const { return {g.qubit}; }
    std::vector<int> operator()(const Measure& g) const { return {g.qubit}; }
  };
  return std::visit(Visitor{}, kind);
}

/// Ordered instruction list. Measurements may only be followed by further
/// measurements.
class CircuitPlan {
 public:
  explicit CircuitPlan(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw DimensionError("qubit count out of range");
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<GateInstruction>& instructions() const { return instructions_; }
  std::size_t size() const { return instructions_.size(); }

  CircuitPlan& append(GateKind kind, double duration_ns) {
    if (!(duration_ns > 0.0) || !std::isfinite(duration_ns)) {
      throw Error("instruction duration must be positive");
    }
    const auto qubits = qubits_of(kind);
    for (int q : qubits) {
      if (q < 0 || q >= n_qubits_) throw DimensionError("instruction addresses qubit " + std::to_string(q));
    }
    if (qubits.size() == 2 && qubits[0] == qubits[1]) throw Error("CNOT control and target coincide");
    if (const auto* u = std::get_if<SingleU>(&kind)) {
      if (!std::isfinite(u->theta) || !std::isfinite(u->phi) || !std::isfinite(u->lambda)) {
        throw Error("gate angles must be finite");
      }
    }
    const bool is_measure = std::holds_alternative<Measure>(kind);
    if (!is_measure && measured_) throw Error("only measurements may follow a measurement");
    measured_ = measured_ || is_measure;
    instructions_.push_back({std::move(kind), duration_ns});
    return *this;
  }

  CircuitPlan& append(GateKind kind, const GateDurations& durations) {
    const double d = durations.of(kind);
    return append(std::move(kind), d);
  }

  /// Concatenation; `tail` is appended after this plan's instructions.
  CircuitPlan then(const CircuitPlan& tail) const {
    if (tail.n_qubits_ != n_qubits_) throw DimensionError("cannot join plans over different registers");
    CircuitPlan out = *this;
    for (const auto& ins : tail.instructions_) out.append(ins.kind, ins.duration_ns);
    return out;
  }

  bool ends_in_measurement() const { return measured_; }

 private:
  int n_qubits_;
  std::vector<GateInstruction> instructions_;
  bool measured_ = false;
};

// U(theta, phi, lambda) =
//   [ cos(theta/2)               -e^{i lambda} sin(theta/2)         ]
//   [ e^{i phi} sin(theta/2)      e^{i(phi + lambda)} cos(theta/2)  ]
inline UnitaryMatrix u_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  CMatrix m(2, 2);
  m(0, 0) = c;
  m(0, 1) = -std::polar(1.0, lambda) * s;
  m(1, 0) = std::polar(1.0, phi) * s;
  m(1, 1) = std::polar(1.0, phi + lambda) * c;
  return UnitaryMatrix::from_matrix(std::move(m));
}

/// Inverse gate: U(theta, phi, lambda)^-1 = U(-theta, -lambda, -phi).
inline SingleU inverse(const SingleU& g) { return {g.qubit, -g.theta, -g.lambda, -g.phi}; }

/// Register unitary of a unitary instruction. Reset and Measure have none.
inline UnitaryMatrix instruction_unitary(const GateKind& kind, int n_qubits) {
  if (const auto* u = std::get_if<SingleU>(&kind)) {
    return embed_unitary(u_matrix(u->theta, u->phi, u->lambda), {u->qubit}, n_qubits);
  }
  if (const auto* c = std::get_if<Cnot>(&kind)) {
    return embed_unitary(gates::cnot(), {c->control, c->target}, n_qubits);
  }
  throw Error("instruction has no unitary");
}

struct PreparationParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

struct ProjectionParams {
  double t1 = 0.0;
  double t2 = 0.0;
};

inline double wrap_phase(double phi) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

inline double check_polar_angle(double theta, const char* name) {
  constexpr double kSlack = 1e-12;
  if (!std::isfinite(theta) || theta < -kSlack || theta > std::numbers::pi + kSlack) {
    throw Error(std::string(name) + " must lie in [0, pi]");
  }
  return std::clamp(theta, 0.0, std::numbers::pi);
}

/// Polar angles checked into [0, pi], phases wrapped into [0, 2 pi).
inline PreparationParams canonical(const PreparationParams& p) {
  return {check_polar_angle(p.theta1, "theta1"), check_polar_angle(p.theta2, "theta2"), wrap_phase(p.phi1),
          wrap_phase(p.phi2)};
}

inline ProjectionParams canonical(const ProjectionParams& t) {
  return {check_polar_angle(t.t1, "t1"), check_polar_angle(t.t2, "t2")};
}

namespace detail {

// Controlled-U(theta, 0, 0): control 0, target 1.
inline void append_controlled_ry(CircuitPlan& plan, double theta, const GateDurations& d) {
  plan.append(SingleU{1, theta / 2.0, 0.0, 0.0}, d);
  plan.append(Cnot{0, 1}, d);
  plan.append(SingleU{1, -theta / 2.0, 0.0, 0.0}, d);
  plan.append(Cnot{0, 1}, d);
}

// Controlled-U(0, 0, lambda): control 0, target 1.
inline void append_controlled_phase(CircuitPlan& plan, double lambda, const GateDurations& d) {
  plan.append(SingleU{0, 0.0, 0.0, lambda / 2.0}, d);
  plan.append(Cnot{0, 1}, d);
  plan.append(SingleU{1, 0.0, 0.0, -lambda / 2.0}, d);
  plan.append(Cnot{0, 1}, d);
  plan.append(SingleU{1, 0.0, 0.0, lambda / 2.0}, d);
}

inline CircuitPlan preparation_gates(const PreparationParams& p, const GateDurations& d) {
  CircuitPlan plan(2);
  plan.append(SingleU{0, p.theta1, 0.0, 0.0}, d);
  plan.append(SingleU{0, 0.0, 0.0, p.phi1}, d);
  append_controlled_ry(plan, p.theta2, d);
  append_controlled_phase(plan, p.phi2, d);
  return plan;
}

}  // namespace detail

inline CircuitPlan build_preparation(const PreparationParams& params, const GateDurations& durations = {}) {
  const auto p = canonical(params);
  CircuitPlan plan(2);
  plan.append(Reset{0}, durations);
  plan.append(Reset{1}, durations);
  return plan.then(detail::preparation_gates(p, durations));
}

/// Inverse of the zero-phase preparation circuit for (t1, t2), followed by
/// measurement of both qubits. The probability of outcome 00 is then
/// |<phi(t1, t2)|psi>|^2 for the input state psi.
inline CircuitPlan build_projection(const ProjectionParams& params, const GateDurations& durations = {}) {
  const auto t = canonical(params);
  const auto forward = detail::preparation_gates({t.t1, t.t2, 0.0, 0.0}, durations);
  CircuitPlan plan(2);
  const auto& ins = forward.instructions();
  for (auto it = ins.rbegin(); it != ins.rend(); ++it) {
    if (const auto* u = std::get_if<SingleU>(&it->kind)) {
      plan.append(inverse(*u), it->duration_ns);
    } else {
      plan.append(it->kind, it->duration_ns);  // CNOT is self-inverse
    }
  }
  plan.append(Measure{0}, durations);
  plan.append(Measure{1}, durations);
  return plan;
}

enum class ProjectionLabel { P012, P01, P12, P20, P0, P1, P2 };

inline constexpr std::array<ProjectionLabel, 7> kProjectionLabels = {
    ProjectionLabel::P012, ProjectionLabel::P01, ProjectionLabel::P12, ProjectionLabel::P20,
    ProjectionLabel::P0,   ProjectionLabel::P1,  ProjectionLabel::P2};

inline std::string_view to_string(ProjectionLabel label) {
  switch (label) {
    case ProjectionLabel::P012: return "P012";
    case ProjectionLabel::P01: return "P01";
    case ProjectionLabel::P12: return "P12";
    case ProjectionLabel::P20: return "P20";
    case ProjectionLabel::P0: return "P0";
    case ProjectionLabel::P1: return "P1";
    case ProjectionLabel::P2: return "P2";
  }
  return "?";
}

/// (t1, t2) whose projection state is the normalized equal superposition of
/// the labelled levels.
inline ProjectionParams projection_setting(ProjectionLabel label) {
  constexpr double pi = std::numbers::pi;
  switch (label) {
    case ProjectionLabel::P012: return {2.0 * std::acos(1.0 / std::sqrt(3.0)), pi / 2.0};
    case ProjectionLabel::P01: return {pi / 2.0, 0.0};
    case ProjectionLabel::P12: return {pi, pi / 2.0};
    case ProjectionLabel::P20: return {pi / 2.0, pi};
    case ProjectionLabel::P0: return {0.0, 0.0};
    case ProjectionLabel::P1: return {pi, 0.0};
    case ProjectionLabel::P2: return {pi, pi};
  }
  throw Error("unknown projection label");
}

struct ProjectionSetting {
  ProjectionLabel label;
  ProjectionParams params;
};

inline std::array<ProjectionSetting, 7> projection_settings() {
  std::array<ProjectionSetting, 7> out{};
  for (std::size_t i = 0; i < kProjectionLabels.size(); ++i) {
    out[i] = {kProjectionLabels[i], projection_setting(kProjectionLabels[i])};
  }
  return out;
}

inline StateVector analytic_amplitudes(const PreparationParams& params) {
  const auto p = canonical(params);
  const double c1 = std::cos(p.theta1 / 2.0), s1 = std::sin(p.theta1 / 2.0);
  const double c2 = std::cos(p.theta2 / 2.0), s2 = std::sin(p.theta2 / 2.0);
  return StateVector({Complex(c1, 0.0), std::polar(s1 * c2, p.phi1), Complex(0.0, 0.0),
                      std::polar(s1 * s2, p.phi1 + p.phi2)});
}

/// Closed-form projection state |phi(t1, t2)> (real amplitudes).
inline StateVector projection_state(const ProjectionParams& params) {
  const auto t = canonical(params);
  const double c1 = std::cos(t.t1 / 2.0), s1 = std::sin(t.t1 / 2.0);
  return StateVector({c1, s1 * std::cos(t.t2 / 2.0), 0.0, s1 * std::sin(t.t2 / 2.0)});
}

/// Inverse-transform maps from a uniform r in [0, 1].
inline double polar_angle_from_uniform(double r) { return std::acos(1.0 - 2.0 * r); }
inline double phase_from_uniform(double r) { return 2.0 * std::numbers::pi * r; }

inline PreparationParams random_preparation(RngStream& rng) {
  PreparationParams p;
  p.theta1 = polar_angle_from_uniform(rng.uniform());
  p.theta2 = polar_angle_from_uniform(rng.uniform());
  p.phi1 = phase_from_uniform(rng.uniform());
  p.phi2 = phase_from_uniform(rng.uniform());
  return p;
}

/// The fixed benchmark state (|00> + e^{i pi/4}|01> + e^{i pi/2}|11>) / sqrt(3).
inline PreparationParams specific_state_params() {
  constexpr double pi = std::numbers::pi;
  return {2.0 * std::acos(1.0 / std::sqrt(3.0)), pi / 2.0, pi / 4.0, pi / 4.0};
}

/// Noise-free pure-state evolution of the unitary part of a plan starting
/// from |0...0>. Resets are only accepted before the first unitary gate.
inline StateVector ideal_statevector(const CircuitPlan& plan) {
  const int n = plan.n_qubits();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(0) = 1.0;
  bool touched = false;
  for (const auto& ins : plan.instructions()) {
    if (std::holds_alternative<Reset>(ins.kind)) {
      if (touched) throw Error("mid-circuit reset has no pure-state evolution");
      continue;
    }
    if (std::holds_alternative<Measure>(ins.kind)) continue;
    v = instruction_unitary(ins.kind, n).matrix() * v;
    touched = true;
  }
  std::vector<Complex> amps(v.data(), v.data() + v.size());
  return StateVector(std::move(amps));
}

// Line-oriented text form, one instruction per line:
//   QUBITS <n>
//   U <qubit> <theta> <phi> <lambda> <duration_ns>
//   CNOT <control> <target> <duration_ns>
//   RESET <qubit> <duration_ns>
//   MEASURE <qubit> <duration_ns>
inline std::string to_text(const CircuitPlan& plan) {
  std::string out = "QUBITS " + std::to_string(plan.n_qubits()) + "\n";
  char buf[256];
  for (const auto& ins : plan.instructions()) {
    if (const auto* u = std::get_if<SingleU>(&ins.kind)) {
      std::snprintf(buf, sizeof buf, "U %d %.17g %.17g %.17g %.17g\n", u->qubit, u->theta + 0.0, u->phi + 0.0,
                    u->lambda + 0.0, ins.duration_ns);
    } else if (const auto* c = std::get_if<Cnot>(&ins.kind)) {
      std::snprintf(buf, sizeof buf, "CNOT %d %d %.17g\n", c->control, c->target, ins.duration_ns);
    } else if (const auto* r = std::get_if<Reset>(&ins.kind)) {
      std::snprintf(buf, sizeof buf, "RESET %d %.17g\n", r->qubit, ins.duration_ns);
    } else {
      const auto& m = std::get<Measure>(ins.kind);
      std::snprintf(buf, sizeof buf, "MEASURE %d %.17g\n", m.qubit, ins.duration_ns);
    }
    out += buf;
  }
  return out;
}

inline CircuitPlan parse_plan(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::optional<CircuitPlan> plan;
  auto fail = [&](const std::string& why) -> Error {
    return Error("circuit text line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    if (op == "QUBITS") {
      int n = 0;
      if (plan || !(ls >> n)) throw fail("bad QUBITS header");
      plan.emplace(n);
      continue;
    }
    if (!plan) throw fail("missing QUBITS header");
    GateKind kind;
    if (op == "U") {
      SingleU g;
      if (!(ls >> g.qubit >> g.theta >> g.phi >> g.lambda)) throw fail("malformed U");
      kind = g;
    } else if (op == "CNOT") {
      Cnot g;
      if (!(ls >> g.control >> g.target)) throw fail("malformed CNOT");
      kind = g;
    } else if (op == "RESET") {
      Reset g;
      if (!(ls >> g.qubit)) throw fail("malformed RESET");
      kind = g;
    } else if (op == "MEASURE") {
      Measure g;
      if (!(ls >> g.qubit)) throw fail("malformed MEASURE");
      kind = g;
    } else {
      throw fail("unknown instruction '" + op + "'");
    }
    double duration = 0.0;
    if (!(ls >> duration)) throw fail("missing duration");
    plan->append(kind, duration);
  }
  if (!plan) throw Error("circuit text is empty");
  return *plan;
}

}  // namespace qbench
