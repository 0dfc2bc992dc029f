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

// JSON run configuration:
//
//   {
//     "sweep": {"noise": "readout", "steps": 21, "state": "random", "n_states": 20,
//               "mode": "exact", "shots": 100000, "repeats": 30, "ci_level": 0.99,
//               "bootstrap_resamples": 10000, "seed": 7, "t2_ratio": 2.0,
//               "threads": 0, "grid": [0.0, 0.1]},
//     "noise": {"readout": {"p": 0.02},           // or {"matrix": [[[0.98, 0.02], [0.05, 0.95]], ...]}
//               "depolarizing": {"p1": 0.001, "p2": 0.01},
//               "thermal": {"t1_ns": 5e4, "t2_ns": 7e4, "sigma_fraction": 0.1,
//                           "deterministic": false}},
//     "durations": {"u_ns": 100, "cnot_ns": 300, "reset_ns": 1000, "measure_ns": 1000}
//   }
//
// Every section and key is optional. "grid" lists explicit values along the
// swept axis (T1 in ns for the thermal axis) and replaces the default grid.

#pragma once

#include "qbench/noise.hpp"
#include "qbench/sweep.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qbench {

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// User-facing sweep knobs, filled from a config document and then from
/// command-line flags.
struct SweepSettings {
  std::string noise = "readout";
  int steps = 21;
  std::string state = "specific";
  int n_states = 20;
  std::string mode = "exact";
  std::uint64_t shots = 100000;
  int repeats = 30;
  double ci_level = 0.99;
  int bootstrap_resamples = 10000;
  std::uint64_t seed = 0;
  double t2_ratio = 2.0;
  int threads = 0;
  std::vector<double> grid;

  NoiseModel base;
  GateDurations durations;
  double thermal_sigma_fraction = 0.1;
  bool thermal_deterministic = false;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
  if (!obj.is_object()) throw ConfigError("config key '" + path + "' must be an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("unknown config key '" + path + "." + item.key() + "'");
  }
}

template <typename T>
void read_key(const json& obj, const std::string& path, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + path + "." + key + "' has the wrong type");
  }
}

inline ReadoutError read_readout(const json& j) {
  reject_unknown(j, "noise.readout", {"p", "matrix", "qubits"});
  const bool has_p = j.contains("p"), has_matrix = j.contains("matrix");
  if (has_p == has_matrix) throw ConfigError("config key 'noise.readout' needs exactly one of 'p' or 'matrix'");
  if (has_p) {
    double p = 0.0;
    read_key(j, "noise.readout", "p", p);
    int qubits = 2;
    read_key(j, "noise.readout", "qubits", qubits);
    try {
      return ReadoutError::symmetric(p, qubits);
    } catch (const Error& e) {
      throw ConfigError("config key 'noise.readout.p': " + std::string(e.what()));
    }
  }
  ReadoutError r;
  try {
    for (const auto& m : j.at("matrix")) r.per_qubit.push_back(m.get<Confusion>());
  } catch (const json::exception&) {
    throw ConfigError("config key 'noise.readout.matrix' must be a list of 2x2 matrices, one per qubit");
  }
  try {
    r.validate();
  } catch (const Error& e) {
    throw ConfigError("config key 'noise.readout.matrix': " + std::string(e.what()));
  }
  return r;
}

}  // namespace detail

/// Applies a parsed JSON document on top of `s`.
inline void apply_config(const nlohmann::json& doc, SweepSettings& s) {
  using detail::read_key;
  detail::reject_unknown(doc, "", {"sweep", "noise", "durations"});
  if (doc.contains("sweep")) {
    const auto& j = doc.at("sweep");
    detail::reject_unknown(j, "sweep",
                           {"noise", "steps", "state", "n_states", "mode", "shots", "repeats", "ci_level",
                            "bootstrap_resamples", "seed", "t2_ratio", "threads", "grid"});
    read_key(j, "sweep", "noise", s.noise);
    read_key(j, "sweep", "steps", s.steps);
    read_key(j, "sweep", "state", s.state);
    read_key(j, "sweep", "n_states", s.n_states);
    read_key(j, "sweep", "mode", s.mode);
    read_key(j, "sweep", "shots", s.shots);
    read_key(j, "sweep", "repeats", s.repeats);
    read_key(j, "sweep", "ci_level", s.ci_level);
    read_key(j, "sweep", "bootstrap_resamples", s.bootstrap_resamples);
    read_key(j, "sweep", "seed", s.seed);
    read_key(j, "sweep", "t2_ratio", s.t2_ratio);
    read_key(j, "sweep", "threads", s.threads);
    read_key(j, "sweep", "grid", s.grid);
  }
  if (doc.contains("noise")) {
    const auto& j = doc.at("noise");
    detail::reject_unknown(j, "noise", {"readout", "depolarizing", "thermal"});
    if (j.contains("readout")) s.base.readout = detail::read_readout(j.at("readout"));
    if (j.contains("depolarizing")) {
      const auto& d = j.at("depolarizing");
      detail::reject_unknown(d, "noise.depolarizing", {"p1", "p2"});
      DepolarizingError dep;
      read_key(d, "noise.depolarizing", "p1", dep.p1);
      read_key(d, "noise.depolarizing", "p2", dep.p2);
      try {
        dep.validate();
      } catch (const Error& e) {
        throw ConfigError("config key 'noise.depolarizing': " + std::string(e.what()));
      }
      s.base.depolarizing = dep;
    }
    if (j.contains("thermal")) {
      const auto& t = j.at("thermal");
      detail::reject_unknown(t, "noise.thermal", {"t1_ns", "t2_ns", "sigma_fraction", "deterministic"});
      read_key(t, "noise.thermal", "sigma_fraction", s.thermal_sigma_fraction);
      read_key(t, "noise.thermal", "deterministic", s.thermal_deterministic);
      const bool has_t1 = t.contains("t1_ns"), has_t2 = t.contains("t2_ns");
      if (has_t1 != has_t2) throw ConfigError("config key 'noise.thermal' needs both 't1_ns' and 't2_ns'");
      if (has_t1) {
        ThermalRelaxation tr;
        read_key(t, "noise.thermal", "t1_ns", tr.t1_mean_ns);
        read_key(t, "noise.thermal", "t2_ns", tr.t2_mean_ns);
        tr.sigma_fraction = s.thermal_sigma_fraction;
        tr.deterministic = s.thermal_deterministic;
        try {
          tr.validate();
        } catch (const Error& e) {
          throw ConfigError("config key 'noise.thermal': " + std::string(e.what()));
        }
        s.base.thermal = tr;
      }
    }
  }
  if (doc.contains("durations")) {
    const auto& j = doc.at("durations");
    detail::reject_unknown(j, "durations", {"u_ns", "cnot_ns", "reset_ns", "measure_ns"});
    read_key(j, "durations", "u_ns", s.durations.single_u_ns);
    read_key(j, "durations", "cnot_ns", s.durations.cnot_ns);
    read_key(j, "durations", "reset_ns", s.durations.reset_ns);
    read_key(j, "durations", "measure_ns", s.durations.measure_ns);
    try {
      s.durations.validate();
    } catch (const Error& e) {
      throw ConfigError("config key 'durations': " + std::string(e.what()));
    }
  }
}

/// Parses JSON text; syntax errors report line and column.
inline nlohmann::json parse_config_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
}

inline nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

inline SweepConfig to_sweep_config(const SweepSettings& s) {
  SweepConfig cfg;
  const auto axis = parse_noise_axis(s.noise);
  if (!axis) throw ConfigError("sweep.noise must be one of readout, depolarizing, thermal, readout-depolarizing");
  cfg.axis = *axis;
  if (s.mode != "exact" && s.mode != "shots") throw ConfigError("sweep.mode must be 'exact' or 'shots'");
  cfg.mode = s.mode == "exact" ? Mode::Exact : Mode::Shots;
  if (s.state == "specific") {
    cfg.states = SpecificState{};
  } else if (s.state == "random") {
    if (s.n_states < 1) throw ConfigError("sweep.n_states must be at least 1");
    cfg.states = RandomStates{s.n_states, s.seed};
  } else {
    throw ConfigError("sweep.state must be 'specific' or 'random'");
  }
  if (!(s.t2_ratio > 0.0 && s.t2_ratio <= 2.0)) throw ConfigError("sweep.t2_ratio must lie in (0, 2]");

  if (s.grid.empty()) {
    if (s.steps < 1) throw ConfigError("sweep.steps must be at least 1");
    cfg.grid = default_grid(cfg.axis, s.steps, s.t2_ratio);
  } else {
    for (double v : s.grid) {
      switch (cfg.axis) {
        case NoiseAxis::Readout: cfg.grid.push_back({.readout_p = v}); break;
        case NoiseAxis::Depolarizing: cfg.grid.push_back({.depol_p = v}); break;
        case NoiseAxis::Thermal: cfg.grid.push_back({.t1_ns = v, .t2_ns = s.t2_ratio * v}); break;
        case NoiseAxis::ReadoutDepolarizing:
          for (double w : s.grid) cfg.grid.push_back({.readout_p = v, .depol_p = w});
          break;
      }
    }
  }
  cfg.shots = s.shots;
  cfg.repeats = s.repeats;
  cfg.ci_level = s.ci_level;
  cfg.bootstrap_resamples = s.bootstrap_resamples;
  cfg.seed = s.seed;
  cfg.base = s.base;
  cfg.durations = s.durations;
  cfg.thermal_sigma_fraction = s.thermal_sigma_fraction;
  cfg.thermal_deterministic = s.thermal_deterministic;
  cfg.threads = s.threads;
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace qbench
