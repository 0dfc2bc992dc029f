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

// Sweep records as CSV with a fixed column contract. Floats carry 12
// significant digits; non-applicable fields are empty.

#pragma once

#include "qbench/sweep.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

namespace qbench {

inline constexpr std::array<std::string_view, 25> kCsvColumns = {
    "state_id", "theta1",  "theta2",      "phi1",        "phi2",   "noise_type", "p_readout",
    "p_depol1", "p_depol2", "t1_ns",      "t2_ns",       "mode",   "shots",      "repeats",
    "kappa",    "kappa_ci_lo", "kappa_ci_hi", "f",       "f_ci_lo", "f_ci_hi",   "g01",
    "g12",      "g20",     "gamma_undefined", "seed"};

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string format_real(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

inline std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) out += ',';
    out += kCsvColumns[i];
  }
  return out;
}

inline std::vector<std::string> csv_fields(const SweepRecord& r) {
  return {std::to_string(r.state_id),
          format_real(r.prep.theta1),
          format_real(r.prep.theta2),
          format_real(r.prep.phi1),
          format_real(r.prep.phi2),
          r.noise_type,
          format_real(r.p_readout),
          format_real(r.p_depol1),
          format_real(r.p_depol2),
          format_real(r.t1_ns),
          format_real(r.t2_ns),
          std::string(to_string(r.mode)),
          r.shots ? std::to_string(*r.shots) : std::string(),
          r.repeats ? std::to_string(*r.repeats) : std::string(),
          format_real(r.kappa),
          format_real(r.kappa_ci_lo),
          format_real(r.kappa_ci_hi),
          format_real(r.f),
          format_real(r.f_ci_lo),
          format_real(r.f_ci_hi),
          format_real(r.g01),
          format_real(r.g12),
          format_real(r.g20),
          r.gamma_undefined ? "1" : "0",
          std::to_string(r.seed)};
}

inline std::string emit_csv(const std::vector<SweepRecord>& records) {
  std::string out = csv_header() + "\n";
  for (const auto& r : records) {
    const auto fields = csv_fields(r);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

/// Plain comma-separated parsing (no quoting; the emitted columns never
/// contain commas).
inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ls(s);
    while (std::getline(ls, field, ',')) out.push_back(field);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                  " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

inline std::vector<SweepRecord> parse_records(const std::string& text) {
  const auto table = parse_csv(text);
  if (table.header.size() != kCsvColumns.size()) throw Error("CSV header does not match the record schema");
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (table.header[i] != kCsvColumns[i]) throw Error("unexpected CSV column '" + table.header[i] + "'");
  }
  auto real = [](const std::string& s) { return std::stod(s); };
  auto opt = [&](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return real(s);
  };
  std::vector<SweepRecord> out;
  for (const auto& f : table.rows) {
    SweepRecord r;
    r.state_id = std::stoi(f[0]);
    r.prep = {real(f[1]), real(f[2]), real(f[3]), real(f[4])};
    r.noise_type = f[5];
    r.p_readout = opt(f[6]);
    r.p_depol1 = opt(f[7]);
    r.p_depol2 = opt(f[8]);
    r.t1_ns = opt(f[9]);
    r.t2_ns = opt(f[10]);
    if (f[11] != "exact" && f[11] != "shots") throw Error("unknown mode '" + f[11] + "'");
    r.mode = f[11] == "exact" ? Mode::Exact : Mode::Shots;
    if (!f[12].empty()) r.shots = std::stoull(f[12]);
    if (!f[13].empty()) r.repeats = std::stoi(f[13]);
    r.kappa = real(f[14]);
    r.kappa_ci_lo = opt(f[15]);
    r.kappa_ci_hi = opt(f[16]);
    r.f = opt(f[17]);
    r.f_ci_lo = opt(f[18]);
    r.f_ci_hi = opt(f[19]);
    r.g01 = opt(f[20]);
    r.g12 = opt(f[21]);
    r.g20 = opt(f[22]);
    r.gamma_undefined = f[23] == "1";
    r.seed = std::stoull(f[24]);
    out.push_back(std::move(r));
  }
  return out;
}

/// Writes via a sibling temporary file and rename, so the target path never
/// holds a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at " + path.string());
  }
}

}  // namespace qbench
