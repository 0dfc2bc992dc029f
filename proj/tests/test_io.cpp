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

#include "qbench/config.hpp"
#include "qbench/csv.hpp"
#include "qbench/svg.hpp"
#include "qbench/validate.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace qbench {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qbench_test_" + name + "_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::vector<SweepRecord> sample_records() {
  SweepConfig cfg;
  cfg.axis = NoiseAxis::Readout;
  cfg.grid = default_grid(NoiseAxis::Readout, 6);
  cfg.states = RandomStates{3, 11};
  cfg.seed = 11;
  auto recs = run_sweep(cfg);
  cfg.mode = Mode::Shots;
  cfg.shots = 500;
  cfg.repeats = 4;
  cfg.bootstrap_resamples = 200;
  cfg.grid.resize(2);
  for (auto& r : run_sweep(cfg)) recs.push_back(r);
  return recs;
}

TEST(Csv, HeaderMatchesColumnContract) {
  EXPECT_EQ(csv_header(),
            "state_id,theta1,theta2,phi1,phi2,noise_type,p_readout,p_depol1,p_depol2,t1_ns,t2_ns,mode,shots,repeats,"
            "kappa,kappa_ci_lo,kappa_ci_hi,f,f_ci_lo,f_ci_hi,g01,g12,g20,gamma_undefined,seed");
}

TEST(Csv, TwelveSignificantDigitsAndEmptyFields) {
  EXPECT_EQ(format_real(1.0 / 3), "0.333333333333");
  EXPECT_EQ(format_real(std::optional<double>{}), "");
  SweepRecord r;
  r.noise_type = "readout";
  r.p_readout = 0.25;
  const auto f = csv_fields(r);
  EXPECT_EQ(f[6], "0.25");
  EXPECT_EQ(f[7], "");
  EXPECT_EQ(f[9], "");
  EXPECT_EQ(f[11], "exact");
  EXPECT_EQ(f[12], "");
}

TEST(Csv, RoundTripReproducesNumericFields) {
  const auto recs = sample_records();
  const auto text = emit_csv(recs);
  const auto back = parse_records(text);
  ASSERT_EQ(back.size(), recs.size());
  EXPECT_EQ(emit_csv(back), text);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(format_real(back[i].kappa), format_real(recs[i].kappa));
    EXPECT_EQ(format_real(back[i].f), format_real(recs[i].f));
    EXPECT_EQ(format_real(back[i].kappa_ci_lo), format_real(recs[i].kappa_ci_lo));
    EXPECT_EQ(back[i].shots, recs[i].shots);
    EXPECT_EQ(back[i].gamma_undefined, recs[i].gamma_undefined);
    EXPECT_EQ(back[i].seed, recs[i].seed);
  }
}

TEST(Csv, ParseRejectsRaggedRowsAndForeignHeaders) {
  EXPECT_THROW(parse_csv("a,b\n1,2,3\n"), Error);
  EXPECT_THROW(parse_records("a,b\n1,2\n"), Error);
}

TEST(Csv, AtomicWriteReplacesWholeFileAndLeavesNoTemporaries) {
  const auto dir = scratch_dir("atomic");
  const auto target = dir / "out.csv";
  write_file_atomic(target, "old\n");
  write_file_atomic(target, "new contents\n");
  EXPECT_EQ(slurp(target), "new contents\n");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1);
  EXPECT_THROW(write_file_atomic(dir / "missing" / "x.csv", "data"), Error);
  EXPECT_EQ(slurp(target), "new contents\n");
  fs::remove_all(dir);
}

TEST(Config, FullDocumentPopulatesSettings) {
  SweepSettings s;
  apply_config(parse_config_text(R"({
    "sweep": {"noise": "thermal", "steps": 5, "state": "random", "n_states": 4, "mode": "shots",
              "shots": 1000, "repeats": 6, "ci_level": 0.95, "bootstrap_resamples": 300, "seed": 9,
              "t2_ratio": 1.5, "threads": 2},
    "noise": {"readout": {"matrix": [[[0.98, 0.02], [0.05, 0.95]], [[0.97, 0.03], [0.04, 0.96]]]},
              "depolarizing": {"p1": 0.001, "p2": 0.01},
              "thermal": {"sigma_fraction": 0.2, "deterministic": true}},
    "durations": {"u_ns": 50, "cnot_ns": 250, "reset_ns": 900, "measure_ns": 800}
  })"),
               s);
  EXPECT_EQ(s.noise, "thermal");
  EXPECT_EQ(s.steps, 5);
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(s.durations.cnot_ns, 250);
  ASSERT_TRUE(s.base.readout.has_value());
  EXPECT_EQ(s.base.readout->per_qubit[1][1][0], 0.04);
  EXPECT_TRUE(s.thermal_deterministic);
  const auto cfg = to_sweep_config(s);
  EXPECT_EQ(cfg.axis, NoiseAxis::Thermal);
  EXPECT_EQ(cfg.grid.size(), 5u);
  EXPECT_DOUBLE_EQ(*cfg.grid[0].t2_ns, 1.5 * *cfg.grid[0].t1_ns);
  EXPECT_EQ(cfg.mode, Mode::Shots);
  EXPECT_EQ(std::get<RandomStates>(cfg.states).n_states, 4);
}

TEST(Config, ExplicitGridReplacesDefault) {
  SweepSettings s;
  apply_config(parse_config_text(R"({"sweep": {"noise": "readout", "grid": [0.0, 0.5, 0.9]}})"), s);
  const auto cfg = to_sweep_config(s);
  ASSERT_EQ(cfg.grid.size(), 3u);
  EXPECT_EQ(*cfg.grid[2].readout_p, 0.9);
}

TEST(Config, LaterOverridesWin) {
  SweepSettings s;
  apply_config(parse_config_text(R"({"sweep": {"steps": 7, "seed": 3}})"), s);
  s.steps = 3;  // as a command-line flag would
  EXPECT_EQ(to_sweep_config(s).grid.size(), 3u);
}

TEST(Config, UnknownKeyReportsPath) {
  SweepSettings s;
  try {
    apply_config(parse_config_text(R"({"noise": {"depolarizing": {"p3": 0.1}}})"), s);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("noise.depolarizing.p3"), std::string::npos);
  }
}

TEST(Config, WrongTypeReportsPath) {
  SweepSettings s;
  try {
    apply_config(parse_config_text(R"({"sweep": {"steps": "many"}})"), s);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sweep.steps"), std::string::npos);
  }
}

TEST(Config, SyntaxErrorReportsLine) {
  try {
    parse_config_text("{\n  \"sweep\": {\n    \"steps\": ,\n  }\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, ThermalT2AboveTwiceT1IsRejectedAsNotCompletelyPositive) {
  SweepSettings s;
  try {
    apply_config(parse_config_text(R"({"noise": {"thermal": {"t1_ns": 1000, "t2_ns": 3000}}})"), s);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("not completely positive"), std::string::npos);
  }
}

TEST(Config, InvalidValuesRejected) {
  SweepSettings s;
  EXPECT_THROW(apply_config(parse_config_text(R"({"noise": {"readout": {"p": 1.5}}})"), s), ConfigError);
  EXPECT_THROW(apply_config(parse_config_text(R"({"noise": {"readout": {}}})"), s), ConfigError);
  EXPECT_THROW(apply_config(parse_config_text(R"({"durations": {"u_ns": 0}})"), s), ConfigError);
  EXPECT_THROW(apply_config(parse_config_text(R"([1, 2])"), s), ConfigError);
  SweepSettings bad;
  bad.noise = "cosmic-rays";
  EXPECT_THROW(to_sweep_config(bad), ConfigError);
  bad = {};
  bad.mode = "shots";
  bad.repeats = 1;
  EXPECT_THROW(to_sweep_config(bad), ConfigError);
  bad = {};
  bad.t2_ratio = 3;
  EXPECT_THROW(to_sweep_config(bad), ConfigError);
}

CsvTable tiny_table() {
  return parse_csv(
      "state_id,p_readout,kappa,f\n"
      "0,0,0,1\n0,0.5,0,0\n0,1,0,\n"
      "1,0,0,1\n1,0.5,0.01,0.2\n1,1,-0.02,0.5\n");
}

TEST(Svg, DeterministicAndOneSeriesPerState) {
  const auto a = render_svg(tiny_table(), {"p_readout", "kappa"});
  EXPECT_EQ(a, render_svg(tiny_table(), {"p_readout", "kappa"}));
  EXPECT_NE(a.find("version=\"1.1\""), std::string::npos);
  EXPECT_NE(a.find("data-series=\"0\""), std::string::npos);
  EXPECT_NE(a.find("data-series=\"1\""), std::string::npos);
  EXPECT_NE(a.find(">p_readout</text>"), std::string::npos);
  EXPECT_NE(a.find(">kappa</text>"), std::string::npos);
}

TEST(Svg, SkipsEmptyCells) {
  const auto s = render_svg(tiny_table(), {"p_readout", "f"});
  std::size_t circles = 0;
  for (auto pos = s.find("<circle"); pos != std::string::npos; pos = s.find("<circle", pos + 1)) ++circles;
  EXPECT_EQ(circles, 5u);
}

TEST(Svg, EmptyBodyGivesAxesOnly) {
  const auto s = render_svg(parse_csv(csv_header() + "\n"), {"p_readout", "kappa"});
  EXPECT_EQ(s.find("<circle"), std::string::npos);
  EXPECT_NE(s.find("<line"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
}

TEST(Svg, MissingColumnThrows) {
  EXPECT_THROW(render_svg(tiny_table(), {"p_depol1", "kappa"}), PlotError);
  EXPECT_THROW(render_svg(tiny_table(), {"p_readout", "gamma"}), PlotError);
}

TEST(Svg, MatchesGoldenFile) {
  const auto golden = slurp(fs::path(QBENCH_TEST_DATA_DIR) / "tiny_kappa.svg");
  ASSERT_FALSE(golden.empty()) << "golden file missing";
  EXPECT_EQ(render_svg(tiny_table(), {"p_readout", "kappa"}), golden);
}

TEST(Validate, PristineSuitePasses) {
  for (const auto& r : run_validation_suite()) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

TEST(Validate, TamperedKappaFactorFailsAtHalf) {
  const auto r = check_kappa_fixed_points([](const ProjectionProbabilities& pp) {
    return 2 * pp.p012 - 2 * (pp.p01 + pp.p12 + pp.p20) + (pp.p0 + pp.p1 + pp.p2);
  });
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.detail.find("kappa(p=0.5) = -0.25"), std::string::npos) << r.detail;
}

}  // namespace
}  // namespace qbench
