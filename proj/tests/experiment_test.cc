// Copyright 2026 The regen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "regen/experiment.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "regen/config.hpp"

namespace regen {
namespace {

const std::string kDir = REGEN_CONFIG_DIR;

ExperimentConfig preset(const char* name, SweepMode mode) {
  ExperimentConfig c = load_config(kDir + "/" + name);
  c.sweep.mode = mode;
  return c;
}

TEST(RunSweepTest, AnalyticFitIsExact) {
  const ExperimentConfig c = preset("table1.cfg", SweepMode::kAnalytic);
  for (double q : {8800.0, 7100.0}) {
    const SweepRun run = run_sweep(c, q, -55.0);
    ASSERT_TRUE(run.ok());
    EXPECT_LE(std::abs(run.fit.q_loaded - q) / q, 1e-3);
    EXPECT_NEAR(run.fit.f_center_hz, 9.590e9, 1e3);
    EXPECT_EQ(run.points.size(), 201u);
    EXPECT_EQ(run.spectrum.size(), 201);
  }
}

TEST(RunSweepTest, StochasticDeepSubPhotonRow) {
  ExperimentConfig c = preset("table1.cfg", SweepMode::kStochastic);
  const SweepRun run = run_sweep(c, 8200.0, -145.0);
  ASSERT_TRUE(run.ok());
  EXPECT_LE(std::abs(run.fit.q_loaded - 8200.0), 1000.0);
}

TEST(RunSweepTest, WideRbwBuriesTheDeepRow) {
  ExperimentConfig c = preset("table1.cfg", SweepMode::kStochastic);
  c.sweep.rbw_hz = 1e4;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    c.sweep.master_seed = seed;
    const SweepRun run = run_sweep(c, 8200.0, -145.0);
    const bool lost = !run.ok() || !run.fit.stderr || run.fit.stderr->q_loaded / run.fit.q_loaded > 0.5;
    EXPECT_TRUE(lost) << seed;
  }
}

TEST(RunSweepTest, SeedSwapStaysWithinUncertainty) {
  ExperimentConfig c = preset("table1.cfg", SweepMode::kStochastic);
  std::vector<FitResult> fits;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    c.sweep.master_seed = seed;
    fits.push_back(run_sweep(c, 8800.0, -55.0).fit);
    ASSERT_TRUE(fits.back().converged && fits.back().stderr);
  }
  for (std::size_t i = 1; i < fits.size(); ++i) {
    EXPECT_NE(fits[i].q_loaded, fits[0].q_loaded);
    EXPECT_LE(std::abs(fits[i].q_loaded - fits[0].q_loaded),
              3.0 * std::hypot(fits[i].stderr->q_loaded, fits[0].stderr->q_loaded));
  }
}

TEST(RunSweepTest, ConfigAndRerunAreDeterministic) {
  const ExperimentConfig c = preset("table1.cfg", SweepMode::kStochastic);
  std::ostringstream a, b;
  write_sweep_points_csv(a, run_sweep(c, std::nullopt, -135.0));
  write_sweep_points_csv(b, run_sweep(c, std::nullopt, -135.0));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_GT(a.str().size(), 1000u);
}

TEST(Table1Test, PhotonColumn) {
  const auto rows = photon_table(preset("table1.cfg", SweepMode::kAnalytic));
  ASSERT_EQ(rows.size(), 4u);
  const double expect[] = {3e7, 3.0, 0.3, 0.03};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(rows[i].photons / expect[i], 1.0, 0.15) << i;
}

TEST(Table1Test, PhotonsScaleWithPower) {
  const auto rows = photon_table(preset("fig5.cfg", SweepMode::kAnalytic));
  EXPECT_NEAR(rows[2].photons / rows[1].photons, 0.1, 1e-12);
  EXPECT_NEAR(rows[3].photons / rows[2].photons, 0.1, 1e-12);
  EXPECT_NEAR(rows[1].photons / rows[0].photons, 1e-7, 1e-19);
}

TEST(Table1Test, SinglePowerIsTriviallyConsistent) {
  ExperimentConfig c = preset("fig5.cfg", SweepMode::kAnalytic);
  c.table1.powers_dbm = {-55.0};
  const ScenarioReport rep = run_table1(c);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_TRUE(rep.consistency.pass);
  EXPECT_TRUE(rep.ok());
}

TEST(Table1Test, StochasticRowsRecoverInjectedQ) {
  const ScenarioReport rep = run_table1(preset("table1.cfg", SweepMode::kStochastic));
  ASSERT_EQ(rep.rows.size(), 4u);
  for (const auto& row : rep.rows) {
    ASSERT_TRUE(row.run.ok()) << row.power_dbm;
    EXPECT_LE(std::abs(row.run.fit.q_loaded - row.q_injected), 1000.0) << row.power_dbm;
  }
  EXPECT_TRUE(rep.consistency.pass);
  EXPECT_EQ(rep.consistency.pairs.size(), 6u);
  std::ostringstream text, csv;
  write_table1(text, csv, rep);
  EXPECT_NE(csv.str().find("power_dbm"), std::string::npos);
  EXPECT_NE(text.str().find("q_consistency=pass"), std::string::npos);
}

TEST(NoiseRunTest, OccupancyPerBin) {
  const NoiseRun run = run_noise_floor(preset("fig5.cfg", SweepMode::kAnalytic));
  EXPECT_NEAR(run.occupancy_per_bin, 2.633328527e-18 / 4.35101359e-17, 1e-6);
  EXPECT_LT(run.occupancy_per_bin, 1.0);
  ASSERT_TRUE(run.ok());
  EXPECT_LE(std::abs(run.fit.q_loaded - 8800.0) / 8800.0, 1e-3);
}

TEST(NoiseRunTest, ColdCavityLeavesFlatAmplifierFloor) {
  ExperimentConfig c = preset("fig5.cfg", SweepMode::kAnalytic);
  c.env = ThermalEnvironment::at(1e-6);
  const NoiseRun run = run_noise_floor(c);
  const double floor = constants::kBoltzmann * 100.0 * run.spectrum.rbw_hz * run.spectrum.enbw_bins * 1e6;
  for (Eigen::Index k = 1; k < run.spectrum.size(); ++k) {
    const double f = run.spectrum.freq_hz[k];
    if (f < 10e6) EXPECT_NEAR(run.spectrum.power_w[k] / floor, 1.0, 1e-12) << f;
    else EXPECT_EQ(run.spectrum.power_w[k], 0.0);
  }
  EXPECT_FALSE(run.ok());
}

TEST(NoiseRunTest, StochasticFitFindsTheCavity) {
  const NoiseRun run = run_noise_floor(preset("fig5.cfg", SweepMode::kStochastic));
  ASSERT_TRUE(run.ok());
  ASSERT_TRUE(run.fit.stderr);
  EXPECT_LE(std::abs(run.fit.q_loaded - 8800.0) / 8800.0, 0.35);
  EXPECT_NEAR(run.fit.f_center_hz, 9.590e9, 5e4);
  EXPECT_DOUBLE_EQ(run.spectrum.rbw_hz, 625.0);
}

// Paired runs on one cavity: noise-only and driven fits should agree.
TEST(NoiseRunTest, NoiseAndDrivenQAgree) {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    ExperimentConfig c = preset("fig5.cfg", SweepMode::kStochastic);
    c.sweep.master_seed = seed;
    const NoiseRun noise = run_noise_floor(c);
    const SweepRun driven = run_sweep(c, std::nullopt, -55.0);
    ASSERT_TRUE(noise.ok() && noise.fit.stderr && driven.ok() && driven.fit.stderr);
    EXPECT_LE(std::abs(noise.fit.q_loaded - driven.fit.q_loaded),
              3.0 * std::hypot(noise.fit.stderr->q_loaded, driven.fit.stderr->q_loaded))
        << seed;
  }
}

TEST(SensitivityTest, Anchors) {
  const SensitivityReport r = run_sensitivity(1e9, 1e5, 300, 1);
  EXPECT_NEAR(r.single_photon_power_w / 4.2e-20, 1.0, 0.03);
  EXPECT_NEAR(r.required_rbw_hz / 10.0, 1.0, 0.1);
  EXPECT_NEAR(r.optical_single_photon_power_w / 1.9e-15, 1.0, 0.05);
  EXPECT_NEAR(r.min_measure_time_s, 1.0 / r.required_rbw_hz, 1e-15);
  const SensitivityReport c = run_sensitivity(9.59e9, 8800, 305.4, 1);
  EXPECT_NEAR(c.required_rbw_hz, 10319.01216, 1e-4);
  EXPECT_NEAR(c.min_measure_time_s, 9.69085e-5, 1e-9);
  EXPECT_NEAR(run_sensitivity(1e9, 1e5, 300, 10).required_rbw_hz, r.required_rbw_hz / 10.0, 1e-12);
}

TEST(SensitivityTest, RegimesAndLowQ) {
  EXPECT_THROW(run_sensitivity(9.59e9, 8800, 1.0, 1), std::domain_error);
  const SensitivityReport r = run_sensitivity(1e9, 50, 300, 1);
  EXPECT_FALSE(r.total_noise_power_w.has_value());
  std::ostringstream out;
  write_sensitivity(out, r);
  EXPECT_NE(out.str().find("required_rbw_hz="), std::string::npos);
}

TEST(PlotDataTest, NormalisedToPeak) {
  const SweepRun run = run_sweep(preset("table1.cfg", SweepMode::kAnalytic), std::nullopt, -55.0);
  std::ostringstream out;
  write_plot_data(out, run.spectrum, 9.590e9);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("freq_offset_khz,power_db_rel_peak\n", 0), 0u);
  EXPECT_NE(s.find("\n0,0\n"), std::string::npos);
  EXPECT_NE(s.find("\n-2000,"), std::string::npos);
}

}  // namespace
}  // namespace regen
