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

#ifndef REGEN_EXPERIMENT_HPP_
#define REGEN_EXPERIMENT_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "regen/chain.hpp"
#include "regen/config.hpp"
#include "regen/fit.hpp"
#include "regen/spectrum.hpp"

namespace regen {

/// Driven resonance sweep and its Lorentzian fit.
struct SweepRun {
  std::vector<PointResult> points;
  Spectrum spectrum;   // generator frequency vs tone-bin power
  SweepData fit_data;  // generator frequency vs noise-subtracted tone power
  FitResult fit;
  std::optional<std::string> fit_error;

  bool ok() const { return !fit_error && fit.converged; }
};

std::vector<ScenePoint> sweep_points(const ExperimentConfig& cfg, double power_dbm_at_cavity);

/// Runs the configured sweep; `q_override`/`power_override` support table rows.
SweepRun run_sweep(const ExperimentConfig& cfg, std::optional<double> q_override = std::nullopt,
                   std::optional<double> power_override = std::nullopt);

struct Table1Row {
  double power_dbm;
  double q_injected;
  double photons;
  SweepRun run;
};

struct ScenarioReport {
  std::vector<Table1Row> rows;
  ConsistencyReport consistency;
  bool ok() const;
};

/// One driven sweep per configured power; row r uses master seed derive_seed(master, r).
ScenarioReport run_table1(const ExperimentConfig& cfg);

struct NoiseRun {
  Spectrum spectrum;  // baseband analyzer spectrum
  SweepData fit_data; // resonance region, RF frequency axis
  FitResult fit;
  std::optional<std::string> fit_error;
  double occupancy_per_bin = 0.0;  // per-bin thermal noise / one-photon output power
  NoiseBudget budget;

  bool ok() const { return !fit_error && fit.converged; }
};

/// Generator off. Stochastic mode synthesizes and analyzes a frame; analytic
/// mode returns the expected spectrum.
NoiseRun run_noise_floor(const ExperimentConfig& cfg);

struct SensitivityReport {
  double f_hz, q, temp_k, snr;
  double single_photon_power_w;
  double occupation;
  std::optional<double> total_noise_power_w;  // needs q >= 100
  double required_rbw_hz;
  double min_measure_time_s;
  double optical_lambda_m, optical_finesse, optical_length_m;
  double optical_single_photon_power_w;
};

SensitivityReport run_sensitivity(double f_hz, double q, double temp_k, double snr,
                                  double optical_lambda_m = 1e-6, double optical_finesse = 1e5,
                                  double optical_length_m = 1.0);

struct PhotonRow {
  double power_dbm;
  double q;
  double energy_j;
  double photons;
};

std::vector<PhotonRow> photon_table(const ExperimentConfig& cfg);

void write_sweep_points_csv(std::ostream& out, const SweepRun& run);
/// Frequency offset (kHz) from `center_hz` and power in dB relative to the maximum.
void write_plot_data(std::ostream& out, const Spectrum& spec, double center_hz);
void write_table1(std::ostream& text, std::ostream& csv, const ScenarioReport& rep);
void write_sensitivity(std::ostream& out, const SensitivityReport& r);
void write_noise_summary(std::ostream& out, const NoiseRun& run);

}  // namespace regen

#endif  // REGEN_EXPERIMENT_HPP_
