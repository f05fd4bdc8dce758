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

#ifndef REGEN_CONFIG_HPP_
#define REGEN_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "regen/cavity.hpp"
#include "regen/chain.hpp"
#include "regen/spectrum.hpp"
#include "regen/thermal.hpp"

namespace regen {

struct SweepSpec {
  double f_start_hz = 9.588e9;
  double f_stop_hz = 9.593e9;
  int points = 201;
  double power_dbm_at_cavity = -55.0;
  double rbw_hz = 1.0;
  int averages = 100;
  SweepMode mode = SweepMode::kAnalytic;
  StochasticEngine engine = StochasticEngine::kZoom;
  std::uint64_t master_seed = 1;
};

struct Table1Spec {
  std::vector<double> powers_dbm{-55.0, -125.0, -135.0, -145.0};
  std::vector<double> q_loaded;  // per row; empty means cavity.q_loaded for every row
  double q_tolerance = 1.5;
  double q_uncertainty = 1000.0;  // assigned per-row Q uncertainty floor
};

struct NoiseSpec {
  double rbw_hz = 625.0;
  int averages = 100;
  Window window = Window::kHann;
};

struct ExperimentConfig {
  CavityParams cavity;
  ChainConfig chain;
  ThermalEnvironment env;
  SweepSpec sweep;
  Table1Spec table1;
  NoiseSpec noise;

  void validate() const;
  SweepSettings sweep_settings() const;
  /// Row Q for table1: per-row value when configured, else the cavity Q.
  double row_q(std::size_t row) const;
};

/// Parse error carrying the 1-based line (0 when not tied to a line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what, const std::string& source = "");
  int line() const { return line_; }
  /// Message without the source and line prefix.
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  std::string detail_;
};

/// Flat `section.key = value` text, `#` comments. Keys not set keep their
/// defaults; unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void write_config(std::ostream& out, const ExperimentConfig& cfg);

}  // namespace regen

#endif  // REGEN_CONFIG_HPP_
