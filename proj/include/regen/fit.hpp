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

#ifndef REGEN_FIT_HPP_
#define REGEN_FIT_HPP_

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "regen/spectrum.hpp"

namespace regen {

enum class DataSource { kDriven, kNoiseOnly };

/// Resonance trace in linear watts. Driven sweeps may hold small negative
/// values (noise-subtracted tone powers); noise-only spectra may not.
struct SweepData {
  Eigen::VectorXd freq_hz;
  Eigen::VectorXd power_w;
  DataSource source = DataSource::kDriven;

  void validate() const;
  Eigen::Index size() const { return freq_hz.size(); }

  static SweepData from_spectrum(const Spectrum& s, DataSource src, double f_lo_hz,
                                 double f_hi_hz);
};

struct ParamStderr {
  double peak_w;
  double f_center_hz;
  double q_loaded;
  double baseline_w;
};

/// P(f) = baseline + peak / (1 + 4 Q^2 ((f - f_c) / f_c)^2).
struct FitResult {
  double peak_w = 0.0;
  double f_center_hz = 0.0;
  double q_loaded = 0.0;
  double baseline_w = 0.0;
  double residual_rms_w = 0.0;
  std::optional<ParamStderr> stderr;  // only when converged and the curvature is full rank
  bool converged = false;
  int iterations = 0;
  bool edge_peak = false;
  std::vector<std::string> warnings;

  double model(double f_hz) const;
};

class NoPeakError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seed values: argmax location, half-power width, low-quartile baseline.
FitResult initial_guess(const SweepData& d);

struct FitOptions {
  int max_iterations = 200;
  double relative_step = 1e-9;
  double initial_damping = 1e-3;
  /// -1: stderr from the residual-scaled curvature. L >= 0: sandwich covariance
  /// allowing residual correlation up to L neighbouring points and unequal variances.
  int correlated_lags = -1;
};

/// Damped Gauss-Newton (Levenberg schedule) least squares in linear power.
/// Accepted iterations never increase the objective.
FitResult fit_lorentzian(const SweepData& d, const FitResult& guess, const FitOptions& opt = {});

/// Per-iteration objective trace of the last accepted steps, exposed for tests.
std::vector<double> fit_objective_trace(const SweepData& d, const FitResult& guess,
                                        const FitOptions& opt = {});

struct QEstimate {
  double q;
  double sigma;
};

struct PairVerdict {
  std::size_t i, j;
  double discrepancy;
  double allowed;
  bool pass;
};

struct ConsistencyReport {
  std::vector<PairVerdict> pairs;
  bool pass = true;
  double max_discrepancy = 0.0;
};

/// Pairwise |Q_i - Q_j| <= tol * sqrt(sigma_i^2 + sigma_j^2).
ConsistencyReport q_consistency(std::span<const QEstimate> estimates, double tol);
/// Uses max(curvature stderr, `sigma_floor`) as each result's uncertainty.
ConsistencyReport q_consistency(std::span<const FitResult> results, double tol,
                                double sigma_floor = 0.0);

/// Plain-text `key=value` report.
void write_fit_report(std::ostream& out, const FitResult& r);

}  // namespace regen

#endif  // REGEN_FIT_HPP_
