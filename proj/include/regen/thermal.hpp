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

#ifndef REGEN_THERMAL_HPP_
#define REGEN_THERMAL_HPP_

#include "regen/cavity.hpp"
#include "regen/units.hpp"

namespace regen {

struct ThermalEnvironment {
  double temp_k = 305.4;

  static ThermalEnvironment at(double kelvin) {
    if (!(kelvin > 0.0)) throw std::invalid_argument("temperature must be positive");
    return {kelvin};
  }
};

/// Cavity thermal emission figures for one analysis bin.
struct NoiseBudget {
  double psd_peak = 0.0;  // W per (rad/s), on resonance
  Power total_power;
  Power per_bin_power;   // on resonance
  Frequency bin_width = Frequency::hz(1.0);  // max(rbw, signal bandwidth)
  double occupation = 0.0;
};

/// Bose-Einstein mean photon number 1 / (exp(hbar omega / kT) - 1).
double occupation(Frequency f, ThermalEnvironment env);

/// Thermal output spectral density dP/d(omega) in W/(rad/s).
double noise_psd(double omega, const CavityParams& c, ThermalEnvironment env);

/// Closed-form frequency integral of noise_psd. Requires q_loaded >= 100.
Power total_noise_power(const CavityParams& c, ThermalEnvironment env);

/// Noise in one bin of width max(rbw, signal_bw) at `at`, clamped to the total.
Power per_bin_noise(const CavityParams& c, ThermalEnvironment env, Frequency rbw,
                    double signal_bw_hz, Frequency at);

/// Largest resolution bandwidth (Hz) at which one intracavity photon's output
/// reaches `snr` times the per-bin thermal noise. Rayleigh-Jeans regime only.
Frequency required_rbw(Frequency f_res, ThermalEnvironment env, double q, double snr);

/// Shortest measurement time supporting `rbw`, in seconds.
double min_measure_time(Frequency rbw);

NoiseBudget noise_budget(const CavityParams& c, ThermalEnvironment env, Frequency rbw,
                         double signal_bw_hz = 0.0);

}  // namespace regen

#endif  // REGEN_THERMAL_HPP_
