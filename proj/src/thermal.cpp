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

#include "regen/thermal.hpp"

#include <algorithm>
#include <cmath>

namespace regen {

using constants::kBoltzmann;
using constants::kHbar;
using constants::kTwoPi;

namespace {

double quantum_ratio(double omega, ThermalEnvironment env) {
  return kHbar * omega / (kBoltzmann * env.temp_k);
}

double occupation_at(double omega, ThermalEnvironment env) {
  return 1.0 / std::expm1(quantum_ratio(omega, env));
}

}  // namespace

double occupation(Frequency f, ThermalEnvironment env) {
  if (!(env.temp_k > 0.0)) throw std::invalid_argument("temperature must be positive");
  return occupation_at(f.omega(), env);
}

double noise_psd(double omega, const CavityParams& c, ThermalEnvironment env) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(env.temp_k > 0.0)) throw std::invalid_argument("temperature must be positive");
  return kHbar * omega * occupation_at(omega, env) / kTwoPi *
         lorentzian_factor(omega, c.f_res, c.q_loaded);
}

Power total_noise_power(const CavityParams& c, ThermalEnvironment env) {
  c.validate();
  if (c.q_loaded < 100.0)
    throw std::domain_error("closed-form thermal noise power needs q_loaded >= 100");
  const double omega = c.f_res.omega();
  return Power::watts(kHbar * omega * omega / c.q_loaded * 0.25 * occupation(c.f_res, env));
}

Power per_bin_noise(const CavityParams& c, ThermalEnvironment env, Frequency rbw,
                    double signal_bw_hz, Frequency at) {
  if (!(signal_bw_hz >= 0.0)) throw std::invalid_argument("signal bandwidth must be >= 0");
  const double bin_hz = std::max(rbw.hz(), signal_bw_hz);
  const double p = noise_psd(at.omega(), c, env) * kTwoPi * bin_hz;
  if (c.q_loaded >= 100.0) return Power::watts(std::min(p, total_noise_power(c, env).watts()));
  return Power::watts(p);
}

Frequency required_rbw(Frequency f_res, ThermalEnvironment env, double q, double snr) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  if (!(snr > 0.0)) throw std::invalid_argument("snr must be positive");
  const double omega = f_res.omega();
  if (quantum_ratio(omega, env) > 0.1)
    throw std::domain_error("required_rbw needs kT >= 10 hbar omega (Rayleigh-Jeans regime)");
  return Frequency::hz(kHbar * omega * omega / (kBoltzmann * env.temp_k * q) / snr);
}

double min_measure_time(Frequency rbw) { return 1.0 / rbw.hz(); }

NoiseBudget noise_budget(const CavityParams& c, ThermalEnvironment env, Frequency rbw,
                         double signal_bw_hz) {
  const Frequency width = Frequency::hz(std::max(rbw.hz(), signal_bw_hz));
  return {noise_psd(c.f_res.omega(), c, env), total_noise_power(c, env),
          per_bin_noise(c, env, rbw, signal_bw_hz, c.f_res), width, occupation(c.f_res, env)};
}

}  // namespace regen
