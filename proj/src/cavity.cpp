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

#include "regen/cavity.hpp"

#include <cmath>
#include <numbers>

namespace regen {

using constants::kHbar;
using constants::kSpeedOfLight;
using constants::kTwoPi;

void IdealEtalon::validate() const {
  if (!(reflection > 0.0 && reflection < 1.0))
    throw std::invalid_argument("etalon reflection must lie in (0, 1)");
  if (!(spacing_m > 0.0)) throw std::invalid_argument("etalon spacing must be positive");
  if (!(refractive_index >= 1.0)) throw std::invalid_argument("refractive index must be >= 1");
  if (!(std::abs(incidence_rad) < std::numbers::pi / 2))
    throw std::invalid_argument("incidence angle must be below pi/2");
}

double IdealEtalon::finesse() const { return std::numbers::pi * pass_count(); }

double IdealEtalon::phase(double lambda_vac_m) const {
  if (!(lambda_vac_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
  return kTwoPi / lambda_vac_m * 2.0 * refractive_index * spacing_m * std::cos(incidence_rad);
}

void CavityParams::validate() const {
  if (!(q_loaded > 0.0)) throw std::invalid_argument("loaded Q must be positive");
  if (!(beta1 >= 0.0) || !(beta2 >= 0.0))
    throw std::invalid_argument("port couplings must be non-negative");
  if (!(excess_loss_db >= 0.0)) throw std::invalid_argument("excess loss must be >= 0 dB");
}

double CavityParams::insertion_factor() const {
  const double d = 1.0 + beta1 + beta2;
  return 4.0 * beta1 * beta2 / (d * d);
}

std::complex<double> multipass_amplitude(double reflection, double delta,
                                         std::optional<std::uint64_t> max_pass) {
  if (!(reflection >= 0.0) || reflection >= 1.0)
    throw std::invalid_argument("reflection amplitude must lie in [0, 1) for the series to converge");
  const double t = 1.0 - reflection;
  const std::complex<double> step = std::polar(reflection, delta);
  if (!max_pass) return t / (1.0 - step);

  // Compensated summation; 1e6 terms otherwise drift near 1e-10.
  std::complex<double> sum{0.0, 0.0}, carry{0.0, 0.0}, term{1.0, 0.0};
  for (std::uint64_t k = 0; k <= *max_pass; ++k) {
    const std::complex<double> y = term - carry;
    const std::complex<double> s = sum + y;
    carry = (s - sum) - y;
    sum = s;
    term *= step;
    if (std::norm(term) == 0.0) break;
  }
  return t * sum;
}

std::complex<double> multipass_amplitude(const IdealEtalon& e, double lambda_vac_m,
                                         std::optional<std::uint64_t> max_pass) {
  e.validate();
  return multipass_amplitude(e.reflection, e.phase(lambda_vac_m), max_pass);
}

double multipass_transmission(double reflection, double delta) {
  const double one_minus = 1.0 - reflection;
  return 1.0 / (1.0 + 2.0 * reflection / (one_minus * one_minus) * (1.0 - std::cos(delta)));
}

double etalon_equivalent_q(const IdealEtalon& e, Frequency f) {
  e.validate();
  const double path = e.refractive_index * e.spacing_m * std::cos(e.incidence_rad);
  return f.omega() * path / (kSpeedOfLight * (1.0 - e.reflection));
}

double linewidth(double q, Frequency f_res) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  return f_res.hz() / q;
}

Power coupled_transmission(const CavityParams& c, Frequency f, Power p_inc) {
  c.validate();
  const double shape = lorentzian_factor(f.omega(), c.f_res, c.q_loaded);
  const double out = p_inc.watts() * c.insertion_factor() * shape;
  return Power::watts(out / db_to_ratio(c.excess_loss_db));
}

StoredEnergy stored_photons(const CavityParams& c, Frequency f, Power p_inc) {
  c.validate();
  const double d = 1.0 + c.beta1 + c.beta2;
  const double omega = f.omega();
  const double energy = p_inc.watts() * (c.q_loaded / omega) * 4.0 * c.beta1 / (d * d) *
                        lorentzian_factor(omega, c.f_res, c.q_loaded);
  return {energy, energy / (kHbar * omega)};
}

Power single_photon_power(Frequency f, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  const double omega = f.omega();
  return Power::watts(kHbar * omega * omega / q);
}

Power optical_single_photon_power(double lambda_m, double finesse, double length_m) {
  if (!(lambda_m > 0.0 && finesse > 0.0 && length_m > 0.0))
    throw std::invalid_argument("wavelength, finesse and length must be positive");
  const Frequency f = Frequency::hz(kSpeedOfLight / lambda_m);
  const double q = finesse / std::numbers::pi * f.omega() * length_m / kSpeedOfLight;
  return single_photon_power(f, q);
}

}  // namespace regen
