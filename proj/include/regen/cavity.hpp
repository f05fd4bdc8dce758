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

#ifndef REGEN_CAVITY_HPP_
#define REGEN_CAVITY_HPP_

#include <complex>
#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "regen/units.hpp"

namespace regen {

/// Plane-parallel two-mirror etalon. `reflection` is the per-pass amplitude R.
struct IdealEtalon {
  double reflection;
  double spacing_m;
  double refractive_index = 1.0;
  double incidence_rad = 0.0;

  void validate() const;
  double single_pass_transmission() const { return 1.0 - reflection; }
  double pass_count() const { return 1.0 / (1.0 - reflection); }
  /// Uses the N_pass = F / pi convention.
  double finesse() const;
  /// Round-trip phase delta for a vacuum wavelength.
  double phase(double lambda_vac_m) const;
};

/// Two-port single-mode resonator. The unloaded Q is derived, not stored.
struct CavityParams {
  Frequency f_res = Frequency::hz(9.590e9);
  double q_loaded = 8800.0;
  double beta1 = 0.89;
  double beta2 = 0.94;
  double excess_loss_db = 0.0;

  void validate() const;
  double q_unloaded() const { return q_loaded * (1.0 + beta1 + beta2); }
  /// On-resonance transmitted/incident power ratio 4 b1 b2 / (1 + b1 + b2)^2.
  double insertion_factor() const;
};

struct StoredEnergy {
  double energy_j;
  double photons;  // time-averaged occupation, not rounded
};

/// Sum over passes T * sum_k R^k e^{ik delta}; closed form when `max_pass` is empty.
std::complex<double> multipass_amplitude(double reflection, double delta,
                                         std::optional<std::uint64_t> max_pass = std::nullopt);
std::complex<double> multipass_amplitude(const IdealEtalon& e, double lambda_vac_m,
                                         std::optional<std::uint64_t> max_pass = std::nullopt);

/// |T_trans|^2 in the 1 + 2R/(1-R)^2 (1 - cos delta) form.
double multipass_transmission(double reflection, double delta);

/// Q of an etalon near resonance: omega * l / (c (1 - R)), optical path n l cos(theta).
double etalon_equivalent_q(const IdealEtalon& e, Frequency f);

template <typename Scalar>
Scalar lorentzian_factor(Scalar omega, Scalar omega_res, Scalar q) {
  const Scalar x = (omega - omega_res) / omega_res;
  return Scalar(1) / (Scalar(1) + Scalar(4) * q * q * x * x);
}

inline double lorentzian_factor(double omega, Frequency f_res, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  return lorentzian_factor<double>(omega, f_res.omega(), q);
}

/// Element-wise Lorentzian over an array of frequencies (any consistent unit).
template <typename Derived>
auto lorentzian_factor(const Eigen::ArrayBase<Derived>& f, typename Derived::Scalar f_res,
                       typename Derived::Scalar q) {
  using S = typename Derived::Scalar;
  return (S(1) + S(4) * q * q * ((f - f_res) / f_res).square()).inverse();
}

/// FWHM f_res / q.
double linewidth(double q, Frequency f_res);

Power coupled_transmission(const CavityParams& c, Frequency f, Power p_inc);
StoredEnergy stored_photons(const CavityParams& c, Frequency f, Power p_inc);

/// Output power of an ideal cavity holding one photon: hbar omega^2 / q.
Power single_photon_power(Frequency f, double q);
/// Optical variant with Q = (F / pi) omega l / c.
Power optical_single_photon_power(double lambda_m, double finesse, double length_m);

}  // namespace regen

#endif  // REGEN_CAVITY_HPP_
