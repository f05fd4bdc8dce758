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

#ifndef REGEN_UNITS_HPP_
#define REGEN_UNITS_HPP_

#include <numbers>
#include <stdexcept>

namespace regen {

/// CODATA 2018 exact/recommended values, SI.
namespace constants {
inline constexpr double kHbar = 1.054571817e-34;  // J s
inline constexpr double kPlanck = 6.62607015e-34;  // J s
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace constants

/// Non-negative power in watts. dBm is an I/O view only.
class Power {
 public:
  constexpr Power() = default;

  static Power watts(double w) {
    if (!(w >= 0.0)) throw std::invalid_argument("power must be non-negative watts");
    return Power(w);
  }
  static Power dbm(double p);

  constexpr double watts() const { return watts_; }
  /// Throws for zero power: dBm is undefined there.
  double dbm() const;

  friend constexpr bool operator==(Power, Power) = default;

 private:
  constexpr explicit Power(double w) : watts_(w) {}
  double watts_ = 0.0;
};

/// Positive frequency in hertz with an angular view.
class Frequency {
 public:
  static Frequency hz(double f) {
    if (!(f > 0.0)) throw std::invalid_argument("frequency must be positive");
    return Frequency(f);
  }
  static Frequency angular(double omega) { return hz(omega / constants::kTwoPi); }

  constexpr double hz() const { return hz_; }
  constexpr double omega() const { return constants::kTwoPi * hz_; }
  double wavelength() const { return constants::kSpeedOfLight / hz_; }

  friend constexpr auto operator<=>(Frequency, Frequency) = default;

 private:
  constexpr explicit Frequency(double f) : hz_(f) {}
  double hz_;
};

double dbm_to_watts(double p_dbm);
double watts_to_dbm(double watts);
double db_to_ratio(double db);

/// Energy quantum hbar * omega in joules.
double photon_energy(Frequency f);

}  // namespace regen

#endif  // REGEN_UNITS_HPP_
