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

#include "regen/units.hpp"

#include <cmath>

namespace regen {

double dbm_to_watts(double p_dbm) {
  if (!std::isfinite(p_dbm)) throw std::invalid_argument("dBm value must be finite");
  return 1e-3 * std::pow(10.0, p_dbm / 10.0);
}

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) throw std::domain_error("dBm is undefined for non-positive power");
  return 10.0 * std::log10(watts / 1e-3);
}

double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

Power Power::dbm(double p) { return Power(dbm_to_watts(p)); }

double Power::dbm() const { return watts_to_dbm(watts_); }

double photon_energy(Frequency f) { return constants::kHbar * f.omega(); }

}  // namespace regen
