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

#ifndef REGEN_CHAIN_HPP_
#define REGEN_CHAIN_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regen/cavity.hpp"
#include "regen/spectrum.hpp"
#include "regen/thermal.hpp"
#include "regen/units.hpp"

namespace regen {

/// Generator -> attenuators -> cavity -> LNA -> mixer -> low-pass -> post amp.
/// The mixer is ideal multiplication with 0 dB conversion gain.
struct ChainConfig {
  double attenuation_db = 124.0;
  double lna_gain_db = 30.0;
  double lna_noise_temp_k = 100.0;
  Frequency lo_freq = Frequency::hz(9.584e9);
  double lpf_cutoff_hz = 10e6;
  double sample_rate_hz = 25e6;
  double post_gain_db = 30.0;

  void validate() const;
  /// Power gain from the cavity output plane to the analyzer input.
  double net_gain() const { return db_to_ratio(lna_gain_db + post_gain_db); }
};

struct ScenePoint {
  Frequency gen_freq;
  Power gen_power;  // at the generator, upstream of the attenuators

  /// Point whose cavity-input power is `p_cavity_dbm`.
  static ScenePoint at_cavity_dbm(Frequency f, double p_cavity_dbm, const ChainConfig& chain);
  static ScenePoint noise_only(Frequency f) { return {f, Power::watts(0.0)}; }
};

struct AnalyticOutput {
  Power signal_bin_power;  // tone power at the analyzer
  Power noise_bin_power;   // thermal + LNA noise in one rbw at the tone, at the analyzer
  double baseband_hz;      // gen_freq - lo_freq
};

/// Deterministic expectation of what the analyzer sees in the tone's bin.
AnalyticOutput analytic_output(const ScenePoint& pt, const ChainConfig& chain,
                               const CavityParams& cav, ThermalEnvironment env, Frequency rbw);

/// One-sided noise density at the analyzer input (W/Hz) for a baseband frequency.
/// Cavity thermal emission (Lorentzian) plus white LNA noise, zero above the cutoff.
double baseband_noise_density(double baseband_hz, const ChainConfig& chain,
                              const CavityParams& cav, ThermalEnvironment env);

/// Closed-form total noise power at the analyzer over the low-pass band.
double baseband_noise_power(const ChainConfig& chain, const CavityParams& cav,
                            ThermalEnvironment env);

/// Stochastic time series: coherent tone, Lorentzian thermal noise and white LNA
/// noise, synthesized as complex-Gaussian spectral amplitudes and inverse
/// transformed. Bit-identical for a fixed seed.
BasebandFrame synthesize(const ScenePoint& pt, const ChainConfig& chain, const CavityParams& cav,
                         ThermalEnvironment env, double duration_s, std::uint64_t seed);

/// Averaged analyzer readings around a tone.
struct ToneMeasurement {
  double tone_bin_w = 0.0;    // averaged power in the tone's bin
  double noise_floor_w = 0.0; // mean of the flanking bins
  double signal_w = 0.0;      // tone_bin_w - noise_floor_w; may be negative at low S/N
  double baseband_hz = 0.0;

  double snr() const { return noise_floor_w > 0.0 ? signal_w / noise_floor_w : 0.0; }
};

inline constexpr int kDefaultFlankBins = 16;

/// Tone-tracking zoom analysis: the analyzer centre follows the generator so the
/// tone sits on a bin centre; rectangular window; only the tone bin and
/// `flank_bins` on either side are realized, with independent per-segment noise.
/// Statistically identical to synthesize() + analyze() restricted to those bins.
ToneMeasurement measure_tone_zoom(const ScenePoint& pt, const ChainConfig& chain,
                                  const CavityParams& cav, ThermalEnvironment env,
                                  double rbw_hz, int averages, std::uint64_t seed,
                                  int flank_bins = kDefaultFlankBins);

/// Reads the tone bin and its flanks from a full spectrum.
ToneMeasurement measure_tone(const Spectrum& spec, double baseband_hz,
                             int flank_bins = kDefaultFlankBins);

/// Order-independent per-point seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

enum class SweepMode { kAnalytic, kStochastic };
/// How stochastic points are realized: zoom bins directly, or a full frame.
enum class StochasticEngine { kZoom, kFrame };

SweepMode parse_mode(const std::string& s);
const char* mode_name(SweepMode m);
StochasticEngine parse_engine(const std::string& s);

struct SweepSettings {
  SweepMode mode = SweepMode::kAnalytic;
  StochasticEngine engine = StochasticEngine::kZoom;
  double rbw_hz = 1.0;
  int averages = 100;
  std::uint64_t master_seed = 1;
};

struct PointResult {
  std::size_t index;
  ScenePoint point;
  AnalyticOutput analytic;
  std::optional<ToneMeasurement> measured;  // stochastic mode only

  /// Tone-bin power including one bin of noise.
  double tone_bin_w() const;
  /// Noise-subtracted tone power, the quantity the resonance fit consumes.
  double signal_w() const;
};

/// Per-point failures collected over a sweep, each tagged with its index.
class SweepError : public std::runtime_error {
 public:
  explicit SweepError(std::vector<std::pair<std::size_t, std::string>> failures);
  const std::vector<std::pair<std::size_t, std::string>>& failures() const { return failures_; }

 private:
  std::vector<std::pair<std::size_t, std::string>> failures_;
};

/// Simulates one point; `index` selects its seed.
PointResult simulate_point(const ScenePoint& pt, std::size_t index, const ChainConfig& chain,
                           const CavityParams& cav, ThermalEnvironment env,
                           const SweepSettings& s);

/// Points must be non-empty and strictly increasing in frequency.
std::vector<PointResult> sweep(const std::vector<ScenePoint>& points, const ChainConfig& chain,
                               const CavityParams& cav, ThermalEnvironment env,
                               const SweepSettings& s);

}  // namespace regen

#endif  // REGEN_CHAIN_HPP_
