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

#include "regen/chain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace regen {

using constants::kBoltzmann;
using constants::kTwoPi;

void ChainConfig::validate() const {
  for (double v : {attenuation_db, lna_gain_db, lna_noise_temp_k, lpf_cutoff_hz, sample_rate_hz,
                   post_gain_db}) {
    if (!std::isfinite(v)) throw std::invalid_argument("chain configuration must be finite");
  }
  if (attenuation_db < 0.0) throw std::invalid_argument("attenuation must be >= 0 dB");
  if (lna_noise_temp_k < 0.0) throw std::invalid_argument("LNA noise temperature must be >= 0 K");
  if (!(lpf_cutoff_hz > 0.0)) throw std::invalid_argument("low-pass cutoff must be positive");
  if (!(sample_rate_hz > 2.0 * lpf_cutoff_hz))
    throw std::invalid_argument("sample rate must exceed twice the low-pass cutoff");
}

ScenePoint ScenePoint::at_cavity_dbm(Frequency f, double p_cavity_dbm, const ChainConfig& chain) {
  return {f, Power::dbm(p_cavity_dbm + chain.attenuation_db)};
}

namespace {

void check_passband(const ScenePoint& pt, const ChainConfig& chain) {
  const double bb = pt.gen_freq.hz() - chain.lo_freq.hz();
  if (std::abs(bb) >= chain.lpf_cutoff_hz) {
    std::ostringstream msg;
    msg << "generator at " << pt.gen_freq.hz() << " Hz maps to baseband " << bb
        << " Hz, outside the " << chain.lpf_cutoff_hz << " Hz low-pass band";
    throw std::domain_error(msg.str());
  }
}

Power cavity_input(const ScenePoint& pt, const ChainConfig& chain) {
  return Power::watts(pt.gen_power.watts() / db_to_ratio(chain.attenuation_db));
}

double tone_power_at_analyzer(const ScenePoint& pt, const ChainConfig& chain,
                              const CavityParams& cav) {
  return coupled_transmission(cav, pt.gen_freq, cavity_input(pt, chain)).watts() *
         chain.net_gain();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

AnalyticOutput analytic_output(const ScenePoint& pt, const ChainConfig& chain,
                               const CavityParams& cav, ThermalEnvironment env, Frequency rbw) {
  chain.validate();
  check_passband(pt, chain);
  const double thermal = per_bin_noise(cav, env, rbw, 0.0, pt.gen_freq).watts();
  const double lna = kBoltzmann * chain.lna_noise_temp_k * rbw.hz();
  return {Power::watts(tone_power_at_analyzer(pt, chain, cav)),
          Power::watts((thermal + lna) * chain.net_gain()),
          pt.gen_freq.hz() - chain.lo_freq.hz()};
}

double baseband_noise_density(double baseband_hz, const ChainConfig& chain,
                              const CavityParams& cav, ThermalEnvironment env) {
  if (!(baseband_hz > 0.0) || baseband_hz >= chain.lpf_cutoff_hz) return 0.0;
  const double omega = kTwoPi * (chain.lo_freq.hz() + baseband_hz);
  const double thermal = kTwoPi * noise_psd(omega, cav, env);
  return (thermal + kBoltzmann * chain.lna_noise_temp_k) * chain.net_gain();
}

double baseband_noise_power(const ChainConfig& chain, const CavityParams& cav,
                            ThermalEnvironment env) {
  chain.validate();
  const double f0 = cav.f_res.hz();
  const auto u = [&](double f) { return 2.0 * cav.q_loaded * (f - f0) / f0; };
  const double lo = chain.lo_freq.hz();
  const double window =
      (std::atan(u(lo + chain.lpf_cutoff_hz)) - std::atan(u(lo))) / std::numbers::pi;
  // Full-band integral of the Lorentzian is total_noise_power; scale by the passband share.
  const double omega = cav.f_res.omega();
  const double full = constants::kHbar * omega * omega / cav.q_loaded * 0.25 * occupation(cav.f_res, env);
  const double thermal = full * window;
  const double lna = kBoltzmann * chain.lna_noise_temp_k * chain.lpf_cutoff_hz;
  return (thermal + lna) * chain.net_gain();
}

BasebandFrame synthesize(const ScenePoint& pt, const ChainConfig& chain, const CavityParams& cav,
                         ThermalEnvironment env, double duration_s, std::uint64_t seed) {
  chain.validate();
  cav.validate();
  check_passband(pt, chain);
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    throw std::invalid_argument("duration must be positive and finite");
  const double fs = chain.sample_rate_hz;
  const auto len = static_cast<std::size_t>(std::llround(duration_s * fs));
  if (len < 2) throw std::invalid_argument("duration shorter than two samples");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Half spectrum H_j; x_n = (1/L) sum_j H_j e^{i 2 pi j n / L} over the full Hermitian set.
  const std::size_t half = len / 2 + 1;
  std::vector<std::complex<double>> spec(half, {0.0, 0.0});
  const double df = fs / static_cast<double>(len);
  const std::size_t top = (len % 2 == 0) ? half - 1 : half;  // skip Nyquist
  const double scale = static_cast<double>(len) / 2.0;
  bool any_noise = false;
  for (std::size_t j = 1; j < top; ++j) {
    const double density = baseband_noise_density(j * df, chain, cav, env);
    const double re = gauss(rng);
    const double im = gauss(rng);
    if (density <= 0.0) continue;
    any_noise = true;
    const double sigma = std::sqrt(density * df);
    spec[j] = std::complex<double>(re, im) * (sigma * scale);
  }

  BasebandFrame frame;
  frame.sample_rate_hz = fs;
  frame.seed = seed;
  if (any_noise) {
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    fft.inv(frame.samples, spec, static_cast<Eigen::Index>(len));
  } else {
    frame.samples.assign(len, 0.0);
  }

  const double tone = tone_power_at_analyzer(pt, chain, cav);
  const double phase0 = kTwoPi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (tone > 0.0) {
    const double amp = std::sqrt(2.0 * tone);
    const double bb = std::abs(pt.gen_freq.hz() - chain.lo_freq.hz());
    for (std::size_t n = 0; n < len; ++n) {
      // Reduce the phase in long double to keep 1e9-sample frames on-bin.
      const long double cycles = static_cast<long double>(bb) * n / fs;
      const double frac = static_cast<double>(cycles - std::floor(cycles));
      frame.samples[n] += amp * std::cos(kTwoPi * frac + phase0);
    }
  }
  return frame;
}

ToneMeasurement measure_tone_zoom(const ScenePoint& pt, const ChainConfig& chain,
                                  const CavityParams& cav, ThermalEnvironment env, double rbw_hz,
                                  int averages, std::uint64_t seed, int flank_bins) {
  chain.validate();
  cav.validate();
  check_passband(pt, chain);
  if (!(rbw_hz > 0.0)) throw std::invalid_argument("rbw must be positive");
  if (averages < 1) throw std::invalid_argument("averages must be >= 1");
  if (flank_bins < 1) throw std::invalid_argument("need at least one flank bin");

  const double bb = std::abs(pt.gen_freq.hz() - chain.lo_freq.hz());
  const int width = 2 * flank_bins + 1;
  std::vector<double> sigma(width);
  for (int k = -flank_bins; k <= flank_bins; ++k) {
    const double density = baseband_noise_density(bb + k * rbw_hz, chain, cav, env);
    sigma[k + flank_bins] = std::sqrt(0.5 * density * rbw_hz);  // per quadrature
  }
  const double amp = std::sqrt(tone_power_at_analyzer(pt, chain, cav));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double phase = kTwoPi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const std::complex<double> tone = std::polar(amp, phase);

  std::vector<double> acc(width, 0.0);
  for (int m = 0; m < averages; ++m) {
    for (int i = 0; i < width; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      std::complex<double> x(re * sigma[i], im * sigma[i]);
      if (i == flank_bins) x += tone;
      acc[i] += std::norm(x);
    }
  }

  ToneMeasurement out;
  out.baseband_hz = pt.gen_freq.hz() - chain.lo_freq.hz();
  out.tone_bin_w = acc[flank_bins] / averages;
  double floor = 0.0;
  for (int i = 0; i < width; ++i) {
    if (i != flank_bins) floor += acc[i];
  }
  out.noise_floor_w = floor / (averages * 2.0 * flank_bins);
  out.signal_w = out.tone_bin_w - out.noise_floor_w;
  return out;
}

ToneMeasurement measure_tone(const Spectrum& spec, double baseband_hz, int flank_bins) {
  if (spec.size() == 0 || !(spec.rbw_hz > 0.0)) throw std::invalid_argument("empty spectrum");
  const double f = std::abs(baseband_hz);
  const auto k0 = static_cast<Eigen::Index>(std::llround((f - spec.freq_hz[0]) / spec.rbw_hz));
  if (k0 - flank_bins < 0 || k0 + flank_bins >= spec.size())
    throw std::out_of_range("tone and its flank bins must lie inside the spectrum");
  ToneMeasurement out;
  out.baseband_hz = baseband_hz;
  out.tone_bin_w = spec.power_w[k0];
  const double flanks = spec.power_w.segment(k0 - flank_bins, flank_bins).sum() +
                        spec.power_w.segment(k0 + 1, flank_bins).sum();
  out.noise_floor_w = flanks / (2.0 * flank_bins);
  out.signal_w = out.tone_bin_w - out.noise_floor_w;
  return out;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed ^ splitmix64(index ^ 0x5851f42d4c957f2dULL));
}

SweepMode parse_mode(const std::string& s) {
  if (s == "analytic") return SweepMode::kAnalytic;
  if (s == "stochastic") return SweepMode::kStochastic;
  throw std::invalid_argument("unknown mode '" + s + "' (expected analytic|stochastic)");
}

const char* mode_name(SweepMode m) { return m == SweepMode::kAnalytic ? "analytic" : "stochastic"; }

StochasticEngine parse_engine(const std::string& s) {
  if (s == "zoom") return StochasticEngine::kZoom;
  if (s == "frame") return StochasticEngine::kFrame;
  throw std::invalid_argument("unknown engine '" + s + "' (expected zoom|frame)");
}

double PointResult::tone_bin_w() const {
  if (measured) return measured->tone_bin_w;
  return analytic.signal_bin_power.watts() + analytic.noise_bin_power.watts();
}

double PointResult::signal_w() const {
  if (measured) return measured->signal_w;
  return analytic.signal_bin_power.watts();
}

SweepError::SweepError(std::vector<std::pair<std::size_t, std::string>> failures)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << failures.size() << " sweep point(s) failed";
        for (const auto& [i, what] : failures) msg << "\n  point " << i << ": " << what;
        return msg.str();
      }()),
      failures_(std::move(failures)) {}

PointResult simulate_point(const ScenePoint& pt, std::size_t index, const ChainConfig& chain,
                           const CavityParams& cav, ThermalEnvironment env,
                           const SweepSettings& s) {
  PointResult r{index, pt, analytic_output(pt, chain, cav, env, Frequency::hz(s.rbw_hz)),
                std::nullopt};
  if (s.mode == SweepMode::kAnalytic) return r;
  const std::uint64_t seed = derive_seed(s.master_seed, index);
  if (s.engine == StochasticEngine::kZoom) {
    r.measured = measure_tone_zoom(pt, chain, cav, env, s.rbw_hz, s.averages, seed);
  } else {
    const BasebandFrame frame = synthesize(pt, chain, cav, env, s.averages / s.rbw_hz, seed);
    const Spectrum spec = analyze(frame, {s.rbw_hz, s.averages, Window::kRectangular});
    r.measured = measure_tone(spec, r.analytic.baseband_hz);
  }
  return r;
}

std::vector<PointResult> sweep(const std::vector<ScenePoint>& points, const ChainConfig& chain,
                               const CavityParams& cav, ThermalEnvironment env,
                               const SweepSettings& s) {
  if (points.empty()) throw std::invalid_argument("sweep needs at least one point");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].gen_freq > points[i - 1].gen_freq))
      throw std::invalid_argument("sweep points must be strictly increasing in frequency");
  }
  std::vector<PointResult> out;
  out.reserve(points.size());
  std::vector<std::pair<std::size_t, std::string>> failures;
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      out.push_back(simulate_point(points[i], i, chain, cav, env, s));
    } catch (const std::exception& e) {
      failures.emplace_back(i, e.what());
    }
  }
  if (!failures.empty()) throw SweepError(std::move(failures));
  return out;
}

}  // namespace regen
