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

#include "regen/spectrum.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "regen/units.hpp"

namespace regen {

double BasebandFrame::mean_square() const {
  if (samples.empty()) return 0.0;
  long double acc = 0.0L;
  for (double x : samples) acc += static_cast<long double>(x) * x;
  return static_cast<double>(acc / samples.size());
}

Window parse_window(const std::string& name) {
  if (name == "rectangular" || name == "rect") return Window::kRectangular;
  if (name == "hann") return Window::kHann;
  throw std::invalid_argument("unknown window '" + name + "' (expected rectangular|hann)");
}

const char* window_name(Window w) { return w == Window::kHann ? "hann" : "rectangular"; }

namespace {

Eigen::VectorXd window_coefficients(Window w, int n) {
  Eigen::VectorXd c = Eigen::VectorXd::Ones(n);
  if (w == Window::kHann) {
    // Periodic form: exact 1.5-bin ENBW and zero leakage for bin-centred tones.
    for (int i = 0; i < n; ++i) c[i] = 0.5 - 0.5 * std::cos(constants::kTwoPi * i / n);
  }
  return c;
}

}  // namespace

double window_enbw(Window w, int n) {
  const Eigen::VectorXd c = window_coefficients(w, n);
  return n * c.squaredNorm() / (c.sum() * c.sum());
}

Spectrum analyze(const BasebandFrame& frame, const AnalyzerSettings& s) {
  if (!(frame.sample_rate_hz > 0.0)) throw std::invalid_argument("frame sample rate must be positive");
  if (!(s.rbw_hz > 0.0)) throw std::invalid_argument("rbw must be positive");
  if (s.averages < 1) throw std::invalid_argument("averages must be >= 1");
  const auto seg = static_cast<std::size_t>(std::llround(frame.sample_rate_hz / s.rbw_hz));
  if (seg < 2 || seg > frame.samples.size())
    throw std::invalid_argument("rbw finer than the frame allows");
  if (frame.samples.size() < seg * static_cast<std::size_t>(s.averages))
    throw std::invalid_argument("frame too short for the requested averages");

  const int n = static_cast<int>(seg);
  const Eigen::VectorXd w = window_coefficients(s.window, n);
  const double gain = w.sum();
  const Eigen::Index half = n / 2 + 1;

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buf(seg);
  std::vector<std::complex<double>> bins;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(half);

  for (int m = 0; m < s.averages; ++m) {
    const double* src = frame.samples.data() + m * seg;
    for (std::size_t i = 0; i < seg; ++i) buf[i] = src[i] * w[i];
    fft.fwd(bins, buf);
    for (Eigen::Index k = 0; k < half; ++k) acc[k] += std::norm(bins[k]);
  }

  Spectrum out;
  out.rbw_hz = frame.sample_rate_hz / n;
  out.averages_used = s.averages;
  out.enbw_bins = window_enbw(s.window, n);
  out.freq_hz = Eigen::VectorXd::LinSpaced(half, 0.0, (half - 1) * out.rbw_hz);
  out.power_w = acc / (s.averages * gain * gain);
  // One-sided: fold negative frequencies into every bin except DC and Nyquist.
  const Eigen::Index last_doubled = (n % 2 == 0) ? half - 2 : half - 1;
  out.power_w.segment(1, last_doubled) *= 2.0;
  return out;
}

double band_power(const Spectrum& spec, double f_lo_hz, double f_hi_hz) {
  if (spec.size() == 0) throw std::invalid_argument("empty spectrum");
  if (!(f_lo_hz < f_hi_hz)) throw std::invalid_argument("band_power needs f_lo < f_hi");
  const double slack = 0.5 * spec.rbw_hz;
  if (f_lo_hz < spec.freq_hz[0] - slack || f_hi_hz > spec.freq_hz[spec.size() - 1] + slack)
    throw std::out_of_range("band lies outside the spectrum span");
  const auto in_band = (spec.freq_hz.array() >= f_lo_hz && spec.freq_hz.array() <= f_hi_hz);
  return in_band.select(spec.power_w.array(), 0.0).sum() / spec.enbw_bins;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spec) {
  out << "freq_hz,power_dbm\n";
  char line[96];
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    const double p = spec.power_w[i];
    if (p > 0.0) {
      std::snprintf(line, sizeof line, "%.12g,%.12g\n", spec.freq_hz[i], watts_to_dbm(p));
    } else {
      std::snprintf(line, sizeof line, "%.12g,-inf\n", spec.freq_hz[i]);
    }
    out << line;
  }
}

void write_spectrum_csv(const std::string& path, const Spectrum& spec) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_spectrum_csv(f, spec);
}

Spectrum read_spectrum_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<double> freqs, powers;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "freq_hz,power_dbm")
        throw std::runtime_error("line 1: expected header 'freq_hz,power_dbm'");
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected two columns");
    try {
      const double f = std::stod(line.substr(0, comma));
      const std::string pcol = line.substr(comma + 1);
      const double p_dbm = std::stod(pcol);
      freqs.push_back(f);
      powers.push_back(std::isinf(p_dbm) && p_dbm < 0 ? 0.0 : dbm_to_watts(p_dbm));
    } catch (const std::logic_error&) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (line_no == 0) throw std::runtime_error("empty spectrum file");
  Spectrum s;
  s.freq_hz = Eigen::Map<Eigen::VectorXd>(freqs.data(), freqs.size());
  s.power_w = Eigen::Map<Eigen::VectorXd>(powers.data(), powers.size());
  s.averages_used = 1;
  if (freqs.size() >= 2) s.rbw_hz = (freqs.back() - freqs.front()) / (freqs.size() - 1);
  return s;
}

Spectrum read_spectrum_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  try {
    return read_spectrum_csv(f);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace regen
