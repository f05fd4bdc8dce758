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

#ifndef REGEN_SPECTRUM_HPP_
#define REGEN_SPECTRUM_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace regen {

/// Real baseband samples, scaled so the mean square is power in watts.
struct BasebandFrame {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;
  std::uint64_t seed = 0;

  double duration_s() const { return samples.size() / sample_rate_hz; }
  double mean_square() const;
};

enum class Window { kRectangular, kHann };

Window parse_window(const std::string& name);
const char* window_name(Window w);

struct AnalyzerSettings {
  double rbw_hz = 625.0;
  int averages = 100;
  Window window = Window::kHann;
};

/// Averaged one-sided power spectrum. Bin powers are tone-calibrated: a
/// sinusoid centred on a bin reports its power there. Noise bins therefore read
/// `enbw_bins` times the noise in one rbw.
struct Spectrum {
  Eigen::VectorXd freq_hz;
  Eigen::VectorXd power_w;
  double rbw_hz = 0.0;
  int averages_used = 0;
  double enbw_bins = 1.0;

  Eigen::Index size() const { return freq_hz.size(); }
};

/// Welch-style averaged periodogram without overlap: segment length is
/// sample_rate / rbw, one periodogram per segment, power-mean detector.
Spectrum analyze(const BasebandFrame& frame, const AnalyzerSettings& s);

/// Sum of bins in [f_lo, f_hi], divided by the window ENBW.
double band_power(const Spectrum& spec, double f_lo_hz, double f_hi_hz);

/// Equivalent noise bandwidth of a length-n window, in bins.
double window_enbw(Window w, int n);

void write_spectrum_csv(std::ostream& out, const Spectrum& spec);
void write_spectrum_csv(const std::string& path, const Spectrum& spec);
/// Reads `freq_hz,power_dbm`. Errors carry the offending line number.
Spectrum read_spectrum_csv(std::istream& in);
Spectrum read_spectrum_csv(const std::string& path);

}  // namespace regen

#endif  // REGEN_SPECTRUM_HPP_
