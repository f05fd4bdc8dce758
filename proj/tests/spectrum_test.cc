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
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "regen/units.hpp"

namespace regen {
namespace {

constexpr double kPi = std::numbers::pi;

BasebandFrame tone(double fs, std::size_t n, double f, double amp, double phase = 0.3) {
  BasebandFrame fr{std::vector<double>(n), fs, 0};
  for (std::size_t i = 0; i < n; ++i) fr.samples[i] = amp * std::cos(2.0 * kPi * f * i / fs + phase);
  return fr;
}

BasebandFrame white(double fs, std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  BasebandFrame fr{std::vector<double>(n), fs, seed};
  for (auto& x : fr.samples) x = g(rng);
  return fr;
}

double db(double x) { return 10.0 * std::log10(x); }

Eigen::Index nearest_bin(const Spectrum& s, double f) {
  return static_cast<Eigen::Index>(std::llround(f / s.rbw_hz));
}

TEST(AnalyzerTest, ToneOnBinCentreReadsItsPower) {
  const double amp = 1e-4;
  for (Window w : {Window::kRectangular, Window::kHann}) {
    const Spectrum s = analyze(tone(1e6, 20000, 123e3, amp), {1000.0, 20, w});
    EXPECT_EQ(s.size(), 501);
    EXPECT_NEAR(db(s.power_w[nearest_bin(s, 123e3)]), db(amp * amp / 2.0), 0.01) << window_name(w);
  }
}

// Hann response half a bin off centre, from a direct DTFT of the windowed tone.
TEST(AnalyzerTest, HannScallopingMatchesDirectTransform) {
  const int n = 1000;
  const double fs = 1e6, f = 100.5e3, amp = 1.0;
  std::complex<double> acc = 0.0;
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
    wsum += w;
    acc += w * amp * std::cos(2.0 * kPi * f * i / fs) * std::polar(1.0, -2.0 * kPi * 100.0 * i / n);
  }
  const double oracle = 2.0 * std::norm(acc) / (wsum * wsum);
  const double loss_db = db(oracle / (amp * amp / 2.0));
  EXPECT_NEAR(loss_db, -1.42, 0.03);

  const Spectrum s = analyze(tone(fs, n, f, amp, 0.0), {1000.0, 1, Window::kHann});
  EXPECT_NEAR(db(s.power_w[100]), db(oracle), 0.01);
}

TEST(AnalyzerTest, WhiteNoiseLevelPerBin) {
  const double fs = 1e6, sigma = 1e-3;
  for (Window w : {Window::kRectangular, Window::kHann}) {
    const Spectrum s = analyze(white(fs, 400 * 1000, sigma, 5), {1000.0, 400, w});
    const double expect = sigma * sigma / (fs / 2.0) * s.rbw_hz * s.enbw_bins;
    const double mean = s.power_w.segment(1, s.size() - 2).mean();
    EXPECT_NEAR(mean / expect, 1.0, 0.02) << window_name(w);
  }
}

TEST(AnalyzerTest, ParsevalRectangular) {
  const BasebandFrame fr = white(2e6, 50 * 2000, 0.02, 9);
  const Spectrum s = analyze(fr, {1000.0, 50, Window::kRectangular});
  EXPECT_NEAR(s.power_w.sum() / fr.mean_square(), 1.0, 1e-3);
}

TEST(AnalyzerTest, ParsevalHannWithBandPower) {
  const BasebandFrame fr = white(2e6, 200 * 2000, 0.02, 10);
  const Spectrum s = analyze(fr, {1000.0, 200, Window::kHann});
  EXPECT_NEAR(band_power(s, 0.0, 1e6) / fr.mean_square(), 1.0, 0.01);
}

TEST(AnalyzerTest, AveragingReducesScatterBySqrtTwo) {
  auto rel_std = [](int m) {
    const Spectrum s = analyze(white(1e5, 256 * m, 1.0, 77 + m), {1e5 / 256, m, Window::kRectangular});
    const Eigen::ArrayXd p = s.power_w.segment(1, s.size() - 2).array();
    return std::sqrt((p - p.mean()).square().mean()) / p.mean();
  };
  for (int m : {8, 32, 128}) EXPECT_NEAR(rel_std(m) / rel_std(2 * m), std::sqrt(2.0), 0.15) << m;
}

TEST(AnalyzerTest, FrequencyAxis) {
  const Spectrum s = analyze(white(25e6, 2 * 40000, 1.0, 1), {625.0, 2, Window::kHann});
  EXPECT_DOUBLE_EQ(s.rbw_hz, 625.0);
  EXPECT_DOUBLE_EQ(s.freq_hz[0], 0.0);
  EXPECT_DOUBLE_EQ(s.freq_hz[s.size() - 1], 12.5e6);
  EXPECT_NEAR(s.enbw_bins, 1.5, 1e-12);
}

TEST(AnalyzerTest, RejectsImpossibleSettings) {
  const BasebandFrame fr = white(1e6, 10000, 1.0, 1);
  EXPECT_THROW(analyze(fr, {10.0, 1, Window::kHann}), std::invalid_argument);
  EXPECT_THROW(analyze(fr, {1000.0, 11, Window::kHann}), std::invalid_argument);
  EXPECT_THROW(analyze(fr, {1000.0, 0, Window::kHann}), std::invalid_argument);
  EXPECT_THROW(analyze(fr, {-1.0, 1, Window::kHann}), std::invalid_argument);
  EXPECT_THROW(analyze(BasebandFrame{{1.0, 2.0}, 0.0, 0}, {1.0, 1, Window::kHann}), std::invalid_argument);
}

TEST(AnalyzerTest, ZeroFrameGivesZeroSpectrum) {
  const Spectrum s = analyze(BasebandFrame{std::vector<double>(4096, 0.0), 4096.0, 0}, {16.0, 16, Window::kHann});
  EXPECT_EQ(s.power_w.maxCoeff(), 0.0);
}

TEST(WindowTest, EnbwAndNames) {
  EXPECT_DOUBLE_EQ(window_enbw(Window::kRectangular, 1000), 1.0);
  EXPECT_NEAR(window_enbw(Window::kHann, 1000), 1.5, 1e-12);
  EXPECT_EQ(parse_window("hann"), Window::kHann);
  EXPECT_EQ(parse_window("rectangular"), Window::kRectangular);
  EXPECT_STREQ(window_name(Window::kHann), "hann");
  EXPECT_THROW(parse_window("kaiser"), std::invalid_argument);
}

TEST(BandPowerTest, ToneAndErrors) {
  const double amp = 2e-3;
  const Spectrum s = analyze(tone(1e6, 50000, 200.25e3, amp), {1000.0, 50, Window::kHann});
  // Off-centre tone: summing a few bins removes the scalloping.
  EXPECT_NEAR(band_power(s, 195e3, 205e3) / (amp * amp / 2.0), 1.0, 1e-3);
  EXPECT_THROW(band_power(s, 10e3, 5e3), std::invalid_argument);
  EXPECT_THROW(band_power(s, 0.0, 1e7), std::out_of_range);
  EXPECT_EQ(band_power(s, 400.1e3, 400.9e3), 0.0);
}

TEST(BandPowerTest, WholeSpanIsTheBinSum) {
  const Spectrum s = analyze(white(1e5, 100 * 500, 1.0, 12), {200.0, 100, Window::kRectangular});
  EXPECT_NEAR(band_power(s, 0.0, 5e4), s.power_w.sum(), 1e-12 * s.power_w.sum());
}

TEST(SpectrumCsvTest, RoundTrip) {
  Spectrum s;
  s.freq_hz = Eigen::VectorXd::LinSpaced(5, 0.0, 4000.0);
  s.power_w = Eigen::VectorXd(5);
  s.power_w << 1e-3, 0.0, 3.16227766e-18, 1e-20, 4.2e-9;
  s.rbw_hz = 1000.0;
  std::stringstream io;
  write_spectrum_csv(io, s);
  EXPECT_EQ(io.str().substr(0, 25), "freq_hz,power_dbm\n0,0\n100");
  EXPECT_NE(io.str().find("-inf"), std::string::npos);
  const Spectrum r = read_spectrum_csv(io);
  ASSERT_EQ(r.size(), 5);
  EXPECT_DOUBLE_EQ(r.rbw_hz, 1000.0);
  EXPECT_EQ(r.power_w[1], 0.0);
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(r.freq_hz[i], s.freq_hz[i]);
    EXPECT_NEAR(r.power_w[i], s.power_w[i], 1e-9 * s.power_w[i]);
  }
}

TEST(SpectrumCsvTest, ErrorsNameTheLine) {
  std::istringstream bad_header("f,p\n1,2\n");
  EXPECT_THROW(read_spectrum_csv(bad_header), std::runtime_error);
  std::istringstream bad_row("freq_hz,power_dbm\n1,-10\n2,abc\n");
  try {
    read_spectrum_csv(bad_row);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream empty("");
  EXPECT_THROW(read_spectrum_csv(empty), std::runtime_error);
  EXPECT_THROW(read_spectrum_csv(std::string("/nonexistent/x.csv")), std::runtime_error);
}

}  // namespace
}  // namespace regen
