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

// Command-line front end: sweep, table1, noise, fit, photons, sensitivity.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "regen/config.hpp"
#include "regen/experiment.hpp"
#include "regen/fit.hpp"
#include "regen/spectrum.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoFit = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  bool plot_data = false;
};

regen::ExperimentConfig load(const Common& c) {
  regen::ExperimentConfig cfg = c.config.empty() ? regen::ExperimentConfig{} : regen::load_config(c.config);
  if (c.seed) cfg.sweep.master_seed = *c.seed;
  if (!c.mode.empty()) cfg.sweep.mode = regen::parse_mode(c.mode);
  cfg.validate();
  return cfg;
}

std::optional<fs::path> out_dir(const Common& c) {
  if (c.out.empty()) return std::nullopt;
  fs::create_directories(c.out);
  return fs::path(c.out);
}

std::ofstream open(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

// Accepts a bare number or one with a unit suffix: Hz, kHz, MHz, GHz, K.
double parse_quantity(const std::string& text, const std::string& what) {
  static const std::regex re(R"(^\s*([-+0-9.eE]+)\s*(GHz|MHz|kHz|Hz|K)?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw CLI::ValidationError(what, "cannot parse '" + text + "'");
  double v = 0.0;
  try {
    v = std::stod(m[1].str());
  } catch (const std::logic_error&) {
    throw CLI::ValidationError(what, "cannot parse '" + text + "'");
  }
  const std::string unit = m[2].str();
  if (unit == "GHz") v *= 1e9;
  if (unit == "MHz") v *= 1e6;
  if (unit == "kHz") v *= 1e3;
  return v;
}

int finish_fit(const regen::FitResult& fit, const std::optional<std::string>& error) {
  if (error) {
    std::cerr << "fit failed: " << *error << '\n';
    return kExitNoFit;
  }
  return fit.converged ? 0 : kExitNoFit;
}

int cmd_sweep(const Common& c) {
  const auto cfg = load(c);
  const auto run = regen::run_sweep(cfg);
  regen::write_fit_report(std::cout, run.fit);
  if (const auto dir = out_dir(c)) {
    regen::write_spectrum_csv((*dir / "sweep_spectrum.csv").string(), run.spectrum);
    auto pts = open(*dir / "sweep_points.csv");
    regen::write_sweep_points_csv(pts, run);
    auto rep = open(*dir / "sweep_fit.txt");
    regen::write_fit_report(rep, run.fit);
    if (c.plot_data) {
      auto plot = open(*dir / "sweep_plot.csv");
      regen::write_plot_data(plot, run.spectrum, cfg.cavity.f_res.hz());
    }
  }
  return finish_fit(run.fit, run.fit_error);
}

int cmd_table1(const Common& c) {
  const auto cfg = load(c);
  const auto rep = regen::run_table1(cfg);
  std::ostringstream csv;
  regen::write_table1(std::cout, csv, rep);
  if (const auto dir = out_dir(c)) {
    auto txt = open(*dir / "table1.txt");
    std::ostringstream ignored;
    regen::write_table1(txt, ignored, rep);
    auto f = open(*dir / "table1.csv");
    f << csv.str();
    for (std::size_t r = 0; r < rep.rows.size(); ++r) {
      const auto stem = "table1_row" + std::to_string(r);
      regen::write_spectrum_csv((*dir / (stem + "_spectrum.csv")).string(), rep.rows[r].run.spectrum);
      auto fit = open(*dir / (stem + "_fit.txt"));
      regen::write_fit_report(fit, rep.rows[r].run.fit);
      if (c.plot_data) {
        auto plot = open(*dir / (stem + "_plot.csv"));
        regen::write_plot_data(plot, rep.rows[r].run.spectrum, cfg.cavity.f_res.hz());
      }
    }
  }
  for (const auto& r : rep.rows) {
    if (r.run.fit_error) std::cerr << "row " << r.power_dbm << " dBm: " << *r.run.fit_error << '\n';
  }
  return rep.ok() ? 0 : kExitNoFit;
}

int cmd_noise(const Common& c) {
  auto cfg = load(c);
  if (c.mode.empty() && c.config.empty()) cfg.sweep.mode = regen::SweepMode::kStochastic;
  const auto run = regen::run_noise_floor(cfg);
  regen::write_noise_summary(std::cout, run);
  regen::write_fit_report(std::cout, run.fit);
  if (const auto dir = out_dir(c)) {
    regen::write_spectrum_csv((*dir / "noise_spectrum.csv").string(), run.spectrum);
    auto rep = open(*dir / "noise_fit.txt");
    regen::write_noise_summary(rep, run);
    regen::write_fit_report(rep, run.fit);
    if (c.plot_data) {
      regen::Spectrum rf;
      rf.freq_hz = run.fit_data.freq_hz;
      rf.power_w = run.fit_data.power_w;
      auto plot = open(*dir / "noise_plot.csv");
      regen::write_plot_data(plot, rf, cfg.cavity.f_res.hz());
    }
  }
  return finish_fit(run.fit, run.fit_error);
}

int cmd_fit(const Common& c, const std::string& csv_path, bool noise_only) {
  const auto spec = regen::read_spectrum_csv(csv_path);
  regen::SweepData d;
  d.freq_hz = spec.freq_hz;
  d.power_w = spec.power_w;
  d.source = noise_only ? regen::DataSource::kNoiseOnly : regen::DataSource::kDriven;
  std::optional<std::string> error;
  regen::FitResult fit;
  try {
    fit = regen::fit_lorentzian(d, regen::initial_guess(d));
  } catch (const std::exception& e) {
    error = e.what();
  }
  regen::write_fit_report(std::cout, fit);
  if (const auto dir = out_dir(c)) {
    auto rep = open(*dir / "fit_report.txt");
    regen::write_fit_report(rep, fit);
  }
  return finish_fit(fit, error);
}

int cmd_photons(const Common& c) {
  const auto cfg = load(c);
  std::printf("%10s %8s %14s %14s\n", "power_dbm", "q", "energy_j", "photons");
  for (const auto& r : regen::photon_table(cfg))
    std::printf("%10.1f %8.0f %14.6g %14.6g\n", r.power_dbm, r.q, r.energy_j, r.photons);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-quantum cavity resonance simulator and analysis toolkit"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Config file (key = value)");
    sub->add_option("--seed", common.seed, "Master RNG seed");
    sub->add_option("--out", common.out, "Output directory");
    sub->add_option("--mode", common.mode, "analytic|stochastic")
        ->check(CLI::IsMember({"analytic", "stochastic"}));
    sub->add_flag("--plot-data", common.plot_data, "Write normalized plot columns");
  };

  auto* sweep = app.add_subcommand("sweep", "Driven resonance sweep and Lorentzian fit");
  auto* table1 = app.add_subcommand("table1", "Sweeps at every configured power level");
  auto* noise = app.add_subcommand("noise", "Noise-only spectrum and Lorentzian fit");
  auto* fit = app.add_subcommand("fit", "Fit a freq_hz,power_dbm CSV");
  auto* photons = app.add_subcommand("photons", "Intracavity photon number per power level");
  auto* sens = app.add_subcommand("sensitivity", "Single-photon power and required RBW");
  for (auto* s : {sweep, table1, noise, fit, photons, sens}) add_common(s);

  std::string csv_path;
  bool noise_only = false;
  fit->add_option("csv", csv_path, "Spectrum CSV")->required();
  fit->add_flag("--noise-only", noise_only, "Treat the input as a noise spectrum");

  std::string f_text, q_text, t_text, snr_text = "1";
  double lambda_m = 1e-6, finesse = 1e5, length_m = 1.0;
  sens->add_option("f", f_text, "Frequency, e.g. 1GHz")->required();
  sens->add_option("q", q_text, "Loaded Q")->required();
  sens->add_option("temp", t_text, "Temperature, e.g. 300K")->required();
  sens->add_option("snr", snr_text, "Signal-to-noise ratio");
  sens->add_option("--lambda-m", lambda_m, "Optical wavelength (m)");
  sens->add_option("--finesse", finesse, "Optical finesse");
  sens->add_option("--length-m", length_m, "Optical cavity length (m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sweep) return cmd_sweep(common);
    if (*table1) return cmd_table1(common);
    if (*noise) return cmd_noise(common);
    if (*fit) return cmd_fit(common, csv_path, noise_only);
    if (*photons) return cmd_photons(common);
    if (*sens) {
      const auto r = regen::run_sensitivity(parse_quantity(f_text, "f"), parse_quantity(q_text, "q"),
                                            parse_quantity(t_text, "temp"),
                                            parse_quantity(snr_text, "snr"), lambda_m, finesse,
                                            length_m);
      regen::write_sensitivity(std::cout, r);
      return 0;
    }
  } catch (const regen::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
