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

#include "regen/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "regen/thermal.hpp"

namespace regen {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

FitResult fit_or_record(const SweepData& d, std::optional<std::string>& error,
                        const FitOptions& opt = {}) {
  try {
    return fit_lorentzian(d, initial_guess(d), opt);
  } catch (const std::exception& e) {
    error = e.what();
    return {};
  }
}

}  // namespace

std::vector<ScenePoint> sweep_points(const ExperimentConfig& cfg, double power_dbm_at_cavity) {
  const Eigen::VectorXd f =
      Eigen::VectorXd::LinSpaced(cfg.sweep.points, cfg.sweep.f_start_hz, cfg.sweep.f_stop_hz);
  std::vector<ScenePoint> pts;
  pts.reserve(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i)
    pts.push_back(ScenePoint::at_cavity_dbm(Frequency::hz(f[i]), power_dbm_at_cavity, cfg.chain));
  return pts;
}

SweepRun run_sweep(const ExperimentConfig& cfg, std::optional<double> q_override,
                   std::optional<double> power_override) {
  cfg.validate();
  CavityParams cav = cfg.cavity;
  if (q_override) cav.q_loaded = *q_override;
  const double power = power_override.value_or(cfg.sweep.power_dbm_at_cavity);

  SweepRun run;
  run.points = sweep(sweep_points(cfg, power), cfg.chain, cav, cfg.env, cfg.sweep_settings());

  const auto n = static_cast<Eigen::Index>(run.points.size());
  run.spectrum.freq_hz.resize(n);
  run.spectrum.power_w.resize(n);
  run.spectrum.rbw_hz = cfg.sweep.rbw_hz;
  run.spectrum.averages_used = cfg.sweep.mode == SweepMode::kStochastic ? cfg.sweep.averages : 1;
  run.fit_data.freq_hz.resize(n);
  run.fit_data.power_w.resize(n);
  run.fit_data.source = DataSource::kDriven;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = run.points[i];
    run.spectrum.freq_hz[i] = p.point.gen_freq.hz();
    run.spectrum.power_w[i] = p.tone_bin_w();
    run.fit_data.freq_hz[i] = p.point.gen_freq.hz();
    run.fit_data.power_w[i] = p.signal_w();
  }
  run.fit = fit_or_record(run.fit_data, run.fit_error);
  return run;
}

bool ScenarioReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const Table1Row& r) { return r.run.ok(); });
}

ScenarioReport run_table1(const ExperimentConfig& cfg) {
  cfg.validate();
  ScenarioReport rep;
  std::vector<FitResult> fits;
  for (std::size_t r = 0; r < cfg.table1.powers_dbm.size(); ++r) {
    ExperimentConfig row_cfg = cfg;
    row_cfg.sweep.master_seed = derive_seed(cfg.sweep.master_seed, r);
    const double q = cfg.row_q(r);
    const double power = cfg.table1.powers_dbm[r];
    CavityParams cav = cfg.cavity;
    cav.q_loaded = q;
    const double photons = stored_photons(cav, cav.f_res, Power::dbm(power)).photons;
    rep.rows.push_back({power, q, photons, run_sweep(row_cfg, q, power)});
    fits.push_back(rep.rows.back().run.fit);
  }
  if (fits.size() >= 2) {
    rep.consistency = q_consistency(fits, cfg.table1.q_tolerance, cfg.table1.q_uncertainty);
  }
  return rep;
}

NoiseRun run_noise_floor(const ExperimentConfig& cfg) {
  cfg.validate();
  const NoiseSpec& ns = cfg.noise;
  NoiseRun run;
  if (cfg.sweep.mode == SweepMode::kStochastic) {
    const BasebandFrame frame =
        synthesize(ScenePoint::noise_only(cfg.cavity.f_res), cfg.chain, cfg.cavity, cfg.env,
                   ns.averages / ns.rbw_hz, cfg.sweep.master_seed);
    run.spectrum = analyze(frame, {ns.rbw_hz, ns.averages, ns.window});
  } else {
    const int seg = static_cast<int>(std::llround(cfg.chain.sample_rate_hz / ns.rbw_hz));
    const Eigen::Index half = seg / 2 + 1;
    Spectrum& s = run.spectrum;
    s.rbw_hz = cfg.chain.sample_rate_hz / seg;
    s.averages_used = 1;
    s.enbw_bins = window_enbw(ns.window, seg);
    s.freq_hz = Eigen::VectorXd::LinSpaced(half, 0.0, (half - 1) * s.rbw_hz);
    s.power_w.resize(half);
    for (Eigen::Index k = 0; k < half; ++k)
      s.power_w[k] = baseband_noise_density(s.freq_hz[k], cfg.chain, cfg.cavity, cfg.env) *
                     s.rbw_hz * s.enbw_bins;
  }

  const double lo = cfg.chain.lo_freq.hz();
  run.fit_data = SweepData::from_spectrum(run.spectrum, DataSource::kNoiseOnly,
                                          cfg.sweep.f_start_hz - lo, cfg.sweep.f_stop_hz - lo);
  run.fit_data.freq_hz.array() += lo;
  // Windowed bins leak into their neighbours, and the scatter of a bin grows with its level.
  FitOptions opt;
  opt.correlated_lags = ns.window == Window::kHann ? 2 : 0;
  run.fit = fit_or_record(run.fit_data, run.fit_error, opt);

  const Frequency rbw = Frequency::hz(run.spectrum.rbw_hz);
  run.budget = noise_budget(cfg.cavity, cfg.env, rbw);
  run.occupancy_per_bin = per_bin_noise(cfg.cavity, cfg.env, rbw, 0.0, cfg.cavity.f_res).watts() /
                          single_photon_power(cfg.cavity.f_res, cfg.cavity.q_loaded).watts();
  return run;
}

SensitivityReport run_sensitivity(double f_hz, double q, double temp_k, double snr,
                                  double optical_lambda_m, double optical_finesse,
                                  double optical_length_m) {
  const Frequency f = Frequency::hz(f_hz);
  const ThermalEnvironment env = ThermalEnvironment::at(temp_k);
  SensitivityReport r{};
  r.f_hz = f_hz;
  r.q = q;
  r.temp_k = temp_k;
  r.snr = snr;
  r.single_photon_power_w = single_photon_power(f, q).watts();
  r.occupation = occupation(f, env);
  if (q >= 100.0) {
    CavityParams cav;
    cav.f_res = f;
    cav.q_loaded = q;
    r.total_noise_power_w = total_noise_power(cav, env).watts();
  }
  const Frequency rbw = required_rbw(f, env, q, snr);
  r.required_rbw_hz = rbw.hz();
  r.min_measure_time_s = min_measure_time(rbw);
  r.optical_lambda_m = optical_lambda_m;
  r.optical_finesse = optical_finesse;
  r.optical_length_m = optical_length_m;
  r.optical_single_photon_power_w =
      optical_single_photon_power(optical_lambda_m, optical_finesse, optical_length_m).watts();
  return r;
}

std::vector<PhotonRow> photon_table(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<PhotonRow> rows;
  for (std::size_t r = 0; r < cfg.table1.powers_dbm.size(); ++r) {
    CavityParams cav = cfg.cavity;
    cav.q_loaded = cfg.row_q(r);
    const double p = cfg.table1.powers_dbm[r];
    const StoredEnergy e = stored_photons(cav, cav.f_res, Power::dbm(p));
    rows.push_back({p, cav.q_loaded, e.energy_j, e.photons});
  }
  return rows;
}

void write_sweep_points_csv(std::ostream& out, const SweepRun& run) {
  out << "gen_freq_hz,baseband_hz,tone_bin_w,noise_floor_w,signal_w,analytic_signal_w,"
         "analytic_noise_w\n";
  for (const auto& p : run.points) {
    const double floor = p.measured ? p.measured->noise_floor_w : p.analytic.noise_bin_power.watts();
    out << fmt("%.12g", p.point.gen_freq.hz()) << ',' << fmt("%.12g", p.analytic.baseband_hz) << ','
        << fmt("%.12g", p.tone_bin_w()) << ',' << fmt("%.12g", floor) << ','
        << fmt("%.12g", p.signal_w()) << ',' << fmt("%.12g", p.analytic.signal_bin_power.watts())
        << ',' << fmt("%.12g", p.analytic.noise_bin_power.watts()) << '\n';
  }
}

void write_plot_data(std::ostream& out, const Spectrum& spec, double center_hz) {
  const double peak = spec.power_w.maxCoeff();
  out << "freq_offset_khz,power_db_rel_peak\n";
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    const double p = spec.power_w[i];
    out << fmt("%.9g", (spec.freq_hz[i] - center_hz) / 1e3) << ','
        << (p > 0.0 && peak > 0.0 ? fmt("%.9g", 10.0 * std::log10(p / peak)) : "-inf") << '\n';
  }
}

void write_table1(std::ostream& text, std::ostream& csv, const ScenarioReport& rep) {
  char line[160];
  std::snprintf(line, sizeof line, "%10s %14s %10s %12s %10s %10s\n", "power_dbm", "photons",
                "q_inject", "q_fitted", "q_stderr", "converged");
  text << line;
  csv << "power_dbm,photons,q_injected,q_fitted,q_stderr,converged\n";
  for (const auto& r : rep.rows) {
    const auto& f = r.run.fit;
    const double se = f.stderr ? f.stderr->q_loaded : NAN;
    std::snprintf(line, sizeof line, "%10.1f %14.4g %10.0f %12.1f %10.1f %10s\n", r.power_dbm,
                  r.photons, r.q_injected, f.q_loaded, se, r.run.ok() ? "true" : "false");
    text << line;
    csv << fmt("%.12g", r.power_dbm) << ',' << fmt("%.12g", r.photons) << ','
        << fmt("%.12g", r.q_injected) << ',' << fmt("%.12g", f.q_loaded) << ','
        << fmt("%.12g", se) << ',' << (r.run.ok() ? "true" : "false") << '\n';
  }
  if (!rep.consistency.pairs.empty()) {
    text << "\nq_consistency=" << (rep.consistency.pass ? "pass" : "fail")
         << " max_discrepancy=" << fmt("%.1f", rep.consistency.max_discrepancy) << '\n';
    for (const auto& p : rep.consistency.pairs) {
      std::snprintf(line, sizeof line, "  rows %zu-%zu: |dQ|=%.1f allowed=%.1f %s\n", p.i, p.j,
                    p.discrepancy, p.allowed, p.pass ? "pass" : "fail");
      text << line;
    }
  }
}

void write_sensitivity(std::ostream& out, const SensitivityReport& r) {
  out << "f_hz=" << fmt("%.12g", r.f_hz) << '\n'
      << "q=" << fmt("%.12g", r.q) << '\n'
      << "temp_k=" << fmt("%.12g", r.temp_k) << '\n'
      << "snr=" << fmt("%.12g", r.snr) << '\n'
      << "single_photon_power_w=" << fmt("%.6g", r.single_photon_power_w) << '\n'
      << "occupation=" << fmt("%.6g", r.occupation) << '\n'
      << "total_noise_power_w="
      << (r.total_noise_power_w ? fmt("%.6g", *r.total_noise_power_w) : std::string("n/a")) << '\n'
      << "required_rbw_hz=" << fmt("%.6g", r.required_rbw_hz) << '\n'
      << "min_measure_time_s=" << fmt("%.6g", r.min_measure_time_s) << '\n'
      << "optical_lambda_m=" << fmt("%.6g", r.optical_lambda_m) << '\n'
      << "optical_finesse=" << fmt("%.6g", r.optical_finesse) << '\n'
      << "optical_length_m=" << fmt("%.6g", r.optical_length_m) << '\n'
      << "optical_single_photon_power_w=" << fmt("%.6g", r.optical_single_photon_power_w) << '\n';
}

void write_noise_summary(std::ostream& out, const NoiseRun& run) {
  out << "rbw_hz=" << fmt("%.12g", run.spectrum.rbw_hz) << '\n'
      << "averages=" << run.spectrum.averages_used << '\n'
      << "occupation=" << fmt("%.6g", run.budget.occupation) << '\n'
      << "total_noise_power_w=" << fmt("%.6g", run.budget.total_power.watts()) << '\n'
      << "per_bin_noise_w=" << fmt("%.6g", run.budget.per_bin_power.watts()) << '\n'
      << "per_bin_photon_equivalent=" << fmt("%.6g", run.occupancy_per_bin) << '\n';
  if (run.fit_error) out << "fit_error=" << *run.fit_error << '\n';
}

}  // namespace regen
