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

#include "regen/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace regen {

ConfigError::ConfigError(int line, const std::string& what, const std::string& source)
    : std::runtime_error((source.empty() ? "" : source + ": ") +
                         (line > 0 ? "line " + std::to_string(line) + ": " : "") + what),
      line_(line),
      detail_(what) {}

void ExperimentConfig::validate() const {
  cavity.validate();
  chain.validate();
  if (!(env.temp_k > 0.0)) throw ConfigError(0, "env.temp_k must be positive");
  if (!(sweep.f_start_hz < sweep.f_stop_hz))
    throw ConfigError(0, "sweep.f_start_hz must be below sweep.f_stop_hz");
  if (sweep.points < 5) throw ConfigError(0, "sweep.points must be >= 5");
  if (!(sweep.rbw_hz > 0.0)) throw ConfigError(0, "sweep.rbw_hz must be positive");
  if (sweep.averages < 1) throw ConfigError(0, "sweep.averages must be >= 1");
  const double lo = chain.lo_freq.hz();
  if (std::abs(sweep.f_stop_hz - lo) >= chain.lpf_cutoff_hz ||
      std::abs(sweep.f_start_hz - lo) >= chain.lpf_cutoff_hz)
    throw ConfigError(0, "sweep band must map inside the low-pass band");
  if (table1.powers_dbm.empty()) throw ConfigError(0, "table1.powers_dbm must not be empty");
  if (!table1.q_loaded.empty() && table1.q_loaded.size() != table1.powers_dbm.size())
    throw ConfigError(0, "table1.q_loaded needs one value per table1.powers_dbm entry");
  for (double q : table1.q_loaded) {
    if (!(q > 0.0)) throw ConfigError(0, "table1.q_loaded values must be positive");
  }
  if (!(noise.rbw_hz > 0.0) || noise.averages < 1)
    throw ConfigError(0, "noise.rbw_hz and noise.averages must be positive");
}

SweepSettings ExperimentConfig::sweep_settings() const {
  return {sweep.mode, sweep.engine, sweep.rbw_hz, sweep.averages, sweep.master_seed};
}

double ExperimentConfig::row_q(std::size_t row) const {
  return table1.q_loaded.empty() ? cavity.q_loaded : table1.q_loaded.at(row);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw ConfigError(line, key + ": expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& v, int line, const std::string& key) {
  const double d = to_double(v, line, key);
  if (d != std::floor(d) || std::abs(d) > 1e9)
    throw ConfigError(line, key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

std::vector<double> to_list(const std::string& v, int line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line, key));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, int, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"cavity.f_res_hz", [](auto& c, auto& v, int l, auto& k) {
         c.cavity.f_res = Frequency::hz(to_double(v, l, k)); }},
      {"cavity.q_loaded", [](auto& c, auto& v, int l, auto& k) { c.cavity.q_loaded = to_double(v, l, k); }},
      {"cavity.beta1", [](auto& c, auto& v, int l, auto& k) { c.cavity.beta1 = to_double(v, l, k); }},
      {"cavity.beta2", [](auto& c, auto& v, int l, auto& k) { c.cavity.beta2 = to_double(v, l, k); }},
      {"cavity.excess_loss_db", [](auto& c, auto& v, int l, auto& k) {
         c.cavity.excess_loss_db = to_double(v, l, k); }},
      {"env.temp_k", [](auto& c, auto& v, int l, auto& k) { c.env.temp_k = to_double(v, l, k); }},
      {"chain.attenuation_db", [](auto& c, auto& v, int l, auto& k) {
         c.chain.attenuation_db = to_double(v, l, k); }},
      {"chain.lna_gain_db", [](auto& c, auto& v, int l, auto& k) { c.chain.lna_gain_db = to_double(v, l, k); }},
      {"chain.lna_noise_temp_k", [](auto& c, auto& v, int l, auto& k) {
         c.chain.lna_noise_temp_k = to_double(v, l, k); }},
      {"chain.lo_freq_hz", [](auto& c, auto& v, int l, auto& k) {
         c.chain.lo_freq = Frequency::hz(to_double(v, l, k)); }},
      {"chain.lpf_cutoff_hz", [](auto& c, auto& v, int l, auto& k) {
         c.chain.lpf_cutoff_hz = to_double(v, l, k); }},
      {"chain.sample_rate_hz", [](auto& c, auto& v, int l, auto& k) {
         c.chain.sample_rate_hz = to_double(v, l, k); }},
      {"chain.post_gain_db", [](auto& c, auto& v, int l, auto& k) { c.chain.post_gain_db = to_double(v, l, k); }},
      {"sweep.f_start_hz", [](auto& c, auto& v, int l, auto& k) { c.sweep.f_start_hz = to_double(v, l, k); }},
      {"sweep.f_stop_hz", [](auto& c, auto& v, int l, auto& k) { c.sweep.f_stop_hz = to_double(v, l, k); }},
      {"sweep.points", [](auto& c, auto& v, int l, auto& k) { c.sweep.points = to_int(v, l, k); }},
      {"sweep.power_dbm_at_cavity", [](auto& c, auto& v, int l, auto& k) {
         c.sweep.power_dbm_at_cavity = to_double(v, l, k); }},
      {"sweep.rbw_hz", [](auto& c, auto& v, int l, auto& k) { c.sweep.rbw_hz = to_double(v, l, k); }},
      {"sweep.averages", [](auto& c, auto& v, int l, auto& k) { c.sweep.averages = to_int(v, l, k); }},
      {"sweep.mode", [](auto& c, auto& v, int l, auto&) {
         try { c.sweep.mode = parse_mode(v); } catch (const std::invalid_argument& e) { throw ConfigError(l, e.what()); } }},
      {"sweep.engine", [](auto& c, auto& v, int l, auto&) {
         try { c.sweep.engine = parse_engine(v); } catch (const std::invalid_argument& e) { throw ConfigError(l, e.what()); } }},
      {"sweep.master_seed", [](auto& c, auto& v, int l, auto& k) {
         const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), c.sweep.master_seed);
         if (ec != std::errc() || end != v.data() + v.size())
           throw ConfigError(l, k + ": expected an unsigned integer, got '" + v + "'"); }},
      {"table1.powers_dbm", [](auto& c, auto& v, int l, auto& k) { c.table1.powers_dbm = to_list(v, l, k); }},
      {"table1.q_loaded", [](auto& c, auto& v, int l, auto& k) { c.table1.q_loaded = to_list(v, l, k); }},
      {"table1.q_tolerance", [](auto& c, auto& v, int l, auto& k) { c.table1.q_tolerance = to_double(v, l, k); }},
      {"table1.q_uncertainty", [](auto& c, auto& v, int l, auto& k) {
         c.table1.q_uncertainty = to_double(v, l, k); }},
      {"noise.rbw_hz", [](auto& c, auto& v, int l, auto& k) { c.noise.rbw_hz = to_double(v, l, k); }},
      {"noise.averages", [](auto& c, auto& v, int l, auto& k) { c.noise.averages = to_int(v, l, k); }},
      {"noise.window", [](auto& c, auto& v, int l, auto&) {
         try { c.noise.window = parse_window(v); } catch (const std::invalid_argument& e) { throw ConfigError(l, e.what()); } }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string raw;
  int line = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(line, "expected 'key = value'");
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line, "unknown key '" + key + "'");
    if (auto [prev, fresh] = seen.emplace(key, line); !fresh)
      throw ConfigError(line, "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(prev->second) + ")");
    try {
      it->second(cfg, value, line, key);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(line, key + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "cannot open config file " + path);
  try {
    return parse_config(f);
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), e.detail(), path);
  }
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  const auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  const auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s;
  };
  out << "cavity.f_res_hz = " << num(c.cavity.f_res.hz()) << '\n'
      << "cavity.q_loaded = " << num(c.cavity.q_loaded) << '\n'
      << "cavity.beta1 = " << num(c.cavity.beta1) << '\n'
      << "cavity.beta2 = " << num(c.cavity.beta2) << '\n'
      << "cavity.excess_loss_db = " << num(c.cavity.excess_loss_db) << '\n'
      << "env.temp_k = " << num(c.env.temp_k) << '\n'
      << "chain.attenuation_db = " << num(c.chain.attenuation_db) << '\n'
      << "chain.lna_gain_db = " << num(c.chain.lna_gain_db) << '\n'
      << "chain.lna_noise_temp_k = " << num(c.chain.lna_noise_temp_k) << '\n'
      << "chain.lo_freq_hz = " << num(c.chain.lo_freq.hz()) << '\n'
      << "chain.lpf_cutoff_hz = " << num(c.chain.lpf_cutoff_hz) << '\n'
      << "chain.sample_rate_hz = " << num(c.chain.sample_rate_hz) << '\n'
      << "chain.post_gain_db = " << num(c.chain.post_gain_db) << '\n'
      << "sweep.f_start_hz = " << num(c.sweep.f_start_hz) << '\n'
      << "sweep.f_stop_hz = " << num(c.sweep.f_stop_hz) << '\n'
      << "sweep.points = " << c.sweep.points << '\n'
      << "sweep.power_dbm_at_cavity = " << num(c.sweep.power_dbm_at_cavity) << '\n'
      << "sweep.rbw_hz = " << num(c.sweep.rbw_hz) << '\n'
      << "sweep.averages = " << c.sweep.averages << '\n'
      << "sweep.mode = " << mode_name(c.sweep.mode) << '\n'
      << "sweep.engine = " << (c.sweep.engine == StochasticEngine::kZoom ? "zoom" : "frame") << '\n'
      << "sweep.master_seed = " << c.sweep.master_seed << '\n'
      << "table1.powers_dbm = " << list(c.table1.powers_dbm) << '\n';
  if (!c.table1.q_loaded.empty()) out << "table1.q_loaded = " << list(c.table1.q_loaded) << '\n';
  out << "table1.q_tolerance = " << num(c.table1.q_tolerance) << '\n'
      << "table1.q_uncertainty = " << num(c.table1.q_uncertainty) << '\n'
      << "noise.rbw_hz = " << num(c.noise.rbw_hz) << '\n'
      << "noise.averages = " << c.noise.averages << '\n'
      << "noise.window = " << window_name(c.noise.window) << '\n';
}

}  // namespace regen
