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

#include "regen/fit.hpp"

#include <cstdio>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Dense>

#include "regen/units.hpp"

namespace regen {

void SweepData::validate() const {
  if (freq_hz.size() != power_w.size())
    throw std::invalid_argument("frequency and power columns differ in length");
  if (freq_hz.size() < 5) throw std::invalid_argument("a resonance fit needs at least 5 points");
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (!std::isfinite(freq_hz[i]) || !std::isfinite(power_w[i]))
      throw std::invalid_argument("sweep data must be finite");
    if (i > 0 && !(freq_hz[i] > freq_hz[i - 1]))
      throw std::invalid_argument("sweep frequencies must be strictly increasing");
    if (source == DataSource::kNoiseOnly && power_w[i] < 0.0)
      throw std::invalid_argument("noise spectra must be non-negative");
  }
}

SweepData SweepData::from_spectrum(const Spectrum& s, DataSource src, double f_lo_hz,
                                   double f_hi_hz) {
  std::vector<double> f, p;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.freq_hz[i] >= f_lo_hz && s.freq_hz[i] <= f_hi_hz) {
      f.push_back(s.freq_hz[i]);
      p.push_back(s.power_w[i]);
    }
  }
  SweepData d;
  d.freq_hz = Eigen::Map<Eigen::VectorXd>(f.data(), f.size());
  d.power_w = Eigen::Map<Eigen::VectorXd>(p.data(), p.size());
  d.source = src;
  return d;
}

double FitResult::model(double f_hz) const {
  const double x = (f_hz - f_center_hz) / f_center_hz;
  return baseline_w + peak_w / (1.0 + 4.0 * q_loaded * q_loaded * x * x);
}

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + mid));
}

// Parameter vector order: peak, f_center, q, baseline. Powers are pre-scaled.
using Params = Eigen::Vector4d;

struct Problem {
  const Eigen::VectorXd& f;
  Eigen::VectorXd y;  // scaled powers

  Eigen::VectorXd residuals(const Params& p) const {
    const Eigen::ArrayXd x = (f.array() - p[1]) / p[1];
    return (p[3] + p[0] / (1.0 + 4.0 * p[2] * p[2] * x.square())).matrix() - y;
  }

  Eigen::MatrixXd jacobian(const Params& p) const {
    const Eigen::ArrayXd x = (f.array() - p[1]) / p[1];
    const Eigen::ArrayXd den = 1.0 + 4.0 * p[2] * p[2] * x.square();
    const Eigen::ArrayXd den2 = den.square();
    Eigen::MatrixXd j(f.size(), 4);
    j.col(0) = den.inverse().matrix();
    j.col(1) = (p[0] * 8.0 * p[2] * p[2] * x * f.array() / (p[1] * p[1]) / den2).matrix();
    j.col(2) = (-p[0] * 8.0 * p[2] * x.square() / den2).matrix();
    j.col(3).setOnes();
    return j;
  }
};

double relative_step(const Params& step, const Params& p) {
  const double amp_scale = std::max({std::abs(p[0]), std::abs(p[3]), 1e-300});
  const Params ref(std::max(std::abs(p[0]), amp_scale), std::abs(p[1]), std::abs(p[2]),
                   std::max(std::abs(p[3]), amp_scale));
  return (step.array().abs() / ref.array()).maxCoeff();
}

struct Outcome {
  Params p;
  bool converged;
  int iterations;
  std::vector<double> trace;
};

Outcome minimize(const Problem& prob, Params p, const FitOptions& opt) {
  Outcome out{p, false, 0, {}};
  double cost = prob.residuals(p).squaredNorm();
  out.trace.push_back(cost);
  double lambda = opt.initial_damping;
  while (out.iterations < opt.max_iterations) {
    ++out.iterations;
    const Eigen::MatrixXd j = prob.jacobian(p);
    const Eigen::VectorXd r = prob.residuals(p);
    const Eigen::Matrix4d jtj = j.transpose() * j;
    const Eigen::Vector4d g = j.transpose() * r;
    Eigen::Vector4d diag = jtj.diagonal().cwiseMax(1e-30 * jtj.diagonal().maxCoeff());
    Eigen::Matrix4d a = jtj;
    a.diagonal() += lambda * diag;
    const Params step = a.ldlt().solve(-g);

    const Params trial = p + step;
    const bool admissible = step.allFinite() && trial[1] > 0.0 && trial[2] > 0.0;
    const double trial_cost =
        admissible ? prob.residuals(trial).squaredNorm() : std::numeric_limits<double>::infinity();
    const bool small = admissible && relative_step(step, p) < opt.relative_step;

    if (trial_cost <= cost) {
      p = trial;
      cost = trial_cost;
      out.trace.push_back(cost);
      lambda = std::max(lambda / 10.0, 1e-12);
      if (small) {
        out.converged = true;
        break;
      }
    } else {
      // A tiny, lightly damped step that cannot lower the cost means we sit at
      // the floating-point floor of the minimum.
      if (small && lambda <= opt.initial_damping) {
        out.converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e16) break;
    }
  }
  out.p = p;
  return out;
}

Problem make_problem(const SweepData& d, double& scale) {
  scale = d.power_w.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) scale = 1.0;
  return Problem{d.freq_hz, d.power_w / scale};
}

Params scaled_params(const FitResult& g, double scale) {
  return Params(g.peak_w / scale, g.f_center_hz, g.q_loaded, g.baseline_w / scale);
}

}  // namespace

FitResult initial_guess(const SweepData& d) {
  d.validate();
  Eigen::Index imax = 0;
  const double pmax = d.power_w.maxCoeff(&imax);
  const double pmin = d.power_w.minCoeff();
  if (!(pmax > pmin)) throw NoPeakError("sweep data is flat: no resonance peak to fit");

  std::vector<double> sorted(d.power_w.data(), d.power_w.data() + d.size());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t quart = std::max<std::size_t>(1, sorted.size() / 4);
  const double baseline = median(std::vector<double>(sorted.begin(), sorted.begin() + quart));

  FitResult g;
  g.f_center_hz = d.freq_hz[imax];
  g.baseline_w = baseline;
  g.peak_w = pmax - baseline;
  const double half = baseline + 0.5 * g.peak_w;

  // Walk outward from the peak to the first half-power crossing on each side.
  auto crossing = [&](int dir) -> std::optional<double> {
    for (Eigen::Index i = imax; i + dir >= 0 && i + dir < d.size(); i += dir) {
      const double a = d.power_w[i], b = d.power_w[i + dir];
      if (a >= half && b < half) {
        const double t = (a - half) / (a - b);
        return d.freq_hz[i] + t * (d.freq_hz[i + dir] - d.freq_hz[i]);
      }
    }
    return std::nullopt;
  };
  const auto lo = crossing(-1);
  const auto hi = crossing(+1);
  double fwhm;
  if (lo && hi) {
    fwhm = *hi - *lo;
  } else if (lo || hi) {
    fwhm = 2.0 * std::abs((lo ? *lo : *hi) - g.f_center_hz);
  } else {
    fwhm = d.freq_hz[d.size() - 1] - d.freq_hz[0];
  }
  if (imax == 0 || imax == d.size() - 1 || !lo || !hi) {
    g.edge_peak = true;
    g.warnings.push_back("edge-peak: maximum at or near the sweep boundary; width guess is one-sided");
  }
  if (!(fwhm > 0.0)) fwhm = d.freq_hz[1] - d.freq_hz[0];
  g.q_loaded = g.f_center_hz / fwhm;
  return g;
}

FitResult fit_lorentzian(const SweepData& d, const FitResult& guess, const FitOptions& opt) {
  d.validate();
  for (double v : {guess.peak_w, guess.f_center_hz, guess.q_loaded, guess.baseline_w}) {
    if (!std::isfinite(v)) throw std::invalid_argument("initial guess must be finite");
  }
  if (!(guess.f_center_hz > 0.0 && guess.q_loaded > 0.0))
    throw std::invalid_argument("initial guess needs positive f_center and q");

  double scale = 1.0;
  const Problem prob = make_problem(d, scale);
  const Outcome o = minimize(prob, scaled_params(guess, scale), opt);

  FitResult r;
  r.peak_w = o.p[0] * scale;
  r.f_center_hz = o.p[1];
  r.q_loaded = o.p[2];
  r.baseline_w = o.p[3] * scale;
  r.converged = o.converged;
  r.iterations = o.iterations;
  r.edge_peak = guess.edge_peak;
  r.warnings = guess.warnings;

  const Eigen::VectorXd res = prob.residuals(o.p) * scale;
  const double rss = res.squaredNorm();
  const auto n = static_cast<double>(d.size());
  r.residual_rms_w = std::sqrt(rss / n);
  if (!r.converged) {
    r.warnings.push_back("fit did not converge; returning the best iterate");
    return r;
  }

  Eigen::MatrixXd j = prob.jacobian(o.p);
  // Amplitude columns are scale-free; f_center and q columns pick up the power scale.
  j.col(1) *= scale;
  j.col(2) *= scale;
  const Eigen::VectorXd norms = j.colwise().norm().transpose();
  if ((norms.array() <= 0.0).any() || d.size() <= 4) {
    r.warnings.push_back("stderr unavailable: rank-deficient curvature");
    return r;
  }
  const Eigen::MatrixXd js = j * norms.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(js);
  qr.setThreshold(1e-12);
  if (qr.rank() < 4) {
    r.warnings.push_back("stderr unavailable: rank-deficient curvature");
    return r;
  }
  const Eigen::Matrix4d bread = (js.transpose() * js).inverse();
  Eigen::Vector4d var;
  if (opt.correlated_lags < 0) {
    var = bread.diagonal() * (rss / (n - 4.0));
  } else {
    const Eigen::Index m = js.rows();
    const Eigen::MatrixXd u = res.asDiagonal() * js;  // per-point score rows
    Eigen::Matrix4d meat = u.transpose() * u;
    for (Eigen::Index k = 1; k <= opt.correlated_lags && k < m; ++k) {
      const Eigen::Matrix4d c = u.topRows(m - k).transpose() * u.bottomRows(m - k);
      meat += c + c.transpose();
    }
    // Truncated lag sums can be indefinite; clip negative eigenvalues.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(meat);
    meat = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).asDiagonal() *
           eig.eigenvectors().transpose();
    var = (bread * meat * bread).diagonal() * (n / (n - 4.0));
    if ((var.array() <= 0.0).any()) {
      r.warnings.push_back("stderr unavailable: correlated-residual covariance not positive");
      return r;
    }
  }
  const Eigen::Vector4d sd = var.array().sqrt().matrix().cwiseQuotient(norms);
  r.stderr = ParamStderr{sd[0], sd[1], sd[2], sd[3]};
  return r;
}

std::vector<double> fit_objective_trace(const SweepData& d, const FitResult& guess,
                                        const FitOptions& opt) {
  d.validate();
  double scale = 1.0;
  const Problem prob = make_problem(d, scale);
  return minimize(prob, scaled_params(guess, scale), opt).trace;
}

ConsistencyReport q_consistency(std::span<const QEstimate> estimates, double tol) {
  if (estimates.size() < 2) throw std::invalid_argument("q_consistency needs at least 2 results");
  ConsistencyReport rep;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    for (std::size_t j = i + 1; j < estimates.size(); ++j) {
      const double diff = std::abs(estimates[i].q - estimates[j].q);
      const double allowed =
          tol * std::hypot(estimates[i].sigma, estimates[j].sigma);
      const bool ok = diff <= allowed;
      rep.pairs.push_back({i, j, diff, allowed, ok});
      rep.pass = rep.pass && ok;
      rep.max_discrepancy = std::max(rep.max_discrepancy, diff);
    }
  }
  return rep;
}

ConsistencyReport q_consistency(std::span<const FitResult> results, double tol,
                                double sigma_floor) {
  std::vector<QEstimate> est;
  est.reserve(results.size());
  for (const auto& r : results) {
    const double s = r.stderr ? r.stderr->q_loaded : 0.0;
    est.push_back({r.q_loaded, std::max(s, sigma_floor)});
  }
  return q_consistency(est, tol);
}

void write_fit_report(std::ostream& out, const FitResult& r) {
  const auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  out << "q_loaded=" << num(r.q_loaded) << '\n';
  out << "q_stderr=" << (r.stderr ? num(r.stderr->q_loaded) : "nan") << '\n';
  out << "f_center_hz=" << num(r.f_center_hz) << '\n';
  out << "f_center_stderr_hz=" << (r.stderr ? num(r.stderr->f_center_hz) : "nan") << '\n';
  out << "peak_dbm=" << (r.peak_w > 0.0 ? num(watts_to_dbm(r.peak_w)) : "-inf") << '\n';
  out << "peak_w=" << num(r.peak_w) << '\n';
  out << "baseline_w=" << num(r.baseline_w) << '\n';
  out << "residual_rms_w=" << num(r.residual_rms_w) << '\n';
  out << "iterations=" << r.iterations << '\n';
  out << "converged=" << (r.converged ? "true" : "false") << '\n';
  for (const auto& w : r.warnings) out << "warning=" << w << '\n';
}

}  // namespace regen
