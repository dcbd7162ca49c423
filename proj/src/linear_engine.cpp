// Copyright 2026 The delayline Authors
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

#include "delayline/linear_engine.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

#include "delayline/errors.hpp"

namespace delayline {

namespace {
constexpr std::complex<double> kMinusI{0.0, -1.0};
}

DriftMatrix build_drift(const DerivedParams& p) {
  if (p.n < 2) throw ConfigError("build_drift: n must be >= 2");
  const int dim = p.n + 1;
  DriftMatrix d;
  d.n = p.n;
  d.m = Eigen::MatrixXcd::Zero(dim, dim);

  d.m(0, 0) = -p.kappa;
  for (int j = 1; j <= p.n; ++j) d.m(j, j) = -p.gamma;
  // In-bond of site 1 carries weight chi_01 and rate gamma_01 = gamma/chi_01^2,
  // so the hop amplitude is sqrt(gamma*gamma_01).
  d.m(1, 0) = kMinusI * std::sqrt(p.gamma * p.gamma_01());
  for (int j = 2; j <= p.n; ++j) d.m(j, j - 1) = kMinusI * p.gamma;
  // Feedback corner: chi_n0 * gamma_n0.
  d.m(0, p.n) = kMinusI * p.chi_n0 * p.gamma_n0();
  return d;
}

double CovarianceState::hermiticity_defect() const {
  return (c - c.adjoint()).cwiseAbs().maxCoeff();
}

double CovarianceState::total_excitation() const { return c.trace().real(); }

double CovarianceState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      (c + c.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CovarianceState single_photon_at_site0(int n) {
  CovarianceState s;
  s.c = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  s.c(0, 0) = 1.0;
  s.t = 0.0;
  return s;
}

TimeSeries PopulationGrid::site(int j, const std::string& name) const {
  TimeSeries ts;
  ts.name = name;
  for (std::size_t i = 0; i < times.size(); ++i) {
    ts.push(times[i], pops(static_cast<Eigen::Index>(i), j));
  }
  return ts;
}

CovariancePropagator::CovariancePropagator(const DriftMatrix& drift)
    : drift_(drift) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(drift.m);
  if (es.info() != Eigen::Success) {
    throw NumericError("drift eigendecomposition failed");
  }
  vecs_ = es.eigenvectors();
  vals_ = es.eigenvalues();
  vecs_inv_ = vecs_.inverse();
  const double n1 = vecs_.cwiseAbs().colwise().sum().maxCoeff();
  const double n2 = vecs_inv_.cwiseAbs().colwise().sum().maxCoeff();
  cond_ = n1 * n2;
  fallback_ = cond_ > 1e8;
}

void CovariancePropagator::check_times(const std::vector<double>& times) const {
  if (times.empty()) throw ConfigError("sample_times must be non-empty");
  if (times.front() < 0.0) throw ConfigError("sample_times must start at >= 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ConfigError("sample_times must be strictly increasing");
    }
  }
}

Eigen::MatrixXcd CovariancePropagator::amplitude_propagator(double t) const {
  // e^{M t} via the cached eigenbasis.
  Eigen::VectorXcd phases(vals_.size());
  for (Eigen::Index k = 0; k < vals_.size(); ++k) {
    phases(k) = std::exp(vals_(k) * t);
  }
  return vecs_ * phases.asDiagonal() * vecs_inv_;
}

std::vector<CovarianceState> CovariancePropagator::propagate(
    const CovarianceState& c0, const std::vector<double>& times) const {
  check_times(times);
  const Eigen::Index dim = drift_.m.rows();
  if (c0.c.rows() != dim || c0.c.cols() != dim) {
    throw ConfigError("covariance dimension does not match drift");
  }

  std::vector<CovarianceState> out;
  out.reserve(times.size());

  if (!fallback_) {
    for (double t : times) {
      const Eigen::MatrixXcd p = amplitude_propagator(t);
      CovarianceState s;
      s.t = t;
      s.c = p.conjugate() * c0.c * p.transpose();
      s.c = ((s.c + s.c.adjoint()) / 2.0).eval();
      out.push_back(std::move(s));
    }
    return out;
  }

  // Ill-conditioned eigenbasis: step with scaling-and-squaring exponentials.
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim);
  double t_cur = 0.0;
  Eigen::MatrixXcd step;
  double step_len = -1.0;
  for (double t : times) {
    const double gap = t - t_cur;
    if (gap > 0.0) {
      if (std::abs(gap - step_len) > 1e-12 * (1.0 + gap)) {
        step = (drift_.m * gap).exp();
        step_len = gap;
      }
      p = (step * p).eval();
      t_cur = t;
    }
    CovarianceState s;
    s.t = t;
    s.c = p.conjugate() * c0.c * p.transpose();
    s.c = ((s.c + s.c.adjoint()) / 2.0).eval();
    out.push_back(std::move(s));
  }
  return out;
}

PopulationGrid CovariancePropagator::populations(
    const CovarianceState& c0, const std::vector<double>& times) const {
  check_times(times);
  const Eigen::Index dim = drift_.m.rows();
  if (c0.c.rows() != dim || c0.c.cols() != dim) {
    throw ConfigError("covariance dimension does not match drift");
  }

  // Spectral modes of the (Hermitian, PSD) initial covariance.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      (c0.c + c0.c.adjoint()) / 2.0);
  const double w_max = es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Eigen::VectorXcd> modes;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double w = es.eigenvalues()(k);
    if (w > 1e-14 * (1.0 + w_max)) {
      modes.push_back(std::sqrt(w) * es.eigenvectors().col(k));
    }
  }

  PopulationGrid grid;
  grid.times = times;
  grid.pops = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), dim);

  if (!fallback_) {
    std::vector<Eigen::VectorXcd> coeffs;  // eigenbasis coordinates per mode
    coeffs.reserve(modes.size());
    for (const auto& u : modes) coeffs.push_back(vecs_inv_ * u);
    Eigen::VectorXcd phases(dim), psi(dim);
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        phases(k) = std::exp(vals_(k) * times[i]);
      }
      for (std::size_t r = 0; r < modes.size(); ++r) {
        psi.noalias() = vecs_ * phases.cwiseProduct(coeffs[r]).matrix();
        grid.pops.row(static_cast<Eigen::Index>(i)) +=
            psi.cwiseAbs2().transpose();
      }
    }
    return grid;
  }

  std::vector<Eigen::VectorXcd> psis = modes;
  double t_cur = 0.0;
  Eigen::MatrixXcd step;
  double step_len = -1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double gap = times[i] - t_cur;
    if (gap > 0.0) {
      if (std::abs(gap - step_len) > 1e-12 * (1.0 + gap)) {
        step = (drift_.m * gap).exp();
        step_len = gap;
      }
      for (auto& psi : psis) psi = (step * psi).eval();
      t_cur = times[i];
    }
    for (const auto& psi : psis) {
      grid.pops.row(static_cast<Eigen::Index>(i)) += psi.cwiseAbs2().transpose();
    }
  }
  return grid;
}

std::vector<CovarianceState> propagate_covariance(
    const DriftMatrix& drift, const CovarianceState& c0,
    const std::vector<double>& times) {
  return CovariancePropagator(drift).propagate(c0, times);
}

namespace {

TimeSeries profile_from_series(const std::vector<double>& times,
                               const std::vector<double>& pop0,
                               const std::vector<double>& popn, double delta_t,
                               double gamma, double kappa) {
  TimeSeries f;
  f.name = "memory_profile";
  const double norm = gamma / kappa;
  int missing = 0;

  // Uniform-grid index offset for the delayed denominator; falls back to
  // interpolation when the grid is irregular.
  const double dt = times.size() > 1 ? times[1] - times[0] : 0.0;
  auto delayed_pop0 = [&](std::size_t i) -> double {
    const double t_del = times[i] - delta_t;
    if (dt > 0.0) {
      const double idx = t_del / dt;
      const double ridx = std::round(idx);
      if (std::abs(idx - ridx) < 1e-6 && ridx >= 0 &&
          ridx < static_cast<double>(times.size())) {
        return pop0[static_cast<std::size_t>(ridx)];
      }
    }
    // interpolate
    std::size_t lo = 0;
    for (std::size_t k = 1; k < times.size(); ++k) {
      if (times[k] <= t_del) lo = k;
    }
    if (lo + 1 >= times.size()) return pop0.back();
    const double w = (t_del - times[lo]) / (times[lo + 1] - times[lo]);
    return (1.0 - w) * pop0[lo] + w * pop0[lo + 1];
  };

  for (std::size_t i = 0; i < times.size(); ++i) {
    double denom = 1.0;
    if (times[i] >= delta_t) denom = delayed_pop0(i);
    if (times[i] >= delta_t && denom < 1e-12) {
      ++missing;
      continue;
    }
    f.push(times[i], norm * popn[i] / denom);
  }
  f.meta["normalization"] = std::to_string(norm);
  f.meta["missing"] = std::to_string(missing);
  return f;
}

}  // namespace

TimeSeries memory_profile(const PopulationGrid& grid, double delta_t,
                          double gamma, double kappa) {
  const int n = grid.sites() - 1;
  std::vector<double> pop0(grid.times.size()), popn(grid.times.size());
  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    pop0[i] = grid.pops(static_cast<Eigen::Index>(i), 0);
    popn[i] = grid.pops(static_cast<Eigen::Index>(i), n);
  }
  return profile_from_series(grid.times, pop0, popn, delta_t, gamma, kappa);
}

TimeSeries memory_profile(const std::vector<CovarianceState>& states,
                          double delta_t, double gamma, double kappa) {
  if (states.empty()) throw ConfigError("memory_profile: empty state series");
  const int n = static_cast<int>(states.front().c.rows()) - 1;
  std::vector<double> times(states.size()), pop0(states.size()),
      popn(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    times[i] = states[i].t;
    pop0[i] = states[i].c(0, 0).real();
    popn[i] = states[i].c(n, n).real();
  }
  return profile_from_series(times, pop0, popn, delta_t, gamma, kappa);
}

FrontSummary auxiliary_population_map(const PopulationGrid& grid) {
  FrontSummary out;
  const int n = grid.sites() - 1;
  const Eigen::Index rows = grid.pops.rows();
  for (int j = 1; j <= n; ++j) {
    Eigen::Index best = 0;
    double best_v = -1.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (grid.pops(i, j) > best_v) {
        best_v = grid.pops(i, j);
        best = i;
      }
    }
    double t_peak = grid.times[static_cast<std::size_t>(best)];
    // Parabolic refinement when the peak is interior.
    if (best > 0 && best + 1 < rows) {
      const double ym = grid.pops(best - 1, j);
      const double y0 = grid.pops(best, j);
      const double yp = grid.pops(best + 1, j);
      const double denom = ym - 2.0 * y0 + yp;
      if (std::abs(denom) > 1e-300) {
        const double shift = 0.5 * (ym - yp) / denom;
        const double dt = grid.times[1] - grid.times[0];
        t_peak += shift * dt;
      }
    }
    out.sites.push_back(j);
    out.peak_times.push_back(t_peak);
    out.peak_values.push_back(best_v);
  }
  return out;
}

Eigen::MatrixXcd covariance_generator(const DriftMatrix& drift) {
  const Eigen::Index dim = drift.m.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  return Eigen::kroneckerProduct(id, drift.m.conjugate()).eval() +
         Eigen::kroneckerProduct(drift.m, id).eval();
}

std::vector<double> uniform_times(double t_max, double delta_t,
                                  int samples_per_delay) {
  if (samples_per_delay < 1) {
    throw ConfigError("samples_per_delay must be >= 1");
  }
  const double dt = delta_t / samples_per_delay;
  const int count = static_cast<int>(std::floor(t_max / dt + 1e-9));
  std::vector<double> times(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i <= count; ++i) times[static_cast<std::size_t>(i)] = i * dt;
  return times;
}

}  // namespace delayline
