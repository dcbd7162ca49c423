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

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "delayline/chain.hpp"
#include "delayline/time_series.hpp"

namespace delayline {

// One-body drift generator of the ring: d/dt <a_j> = sum_k M[j][k] <a_k>.
// Strictly lower bidiagonal plus the single feedback corner M[0][n].
struct DriftMatrix {
  Eigen::MatrixXcd m;
  int n = 0;  // auxiliary count; matrix is (n+1) x (n+1)
};

DriftMatrix build_drift(const DerivedParams& p);

// Normally ordered second moments c[j][k] = <a_j^dag a_k> at time t.
struct CovarianceState {
  Eigen::MatrixXcd c;
  double t = 0.0;

  double hermiticity_defect() const;   // max |c - c^dag|
  double total_excitation() const;     // real trace
  double min_eigenvalue() const;
};

CovarianceState single_photon_at_site0(int n);

// Diagonal (population) samples of the covariance over a time grid.
struct PopulationGrid {
  std::vector<double> times;
  Eigen::MatrixXd pops;  // times.size() x (n+1)

  int sites() const { return static_cast<int>(pops.cols()); }
  TimeSeries site(int j, const std::string& name) const;
};

// Propagates c(t) under dc/dt = conj(M) c + c M^T, i.e. the second-moment
// equation induced by the drift. One eigendecomposition of M (size n+1)
// replaces the (n+1)^2-dimensional vectorized system; the two routes are
// equivalent and tested against each other. Falls back to per-step
// scaling-and-squaring exponentials when the eigenvector basis is
// ill-conditioned (condition estimate > 1e8).
class CovariancePropagator {
 public:
  explicit CovariancePropagator(const DriftMatrix& drift);

  // Full covariance snapshots; memory grows as samples * (n+1)^2.
  std::vector<CovarianceState> propagate(const CovarianceState& c0,
                                         const std::vector<double>& times) const;

  // Populations only. Decomposes c0 into spectral modes and propagates
  // amplitude vectors, O(rank * (n+1)^2) per sample.
  PopulationGrid populations(const CovarianceState& c0,
                             const std::vector<double>& times) const;

  bool used_fallback() const { return fallback_; }
  double condition_estimate() const { return cond_; }

 private:
  void check_times(const std::vector<double>& times) const;
  Eigen::MatrixXcd amplitude_propagator(double t) const;

  DriftMatrix drift_;
  Eigen::MatrixXcd vecs_;
  Eigen::MatrixXcd vecs_inv_;
  Eigen::VectorXcd vals_;
  double cond_ = 0.0;
  bool fallback_ = false;
};

std::vector<CovarianceState> propagate_covariance(
    const DriftMatrix& drift, const CovarianceState& c0,
    const std::vector<double>& times);

// Ratio of the site-n population to the delayed site-0 population,
// normalized by gamma/kappa so the long-time plateau is 1. The
// denominator is taken as 1 for t < delta_t. Samples whose denominator
// falls below 1e-12 are dropped (counted in meta["missing"]).
TimeSeries memory_profile(const PopulationGrid& grid, double delta_t,
                          double gamma, double kappa);
TimeSeries memory_profile(const std::vector<CovarianceState>& states,
                          double delta_t, double gamma, double kappa);

// Population history of the auxiliary sites 1..n plus per-site peak times
// (parabolic refinement around the sampled argmax).
struct FrontSummary {
  std::vector<int> sites;
  std::vector<double> peak_times;
  std::vector<double> peak_values;
};

FrontSummary auxiliary_population_map(const PopulationGrid& grid);

// Vectorized form of the second-moment generator, kron(I, conj(M)) +
// kron(M, I), for equivalence tests at small n.
Eigen::MatrixXcd covariance_generator(const DriftMatrix& drift);

// Uniform sample grid 0..t_max with `samples_per_delay` points per delta_t.
std::vector<double> uniform_times(double t_max, double delta_t,
                                  int samples_per_delay);

}  // namespace delayline
