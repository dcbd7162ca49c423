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
#include <Eigen/Sparse>
#include <vector>

#include "delayline/chain.hpp"
#include "delayline/superop.hpp"
#include "delayline/time_series.hpp"

namespace delayline {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;

// Assumption-free master-equation integrator on the full 2^(n+1) Hilbert
// space (n <= 7). Classic RK4 on the dense density matrix with sparse
// embedded bond operators; used to certify the factorized-gate engine.
class DenseModel {
 public:
  // Standard ring from the engineered parameters; the site-0 drive enters
  // whole (not split) since no locality is needed here.
  static DenseModel from_config(const ChainConfig& cfg);
  // Arbitrary bond table on an (n+1)-site ring, for synthetic tests.
  static DenseModel from_bonds(int n, const std::vector<BondParams>& bonds);

  int n() const { return n_; }
  long dim() const { return dim_; }
  double gamma_scale() const { return gamma_scale_; }

  Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho) const;
  Eigen::MatrixXcd initial_excited() const;  // site 0 excited, rest vacuum

  double site0_population(const Eigen::MatrixXcd& rho) const;

  // Column-stacking matrix form of the full generator; dim^2 x dim^2,
  // only sensible for n <= 3.
  Eigen::MatrixXcd vectorized_generator() const;

 private:
  int n_ = 0;
  long dim_ = 0;
  double gamma_scale_ = 0.0;  // max bond rate, for step-size checks
  SparseC h_eff_;             // H - (i/2) sum J^dag J
  std::vector<SparseC> jumps_;
  Eigen::VectorXd site0_number_diag_;
  std::vector<SparseC> hams_;  // per-bond Hamiltonians (for the generator)
};

struct DenseRun {
  TimeSeries site0_population;
  double final_trace_error = 0.0;
};

// RK4 evolution from the excited initial state. dt_rk must satisfy
// dt_rk <= 1/(10*gamma); a trace drift beyond 1e-6 aborts with
// NumericError demanding a smaller step.
DenseRun dense_evolve(const DenseModel& model, double t_max, double dt_rk,
                      int sample_stride = 1);

DenseRun dense_evolve(const ChainConfig& cfg, double t_max, double dt_rk,
                      int sample_stride = 1);

}  // namespace delayline
