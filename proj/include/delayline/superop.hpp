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
#include <utility>
#include <vector>

#include "delayline/chain.hpp"

namespace delayline {

using Matrix4c = Eigen::Matrix4cd;
using Matrix16c = Eigen::Matrix<std::complex<double>, 16, 16>;

Eigen::Matrix2cd sigma_minus();
Eigen::Matrix2cd sigma_plus();
Eigen::Matrix2cd sigma_x();

// Raw two-site coupling data for one directed bond. The first site is the
// upstream one; drives act locally on either site.
struct BondParams {
  double gamma = 0.0;        // dissipative hop rate
  double chi = 1.0;          // bond weight (real)
  double drive_first = 0.0;  // sigma_x amplitude on the first site
  double drive_second = 0.0; // sigma_x amplitude on the second site
};

// Two-site generator of a directed bond on the qubit ring:
//   h    = (gamma*chi/2) (sm x sp + sp x sm) + local drives
//   jump = sqrt(gamma) (sm x 1 - i*chi * 1 x sm)
struct BondGenerator {
  int j = 0;  // bond j -> j+1 (mod n+1)
  Matrix4c h;
  Matrix4c jump;
  bool includes_drive = false;
};

BondGenerator make_bond_generator(int j, const BondParams& bp);

// Bond parameter assignment for the full ring: bond (0,1) carries
// (gamma_01, chi_01), interior bonds (gamma, 1), bond (n,0)
// (gamma_n0, chi_n0). The site-0 drive omega is split half/half into the
// two bonds touching site 0 so both sweep classes stay two-local.
std::vector<BondParams> bond_params_table(const DerivedParams& p, double omega);

BondGenerator build_bond(int j, const DerivedParams& p, double omega);
std::vector<BondGenerator> ring_bonds(const DerivedParams& p, double omega);

// Column-stacking matrix form of rho -> -i[h,rho] + J rho J^dag
// - (1/2){J^dag J, rho} acting on vec(rho).
Matrix16c vectorize_lindbladian(const BondGenerator& b);

// Matrix exponential (scaling-and-squaring Pade); dt may be negative.
Matrix16c exponentiate(const Matrix16c& lmat, double dt);

enum class ChannelKind { CPTP, LinearTP };

// One factorized Trotter substep: rho -> sum_k left_k rho right_k^dag.
// CPTP steps have left == right (Kraus form).
struct ChannelStep {
  ChannelKind kind = ChannelKind::CPTP;
  std::vector<std::pair<Matrix4c, Matrix4c>> pairs;
  double substep_dt = 0.0;

  Matrix16c reconstruct() const;  // sum_k kron(conj(right_k), left_k)
  Matrix4c completeness() const;  // sum_k right_k^dag left_k
};

// Choi matrix in the convention C[(m,i),(n,j)] = E(|i><j|)[m,n] with the
// composite index m*4+i; Hermitian for Hermiticity-preserving maps and PSD
// exactly when the map is completely positive.
Matrix16c choi_matrix(const Matrix16c& superop);
double choi_min_eigenvalue(const Matrix16c& superop);

// Kind inferred from the substep sign; positive steps demand a Kraus
// factorization and throw NumericError (with the offending Choi
// eigenvalue) if the channel is not CP.
ChannelStep factorize_channel(const Matrix16c& superop, double substep_dt);
ChannelStep factorize_channel(const Matrix16c& superop, double substep_dt,
                              ChannelKind kind);

// Symmetric 4th-order split of one time step over alternating bond
// classes. The two middle substeps are negative.
struct TrotterSubstep {
  int parity;  // 0 = even bonds, 1 = odd bonds
  double dt;
};

struct TrotterSchedule {
  std::vector<TrotterSubstep> substeps;  // exactly 7
  double w = 0.0;                        // (2 - 2^(1/3))^(-1)
  double dt = 0.0;
};

TrotterSchedule make_schedule(double dt);

// Generalized palindromic composition over num_classes commuting-within-
// class groups. For num_classes == 2 this is exactly the 7-substep
// schedule above; 3 classes handle rings with an odd bond count.
struct SweepStep {
  int klass;
  double dt;
};

std::vector<SweepStep> sweep_plan(double dt, int num_classes);

}  // namespace delayline
