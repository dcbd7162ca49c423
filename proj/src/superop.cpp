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

#include "delayline/superop.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

#include "delayline/errors.hpp"

namespace delayline {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

Eigen::Matrix2cd sigma_minus() {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  s(0, 1) = 1.0;  // |g><e|
  return s;
}

Eigen::Matrix2cd sigma_plus() { return sigma_minus().adjoint(); }

Eigen::Matrix2cd sigma_x() { return sigma_minus() + sigma_plus(); }

BondGenerator make_bond_generator(int j, const BondParams& bp) {
  if (bp.gamma < 0.0) throw ConfigError("bond gamma must be >= 0");
  const Eigen::Matrix2cd sm = sigma_minus();
  const Eigen::Matrix2cd sp = sigma_plus();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();

  BondGenerator b;
  b.j = j;
  b.h = (bp.gamma * bp.chi / 2.0) *
        (Eigen::kroneckerProduct(sm, sp) + Eigen::kroneckerProduct(sp, sm));
  if (bp.drive_first != 0.0) {
    b.h += bp.drive_first * Eigen::kroneckerProduct(sigma_x(), id);
  }
  if (bp.drive_second != 0.0) {
    b.h += bp.drive_second * Eigen::kroneckerProduct(id, sigma_x());
  }
  b.jump = std::sqrt(bp.gamma) *
           (Eigen::kroneckerProduct(sm, id) -
            kI * bp.chi * Eigen::kroneckerProduct(id, sm));
  b.includes_drive = bp.drive_first != 0.0 || bp.drive_second != 0.0;
  return b;
}

std::vector<BondParams> bond_params_table(const DerivedParams& p,
                                          double omega) {
  std::vector<BondParams> table(static_cast<std::size_t>(p.n) + 1);
  table[0] = {p.gamma_01(), p.chi_01, omega / 2.0, 0.0};
  for (int j = 1; j < p.n; ++j) {
    table[static_cast<std::size_t>(j)] = {p.gamma, 1.0, 0.0, 0.0};
  }
  table[static_cast<std::size_t>(p.n)] = {p.gamma_n0(), p.chi_n0, 0.0,
                                          omega / 2.0};
  return table;
}

BondGenerator build_bond(int j, const DerivedParams& p, double omega) {
  if (j < 0 || j > p.n) {
    throw ConfigError("build_bond: bond index " + std::to_string(j) +
                      " outside ring 0.." + std::to_string(p.n));
  }
  return make_bond_generator(j, bond_params_table(p, omega)[static_cast<std::size_t>(j)]);
}

std::vector<BondGenerator> ring_bonds(const DerivedParams& p, double omega) {
  std::vector<BondGenerator> bonds;
  const auto table = bond_params_table(p, omega);
  for (int j = 0; j <= p.n; ++j) {
    bonds.push_back(make_bond_generator(j, table[static_cast<std::size_t>(j)]));
  }
  return bonds;
}

Matrix16c vectorize_lindbladian(const BondGenerator& b) {
  const Matrix4c id = Matrix4c::Identity();
  const Matrix4c jdj = b.jump.adjoint() * b.jump;
  Matrix16c l = Matrix16c::Zero();
  l += -kI * (Eigen::kroneckerProduct(id, b.h) -
              Eigen::kroneckerProduct(b.h.transpose(), id));
  l += Eigen::kroneckerProduct(b.jump.conjugate(), b.jump);
  l -= 0.5 * (Eigen::kroneckerProduct(id, jdj) +
              Eigen::kroneckerProduct(jdj.transpose(), id));
  return l;
}

Matrix16c exponentiate(const Matrix16c& lmat, double dt) {
  if (!std::isfinite(dt)) throw ConfigError("exponentiate: dt must be finite");
  Eigen::MatrixXcd scaled = lmat * dt;
  return scaled.exp();
}

Matrix16c ChannelStep::reconstruct() const {
  Matrix16c e = Matrix16c::Zero();
  for (const auto& [left, right] : pairs) {
    e += Eigen::kroneckerProduct(right.conjugate(), left);
  }
  return e;
}

Matrix4c ChannelStep::completeness() const {
  Matrix4c c = Matrix4c::Zero();
  for (const auto& [left, right] : pairs) c += right.adjoint() * left;
  return c;
}

Matrix16c choi_matrix(const Matrix16c& superop) {
  Matrix16c choi = Matrix16c::Zero();
  Eigen::Matrix<std::complex<double>, 16, 1> basis, image;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      basis.setZero();
      basis(i + 4 * j) = 1.0;  // vec(|i><j|), column stacking
      image = superop * basis;
      for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
          choi(m * 4 + i, n * 4 + j) = image(m + 4 * n);
        }
      }
    }
  }
  return choi;
}

double choi_min_eigenvalue(const Matrix16c& superop) {
  const Matrix16c choi = choi_matrix(superop);
  Eigen::SelfAdjointEigenSolver<Matrix16c> es((choi + choi.adjoint()) / 2.0,
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

Matrix4c unfold_rowvec(const Eigen::Matrix<std::complex<double>, 16, 1>& v) {
  Matrix4c a;
  for (int m = 0; m < 4; ++m) {
    for (int i = 0; i < 4; ++i) a(m, i) = v(m * 4 + i);
  }
  return a;
}

}  // namespace

ChannelStep factorize_channel(const Matrix16c& superop, double substep_dt,
                              ChannelKind kind) {
  const Matrix16c choi = choi_matrix(superop);
  ChannelStep step;
  step.kind = kind;
  step.substep_dt = substep_dt;

  if (kind == ChannelKind::CPTP) {
    Eigen::SelfAdjointEigenSolver<Matrix16c> es((choi + choi.adjoint()) / 2.0);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-8) {
      throw NumericError(
          "Kraus factorization requested for a non-CP map: Choi eigenvalue " +
          std::to_string(min_eig) +
          " (check the sign bookkeeping of the substep)");
    }
    for (Eigen::Index k = 0; k < 16; ++k) {
      const double lam = es.eigenvalues()(k);
      if (lam <= 1e-12) continue;  // below double-precision channel fidelity
      const Matrix4c a = std::sqrt(lam) * unfold_rowvec(es.eigenvectors().col(k));
      step.pairs.emplace_back(a, a);
    }
    return step;
  }

  Eigen::JacobiSVD<Matrix16c> svd(choi,
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s_max = svd.singularValues()(0);
  for (Eigen::Index k = 0; k < 16; ++k) {
    const double s = svd.singularValues()(k);
    if (s <= 1e-13 * s_max) continue;
    const double root = std::sqrt(s);
    step.pairs.emplace_back(root * unfold_rowvec(svd.matrixU().col(k)),
                            root * unfold_rowvec(svd.matrixV().col(k)));
  }
  return step;
}

ChannelStep factorize_channel(const Matrix16c& superop, double substep_dt) {
  return factorize_channel(
      superop, substep_dt,
      substep_dt >= 0.0 ? ChannelKind::CPTP : ChannelKind::LinearTP);
}

TrotterSchedule make_schedule(double dt) {
  if (!(dt > 0.0)) throw ConfigError("make_schedule: dt must be > 0");
  TrotterSchedule s;
  s.dt = dt;
  s.w = 1.0 / (2.0 - std::cbrt(2.0));
  const double dt1 = s.w * dt / 2.0;
  const double dt2 = s.w * dt;
  const double dt3 = (1.0 - s.w) * dt / 2.0;
  const double dt4 = (1.0 - 2.0 * s.w) * dt;
  s.substeps = {{0, dt1}, {1, dt2}, {0, dt3}, {1, dt4},
                {0, dt3}, {1, dt2}, {0, dt1}};
  return s;
}

std::vector<SweepStep> sweep_plan(double dt, int num_classes) {
  if (!(dt > 0.0)) throw ConfigError("sweep_plan: dt must be > 0");
  if (num_classes < 1) throw ConfigError("sweep_plan: need >= 1 class");

  // Palindromic second-order splitting over the classes; composing it at
  // w*dt, (1-2w)*dt, w*dt cancels the third-order error for any number of
  // classes.
  auto s2 = [&](double h, std::vector<SweepStep>& plan) {
    for (int c = 0; c < num_classes - 1; ++c) plan.push_back({c, h / 2.0});
    plan.push_back({num_classes - 1, h});
    for (int c = num_classes - 2; c >= 0; --c) plan.push_back({c, h / 2.0});
  };

  const double w = 1.0 / (2.0 - std::cbrt(2.0));
  std::vector<SweepStep> raw;
  s2(w * dt, raw);
  s2((1.0 - 2.0 * w) * dt, raw);
  s2(w * dt, raw);

  std::vector<SweepStep> merged;
  for (const auto& step : raw) {
    if (!merged.empty() && merged.back().klass == step.klass) {
      merged.back().dt += step.dt;
    } else {
      merged.push_back(step);
    }
  }
  return merged;
}

}  // namespace delayline
