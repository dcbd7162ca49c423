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

#include "delayline/dense_oracle.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <string>

#include "delayline/errors.hpp"

namespace delayline {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

// op acting on `site` of an (n+1)-qubit register; site 0 is the most
// significant factor.
SparseC embed_site(const Eigen::Matrix2cd& op, int site, int n) {
  const long dim = 1L << (n + 1);
  SparseC out(dim, dim);
  std::vector<Eigen::Triplet<Complex>> trips;
  const long left = 1L << site;            // blocks above the site
  const long right = 1L << (n - site);     // fast-running space below
  for (long blk = 0; blk < left; ++blk) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        if (op(r, c) == Complex{}) continue;
        for (long k = 0; k < right; ++k) {
          const long row = (blk * 2 + r) * right + k;
          const long col = (blk * 2 + c) * right + k;
          trips.emplace_back(row, col, op(r, c));
        }
      }
    }
  }
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

DenseModel DenseModel::from_bonds(int n, const std::vector<BondParams>& bonds) {
  if (n < 1 || n > 7) {
    throw ConfigError("dense oracle: n must be within 1..7, got n=" +
                      std::to_string(n));
  }
  if (bonds.size() != static_cast<std::size_t>(n) + 1) {
    throw ConfigError("dense oracle: expected n+1 bond parameter sets");
  }

  DenseModel m;
  m.n_ = n;
  m.dim_ = 1L << (n + 1);

  std::vector<SparseC> lower(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    lower[static_cast<std::size_t>(j)] = embed_site(sigma_minus(), j, n);
  }

  SparseC h(m.dim_, m.dim_);
  SparseC sum_jdj(m.dim_, m.dim_);
  for (int j = 0; j <= n; ++j) {
    const auto& bp = bonds[static_cast<std::size_t>(j)];
    m.gamma_scale_ = std::max(m.gamma_scale_, bp.gamma);
    const int next = (j + 1) % (n + 1);
    const SparseC& sm_a = lower[static_cast<std::size_t>(j)];
    const SparseC& sm_b = lower[static_cast<std::size_t>(next)];

    SparseC h_bond =
        (bp.gamma * bp.chi / 2.0) *
        (SparseC(sm_a * SparseC(sm_b.adjoint())) +
         SparseC(SparseC(sm_a.adjoint()) * sm_b));
    if (bp.drive_first != 0.0) {
      h_bond = h_bond + SparseC(bp.drive_first *
                                (sm_a + SparseC(sm_a.adjoint())));
    }
    if (bp.drive_second != 0.0) {
      h_bond = h_bond + SparseC(bp.drive_second *
                                (sm_b + SparseC(sm_b.adjoint())));
    }
    m.hams_.push_back(h_bond);
    h = h + h_bond;

    SparseC jump = std::sqrt(bp.gamma) * (sm_a - kI * bp.chi * sm_b);
    jump.prune(1e-300);
    sum_jdj = sum_jdj + SparseC(SparseC(jump.adjoint()) * jump);
    m.jumps_.push_back(jump);
  }
  m.h_eff_ = h - Complex{0.0, 0.5} * sum_jdj;
  m.h_eff_.makeCompressed();

  // Site-0 number operator is diagonal in the computational basis.
  m.site0_number_diag_ = Eigen::VectorXd::Zero(m.dim_);
  const long half = m.dim_ / 2;
  for (long k = half; k < m.dim_; ++k) m.site0_number_diag_(k) = 1.0;
  return m;
}

DenseModel DenseModel::from_config(const ChainConfig& cfg) {
  if (cfg.n > 7) {
    throw ConfigError("dense oracle: n must be <= 7, got n=" +
                      std::to_string(cfg.n));
  }
  const DerivedParams p = derive_params(cfg);
  auto table = bond_params_table(p, 0.0);
  // Whole drive on bond (0,1), first site: locality is irrelevant here and
  // this keeps the Hamiltonian identical to the split used by the gates.
  table[0].drive_first = cfg.omega;
  return from_bonds(cfg.n, table);
}

Eigen::MatrixXcd DenseModel::rhs(const Eigen::MatrixXcd& rho) const {
  Eigen::MatrixXcd out = -kI * (h_eff_ * rho);
  out += out.adjoint().eval();
  for (const auto& jump : jumps_) {
    const Eigen::MatrixXcd jr = jump * rho;
    out.noalias() += jr * jump.adjoint();
  }
  return out;
}

Eigen::MatrixXcd DenseModel::initial_excited() const {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim_, dim_);
  const long idx = dim_ / 2;  // |1 0 ... 0>
  rho(idx, idx) = 1.0;
  return rho;
}

double DenseModel::site0_population(const Eigen::MatrixXcd& rho) const {
  double pop = 0.0;
  for (long k = 0; k < dim_; ++k) {
    pop += site0_number_diag_(k) * rho(k, k).real();
  }
  return pop;
}

Eigen::MatrixXcd DenseModel::vectorized_generator() const {
  if (n_ > 3) {
    throw ConfigError("vectorized_generator: only supported for n <= 3");
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim_, dim_);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const auto& hb : hams_) h += hb;
  Eigen::MatrixXcd l = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                              Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& jump : jumps_) {
    const Eigen::MatrixXcd j = jump;
    const Eigen::MatrixXcd jdj = j.adjoint() * j;
    l += Eigen::kroneckerProduct(j.conjugate(), j).eval();
    l -= 0.5 * (Eigen::kroneckerProduct(id, jdj).eval() +
                Eigen::kroneckerProduct(jdj.transpose(), id).eval());
  }
  return l;
}

DenseRun dense_evolve(const DenseModel& model, double t_max, double dt_rk,
                      int sample_stride) {
  if (!(t_max > 0.0)) throw ConfigError("dense_evolve: t_max must be > 0");
  if (!(dt_rk > 0.0) ||
      (model.gamma_scale() > 0.0 && dt_rk > 1.0 / (10.0 * model.gamma_scale()))) {
    throw ConfigError("dense_evolve: need 0 < dt_rk <= 1/(10*gamma)");
  }
  if (sample_stride < 1) throw ConfigError("dense_evolve: bad sample_stride");

  const int steps = static_cast<int>(std::ceil(t_max / dt_rk - 1e-9));

  DenseRun run;
  run.site0_population.name = "dense_site0_population";

  Eigen::MatrixXcd rho = model.initial_excited();
  run.site0_population.push(0.0, model.site0_population(rho));

  Eigen::MatrixXcd k1, k2, k3, k4;
  for (int i = 0; i < steps; ++i) {
    k1 = model.rhs(rho);
    k2 = model.rhs(rho + (0.5 * dt_rk) * k1);
    k3 = model.rhs(rho + (0.5 * dt_rk) * k2);
    k4 = model.rhs(rho + dt_rk * k3);
    rho += (dt_rk / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if ((i + 1) % sample_stride == 0 || i + 1 == steps) {
      const double trace_err = std::abs(1.0 - rho.trace().real());
      if (trace_err > 1e-6) {
        throw NumericError(
            "dense_evolve: trace drift " + std::to_string(trace_err) +
            " exceeds 1e-6; use a smaller dt_rk");
      }
      run.site0_population.push(dt_rk * (i + 1),
                                model.site0_population(rho));
    }
  }
  run.final_trace_error = std::abs(1.0 - rho.trace().real());
  return run;
}

DenseRun dense_evolve(const ChainConfig& cfg, double t_max, double dt_rk,
                      int sample_stride) {
  return dense_evolve(DenseModel::from_config(cfg), t_max, dt_rk,
                      sample_stride);
}

}  // namespace delayline
