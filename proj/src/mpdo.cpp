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

#include "delayline/mpdo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "delayline/errors.hpp"
#include "delayline/svd.hpp"

namespace delayline {

namespace {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using MapC = Eigen::Map<MatrixC>;
using ConstMapC = Eigen::Map<const MatrixC>;

// Physical-leg weights implementing Tr(op * rho_local) on the vectorized
// local space p = a + 2b.
Eigen::Vector4cd op_weights(const Eigen::Matrix2cd& op) {
  Eigen::Vector4cd w;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) w(a + 2 * b) = op(b, a);
  }
  return w;
}

Eigen::Vector4cd trace_weights() {
  return op_weights(Eigen::Matrix2cd::Identity());
}

}  // namespace

MPDO MPDO::product_state(int n_aux, const Eigen::Matrix2cd& site0) {
  if (n_aux < 1) throw ConfigError("product_state: need at least 1 auxiliary");
  const double herm = (site0 - site0.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) {
    throw ConfigError("site-0 density must be Hermitian (defect " +
                      std::to_string(herm) + ")");
  }
  if (std::abs(site0.trace().real() - 1.0) > 1e-12 ||
      std::abs(site0.trace().imag()) > 1e-12) {
    throw ConfigError("site-0 density must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(site0);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw ConfigError("site-0 density has negative eigenvalue " +
                      std::to_string(es.eigenvalues().minCoeff()));
  }

  MPDO m;
  const int n_sites = n_aux + 1;
  m.tensors_.resize(static_cast<std::size_t>(n_sites));
  m.site_order_.resize(static_cast<std::size_t>(n_sites));
  for (int pos = 0; pos < n_sites; ++pos) {
    auto& t = m.tensors_[static_cast<std::size_t>(pos)];
    t.dl = t.dr = 1;
    t.data = Eigen::VectorXcd::Zero(4);
    m.site_order_[static_cast<std::size_t>(pos)] = pos;
    if (pos == 0) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) t.data(a + 2 * b) = site0(a, b);
      }
    } else {
      t.data(0) = 1.0;  // vacuum |0><0|
    }
  }
  m.center_ = 0;
  return m;
}

int MPDO::pos_of(int site) const {
  for (int pos = 0; pos < n_sites(); ++pos) {
    if (site_order_[static_cast<std::size_t>(pos)] == site) return pos;
  }
  throw ConfigError("pos_of: unknown site " + std::to_string(site));
}

int MPDO::max_bond_dim() const {
  int m = 1;
  for (const auto& t : tensors_) m = std::max(m, t.dr);
  return m;
}

void MPDO::move_center(int pos) {
  if (pos < 0 || pos >= n_sites()) throw ConfigError("move_center: bad pos");
  while (center_ < pos) {
    // Left-orthonormalize tensors_[center_] and push the remainder right.
    auto& t = tensors_[static_cast<std::size_t>(center_)];
    MapC ml(t.data.data(), static_cast<Eigen::Index>(t.dl) * 4, t.dr);
    const Eigen::Index k = std::min<Eigen::Index>(ml.rows(), ml.cols());
    Eigen::HouseholderQR<MatrixC> qr(ml);
    MatrixC q = qr.householderQ() * MatrixC::Identity(ml.rows(), k);
    MatrixC r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

    auto& tn = tensors_[static_cast<std::size_t>(center_) + 1];
    MapC mr(tn.data.data(), tn.dl, static_cast<Eigen::Index>(4) * tn.dr);
    MatrixC merged = r * mr;

    t.dr = static_cast<int>(k);
    t.data = Eigen::Map<Eigen::VectorXcd>(q.data(), q.size());
    tn.dl = static_cast<int>(k);
    tn.data = Eigen::Map<Eigen::VectorXcd>(merged.data(), merged.size());
    ++center_;
  }
  while (center_ > pos) {
    // Right-orthonormalize tensors_[center_] and push the remainder left.
    auto& t = tensors_[static_cast<std::size_t>(center_)];
    MapC mr(t.data.data(), t.dl, static_cast<Eigen::Index>(4) * t.dr);
    const Eigen::Index k = std::min<Eigen::Index>(mr.rows(), mr.cols());
    Eigen::HouseholderQR<MatrixC> qr(mr.adjoint());
    MatrixC q = qr.householderQ() * MatrixC::Identity(mr.cols(), k);
    MatrixC rt = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    // mr = rt^dag * q^dag
    MatrixC l = rt.adjoint();       // dl x k
    MatrixC qrow = q.adjoint();     // k x 4*dr

    auto& tp = tensors_[static_cast<std::size_t>(center_) - 1];
    MapC ml(tp.data.data(), static_cast<Eigen::Index>(tp.dl) * 4, tp.dr);
    MatrixC merged = ml * l;

    t.dl = static_cast<int>(k);
    t.data = Eigen::Map<Eigen::VectorXcd>(qrow.data(), qrow.size());
    tp.dr = static_cast<int>(k);
    tp.data = Eigen::Map<Eigen::VectorXcd>(merged.data(), merged.size());
    --center_;
  }
}

void MPDO::two_site_update(int pos, const Matrix16c* gate, bool swap_sites,
                           const TruncationPolicy& pol, bool absorb_right) {
  if (pos < 0 || pos + 1 >= n_sites()) {
    throw ConfigError("two-site update: bad position " + std::to_string(pos));
  }
  if (center_ < pos) move_center(pos);
  if (center_ > pos + 1) move_center(pos + 1);

  auto& ta = tensors_[static_cast<std::size_t>(pos)];
  auto& tb = tensors_[static_cast<std::size_t>(pos) + 1];
  const int dl = ta.dl;
  const int dr = tb.dr;

  ConstMapC a(ta.data.data(), static_cast<Eigen::Index>(dl) * 4, ta.dr);
  ConstMapC b(tb.data.data(), tb.dl, static_cast<Eigen::Index>(4) * dr);
  MatrixC theta = a * b;  // (dl*4) x (4*dr)

  // Fuse the two physical legs: X[(l,r), p1 + 4*p2].
  MatrixC x(static_cast<Eigen::Index>(dl) * dr, 16);
  for (int r = 0; r < dr; ++r) {
    for (int p2 = 0; p2 < 4; ++p2) {
      for (int p1 = 0; p1 < 4; ++p1) {
        for (int l = 0; l < dl; ++l) {
          x(l + static_cast<Eigen::Index>(dl) * r, p1 + 4 * p2) =
              theta(l + static_cast<Eigen::Index>(dl) * p1, p2 + 4 * r);
        }
      }
    }
  }
  if (gate != nullptr) x = x * gate->transpose();

  // Unfuse; optionally exchange which site carries which leg.
  for (int r = 0; r < dr; ++r) {
    for (int p2 = 0; p2 < 4; ++p2) {
      for (int p1 = 0; p1 < 4; ++p1) {
        const Eigen::Index col = swap_sites ? (p2 + 4 * static_cast<Eigen::Index>(p1))
                                            : (p1 + 4 * static_cast<Eigen::Index>(p2));
        for (int l = 0; l < dl; ++l) {
          theta(l + static_cast<Eigen::Index>(dl) * p1, p2 + 4 * r) =
              x(l + static_cast<Eigen::Index>(dl) * r, col);
        }
      }
    }
  }

  ThinSvd svd = thin_svd(std::move(theta));

  const Eigen::Index k_full = svd.s.size();
  double total = 0.0;
  for (Eigen::Index i = 0; i < k_full; ++i) total += svd.s(i) * svd.s(i);
  Eigen::Index keep = k_full;
  if (total > 0.0) {
    double discarded = 0.0;
    while (keep > 1) {
      const double w = svd.s(keep - 1) * svd.s(keep - 1);
      if (discarded + w > pol.cutoff * total) break;
      discarded += w;
      --keep;
    }
    trunc_weight_ += discarded / total;
  }
  if (keep > pol.max_bond) {
    throw NumericError("bond dimension " + std::to_string(keep) +
                       " at positions (" + std::to_string(pos) + "," +
                       std::to_string(pos + 1) + ") exceeds max_bond " +
                       std::to_string(pol.max_bond));
  }

  MatrixC u = svd.u.leftCols(keep);
  MatrixC vt = svd.vt.topRows(keep);
  if (absorb_right) {
    vt = svd.s.head(keep).asDiagonal() * vt;
    center_ = pos + 1;
  } else {
    u = u * svd.s.head(keep).asDiagonal();
    center_ = pos;
  }

  ta.dr = static_cast<int>(keep);
  ta.data = Eigen::Map<Eigen::VectorXcd>(u.data(), u.size());
  tb.dl = static_cast<int>(keep);
  tb.data = Eigen::Map<Eigen::VectorXcd>(vt.data(), vt.size());

  if (swap_sites) {
    std::swap(site_order_[static_cast<std::size_t>(pos)],
              site_order_[static_cast<std::size_t>(pos) + 1]);
    ++swap_count_;
  }
}

void MPDO::apply_gate(int pos, const Matrix16c& gate,
                      const TruncationPolicy& pol, bool absorb_right) {
  two_site_update(pos, &gate, false, pol, absorb_right);
}

void MPDO::swap_neighbors(int pos, const TruncationPolicy& pol,
                          bool absorb_right) {
  two_site_update(pos, nullptr, true, pol, absorb_right);
}

Eigen::RowVectorXcd MPDO::left_env(int pos_end) const {
  Eigen::RowVectorXcd v = Eigen::RowVectorXcd::Ones(1);
  const Eigen::Vector4cd w = trace_weights();
  for (int pos = 0; pos < pos_end; ++pos) {
    const auto& t = tensors_[static_cast<std::size_t>(pos)];
    MatrixC mat = MatrixC::Zero(t.dl, t.dr);
    for (int p = 0; p < 4; ++p) {
      if (w(p) == Complex{}) continue;
      for (int r = 0; r < t.dr; ++r) {
        mat.col(r) += w(p) * Eigen::Map<const Eigen::VectorXcd>(
                                 t.data.data() +
                                     static_cast<Eigen::Index>(t.dl) *
                                         (p + 4 * r),
                                 t.dl);
      }
    }
    v = v * mat;
  }
  return v;
}

Eigen::VectorXcd MPDO::right_env(int pos_begin) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  const Eigen::Vector4cd w = trace_weights();
  for (int pos = n_sites() - 1; pos > pos_begin; --pos) {
    const auto& t = tensors_[static_cast<std::size_t>(pos)];
    MatrixC mat = MatrixC::Zero(t.dl, t.dr);
    for (int p = 0; p < 4; ++p) {
      if (w(p) == Complex{}) continue;
      for (int r = 0; r < t.dr; ++r) {
        mat.col(r) += w(p) * Eigen::Map<const Eigen::VectorXcd>(
                                 t.data.data() +
                                     static_cast<Eigen::Index>(t.dl) *
                                         (p + 4 * r),
                                 t.dl);
      }
    }
    v = (mat * v).eval();
  }
  return v;
}

std::complex<double> MPDO::trace() const {
  const Eigen::RowVectorXcd v = left_env(n_sites());
  return v(0);
}

std::complex<double> MPDO::expect_site(int site,
                                       const Eigen::Matrix2cd& op) const {
  const int pos = pos_of(site);
  const Eigen::RowVectorXcd lv = left_env(pos);
  const Eigen::VectorXcd rv = right_env(pos);
  const Eigen::Vector4cd w = op_weights(op);
  const auto& t = tensors_[static_cast<std::size_t>(pos)];
  Complex acc{};
  for (int p = 0; p < 4; ++p) {
    if (w(p) == Complex{}) continue;
    for (int r = 0; r < t.dr; ++r) {
      const auto col = Eigen::Map<const Eigen::VectorXcd>(
          t.data.data() + static_cast<Eigen::Index>(t.dl) * (p + 4 * r), t.dl);
      acc += w(p) * (lv * col)(0) * rv(r);
    }
  }
  return acc;
}

Eigen::Matrix2cd MPDO::reduced_density(int site) const {
  const int pos = pos_of(site);
  const Eigen::RowVectorXcd lv = left_env(pos);
  const Eigen::VectorXcd rv = right_env(pos);
  const auto& t = tensors_[static_cast<std::size_t>(pos)];
  Eigen::Matrix2cd rho;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int p = a + 2 * b;
      Complex acc{};
      for (int r = 0; r < t.dr; ++r) {
        const auto col = Eigen::Map<const Eigen::VectorXcd>(
            t.data.data() + static_cast<Eigen::Index>(t.dl) * (p + 4 * r),
            t.dl);
        acc += (lv * col)(0) * rv(r);
      }
      rho(a, b) = acc;
    }
  }
  return rho;
}

Eigen::MatrixXcd MPDO::to_dense() const {
  if (n_sites() > 6) throw ConfigError("to_dense: supported for <= 6 sites");
  // Accumulate the full vectorized operator with the position-0 physical
  // index slowest.
  MatrixC acc = MatrixC::Ones(1, 1);
  for (int pos = 0; pos < n_sites(); ++pos) {
    const auto& t = tensors_[static_cast<std::size_t>(pos)];
    MatrixC next((acc.rows()) * 4, t.dr);
    next.setZero();
    for (Eigen::Index big = 0; big < acc.rows(); ++big) {
      for (int p = 0; p < 4; ++p) {
        for (int r = 0; r < t.dr; ++r) {
          Complex s{};
          for (int l = 0; l < t.dl; ++l) {
            s += acc(big, l) * t.at(l, p, r);
          }
          next(big * 4 + p, r) = s;
        }
      }
    }
    acc = std::move(next);
  }

  const int ns = n_sites();
  const long dim = 1L << ns;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index flat = 0; flat < acc.rows(); ++flat) {
    long row = 0, col = 0;
    Eigen::Index rest = flat;
    // The leading factor of `flat` is position 0.
    for (int pos = 0; pos < ns; ++pos) {
      const int shift = 2 * (ns - 1 - pos);
      const int p = static_cast<int>((rest >> shift) & 3);
      const int a = p & 1;
      const int b = (p >> 1) & 1;
      const int site = site_order_[static_cast<std::size_t>(pos)];
      row |= static_cast<long>(a) << (ns - 1 - site);
      col |= static_cast<long>(b) << (ns - 1 - site);
    }
    rho(row, col) = acc(flat, 0);
  }
  return rho;
}

// --- gate conversion -------------------------------------------------

Matrix16c channel_gate_for_mps(const ChannelStep& step) {
  const Matrix16c e = step.reconstruct();
  auto to_vec2 = [](int m) {
    const int a1 = m & 1;
    const int b1 = (m >> 1) & 1;
    const int a2 = (m >> 2) & 1;
    const int b2 = (m >> 3) & 1;
    return 2 * a1 + a2 + 8 * b1 + 4 * b2;
  };
  Matrix16c g;
  for (int mp = 0; mp < 16; ++mp) {
    for (int m = 0; m < 16; ++m) {
      g(mp, m) = e(to_vec2(mp), to_vec2(m));
    }
  }
  return g;
}

Matrix16c reverse_gate(const Matrix16c& gate) {
  auto swap_m = [](int m) { return (m >> 2) | ((m & 3) << 2); };
  Matrix16c g;
  for (int mp = 0; mp < 16; ++mp) {
    for (int m = 0; m < 16; ++m) {
      g(mp, m) = gate(swap_m(mp), swap_m(m));
    }
  }
  return g;
}

// --- gate set ---------------------------------------------------------

GateSet::GateSet(const DerivedParams& p, double omega, double dt)
    : n_(p.n), dt_(dt) {
  if (!(dt > 0.0)) throw ConfigError("GateSet: dt must be > 0");
  if (p.gamma * dt >= 1.0) {
    throw ConfigError("GateSet: need gamma*dt < 1, got " +
                      std::to_string(p.gamma * dt));
  }

  const int n_bonds = n_ + 1;
  if (n_bonds % 2 == 0) {
    classes_.resize(2);
    for (int j = 0; j <= n_; ++j) classes_[static_cast<std::size_t>(j % 2)].push_back(j);
  } else {
    // Odd bond count: the ring bond gets its own class (experimental path).
    classes_.resize(3);
    for (int j = 0; j < n_; ++j) classes_[static_cast<std::size_t>(j % 2)].push_back(j);
    classes_[2].push_back(n_);
  }
  plan_ = sweep_plan(dt, static_cast<int>(classes_.size()));

  const auto table = bond_params_table(p, omega);
  auto kind_of = [&](int j) { return j == 0 ? 0 : (j == n_ ? 2 : 1); };

  // One factorization per (bond kind, substep length).
  const auto trace_vec = [] {
    Eigen::Matrix<Complex, 1, 16> w = Eigen::Matrix<Complex, 1, 16>::Zero();
    w(0) = w(5) = w(10) = w(15) = 1.0;
    return w;
  }();

  cache_index_.assign(plan_.size(), std::vector<int>(3, -1));
  std::vector<std::pair<double, int>> keys;  // (dt_i, kind) per cache slot
  for (std::size_t pi = 0; pi < plan_.size(); ++pi) {
    const double dti = plan_[pi].dt;
    for (int j : classes_[static_cast<std::size_t>(plan_[pi].klass)]) {
      const int kind = kind_of(j);
      int slot = -1;
      for (std::size_t s = 0; s < keys.size(); ++s) {
        if (keys[s].second == kind && keys[s].first == dti) {
          slot = static_cast<int>(s);
          break;
        }
      }
      if (slot < 0) {
        const int bond_rep = kind == 0 ? 0 : (kind == 2 ? n_ : 1);
        const BondGenerator b = make_bond_generator(
            bond_rep, table[static_cast<std::size_t>(bond_rep)]);
        const Matrix16c lmat = vectorize_lindbladian(b);
        const Matrix16c e = exponentiate(lmat, dti);
        const double tp_defect = (trace_vec * e - trace_vec).cwiseAbs().maxCoeff();
        if (tp_defect > 1e-9) {
          throw NumericError("substep channel is not trace preserving: " +
                             std::to_string(tp_defect));
        }
        Cached c;
        c.step = factorize_channel(e, dti);
        c.gate = channel_gate_for_mps(c.step);
        c.gate_reversed = reverse_gate(c.gate);
        cache_.push_back(std::move(c));
        keys.emplace_back(dti, kind);
        slot = static_cast<int>(cache_.size()) - 1;
      }
      cache_index_[pi][static_cast<std::size_t>(kind)] = slot;
    }
  }
}

const GateSet::Cached& GateSet::lookup(int plan_idx, int bond) const {
  const int kind = bond == 0 ? 0 : (bond == n_ ? 2 : 1);
  const int slot = cache_index_[static_cast<std::size_t>(plan_idx)]
                               [static_cast<std::size_t>(kind)];
  if (slot < 0) throw ConfigError("GateSet: bond not in this sweep");
  return cache_[static_cast<std::size_t>(slot)];
}

const Matrix16c& GateSet::gate(int plan_idx, int bond) const {
  return lookup(plan_idx, bond).gate;
}

const Matrix16c& GateSet::gate_reversed(int plan_idx, int bond) const {
  return lookup(plan_idx, bond).gate_reversed;
}

const ChannelStep& GateSet::channel(int plan_idx, int bond) const {
  return lookup(plan_idx, bond).step;
}

std::vector<const ChannelStep*> GateSet::distinct_channels() const {
  std::vector<const ChannelStep*> out;
  for (const auto& c : cache_) out.push_back(&c.step);
  return out;
}

// --- engine operations -------------------------------------------------

void close_ring(MPDO& state, const Matrix16c& gate_reversed,
                const TruncationPolicy& pol) {
  const int last = state.n_sites() - 1;
  for (int pos = last - 1; pos >= 1; --pos) {
    state.swap_neighbors(pos, pol, /*absorb_right=*/false);
  }
  state.apply_gate(0, gate_reversed, pol, /*absorb_right=*/true);
  for (int pos = 1; pos <= last - 1; ++pos) {
    state.swap_neighbors(pos, pol, /*absorb_right=*/true);
  }
}

void close_ring(MPDO& state, const ChannelStep& step,
                const TruncationPolicy& pol) {
  close_ring(state, reverse_gate(channel_gate_for_mps(step)), pol);
}

void apply_channel_step(MPDO& state, const ChannelStep& step, int bond,
                        const TruncationPolicy& pol) {
  const int ns = state.n_sites();
  if (bond < 0 || bond >= ns) throw ConfigError("apply_channel_step: bad bond");
  const int site_a = bond;
  const int site_b = (bond + 1) % ns;
  const int pa = state.pos_of(site_a);
  const int pb = state.pos_of(site_b);
  if (pb == pa + 1) {
    state.apply_gate(pa, channel_gate_for_mps(step), pol);
  } else if (pa == pb + 1) {
    state.apply_gate(pb, reverse_gate(channel_gate_for_mps(step)), pol);
  } else if (bond == ns - 1 && pa == ns - 1 && pb == 0) {
    close_ring(state, step, pol);
  } else {
    throw ConfigError("apply_channel_step: sites not adjacent");
  }
}

double measure_site0_population(const MPDO& state, bool normalized) {
  const Eigen::Matrix2cd number = sigma_plus() * sigma_minus();
  const double raw = state.expect_site(0, number).real();
  if (!normalized) return raw;
  return raw / state.trace().real();
}

EvolutionLog evolve(MPDO& state, const GateSet& gates,
                    const EvolveOptions& opt) {
  if (state.n_sites() != gates.ring_size()) {
    throw ConfigError("evolve: state size does not match gate set");
  }
  if (opt.sample_every < 1) throw ConfigError("evolve: bad sample_every");
  const int ring_bond = gates.ring_size() - 1;
  const int steps =
      static_cast<int>(std::ceil(opt.t_max / gates.dt() - 1e-9));

  EvolutionLog log;
  auto sample = [&](double t) {
    log.times.push_back(t);
    log.site0_population.push_back(measure_site0_population(state));
    log.trace_value.push_back(state.trace().real());
    log.max_bond_dim.push_back(state.max_bond_dim());
    log.truncation_weight_cum.push_back(state.cumulative_truncation_weight());
  };
  sample(0.0);

  for (int step_i = 0; step_i < steps; ++step_i) {
    for (std::size_t pi = 0; pi < gates.plan().size(); ++pi) {
      const auto& sweep = gates.plan()[pi];
      for (int j : gates.classes()[static_cast<std::size_t>(sweep.klass)]) {
        if (j == ring_bond) {
          close_ring(state, gates.gate_reversed(static_cast<int>(pi), j),
                     opt.trunc);
        } else {
          state.apply_gate(j, gates.gate(static_cast<int>(pi), j), opt.trunc);
        }
      }
    }
    if ((step_i + 1) % opt.sample_every == 0 || step_i + 1 == steps) {
      sample(gates.dt() * (step_i + 1));
    }
  }
  return log;
}

}  // namespace delayline
