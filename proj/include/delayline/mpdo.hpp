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
#include "delayline/superop.hpp"

namespace delayline {

struct TruncationPolicy {
  double cutoff = 1e-10;  // relative discarded weight per cut
  int max_bond = 512;     // exceeding it is a hard error
};

// Matrix product density operator over qubits: an operator-space MPS with
// physical dimension 4 per site (the vectorized 2x2 local density space).
// Tensors are rank-3 (left bond, phys, right bond), stored column-major
// over (l, p, r). A tracked orthogonality center keeps truncations
// locally optimal; site_order records transport swaps.
class MPDO {
 public:
  struct SiteTensor {
    int dl = 1, dr = 1;
    Eigen::VectorXcd data;  // offset(l,p,r) = l + dl*(p + 4*r)

    std::complex<double>& at(int l, int p, int r) {
      return data(l + static_cast<Eigen::Index>(dl) * (p + 4 * r));
    }
    std::complex<double> at(int l, int p, int r) const {
      return data(l + static_cast<Eigen::Index>(dl) * (p + 4 * r));
    }
  };

  // Product state: `site0` at site 0, vacuum elsewhere. Validates site0
  // (Hermitian, unit trace, eigenvalues >= -1e-12).
  static MPDO product_state(int n_aux, const Eigen::Matrix2cd& site0);

  int n_sites() const { return static_cast<int>(tensors_.size()); }
  int site_at(int pos) const { return site_order_[static_cast<std::size_t>(pos)]; }
  int pos_of(int site) const;
  const SiteTensor& tensor(int pos) const {
    return tensors_[static_cast<std::size_t>(pos)];
  }
  int center() const { return center_; }

  int max_bond_dim() const;
  double cumulative_truncation_weight() const { return trunc_weight_; }
  long swap_count() const { return swap_count_; }

  std::complex<double> trace() const;
  std::complex<double> expect_site(int site, const Eigen::Matrix2cd& op) const;
  Eigen::Matrix2cd reduced_density(int site) const;

  // Moves the orthogonality center with QR/LQ pushes (no truncation).
  void move_center(int pos);

  // Applies a 16x16 operator-space gate to positions (pos, pos+1); the
  // gate's first physical factor is the tensor at pos. Splits back by SVD
  // with truncation; the center ends on the side `absorb_right` selects.
  void apply_gate(int pos, const Matrix16c& gate, const TruncationPolicy& pol,
                  bool absorb_right = true);

  // Exchanges the tensors (sites) at positions (pos, pos+1).
  void swap_neighbors(int pos, const TruncationPolicy& pol,
                      bool absorb_right = true);

  // Contracts the full density matrix (2^n x 2^n); n_sites <= 6 only.
  Eigen::MatrixXcd to_dense() const;

 private:
  MPDO() = default;
  void two_site_update(int pos, const Matrix16c* gate, bool swap_sites,
                       const TruncationPolicy& pol, bool absorb_right);
  Eigen::RowVectorXcd left_env(int pos_end) const;   // positions [0, pos_end)
  Eigen::VectorXcd right_env(int pos_begin) const;  // positions (pos_begin, end]

  std::vector<SiteTensor> tensors_;
  std::vector<int> site_order_;
  int center_ = 0;
  double trunc_weight_ = 0.0;
  long swap_count_ = 0;
};

// Gates of one Trotter time step for the whole ring, cached per distinct
// (bond kind, substep length) and converted to the fused-index convention
// of MPDO::apply_gate.
class GateSet {
 public:
  GateSet(const DerivedParams& p, double omega, double dt);

  const std::vector<SweepStep>& plan() const { return plan_; }
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  int ring_size() const { return n_ + 1; }
  double dt() const { return dt_; }

  const Matrix16c& gate(int plan_idx, int bond) const;
  const Matrix16c& gate_reversed(int plan_idx, int bond) const;
  const ChannelStep& channel(int plan_idx, int bond) const;
  // Every distinct factorized substep (for certification sweeps).
  std::vector<const ChannelStep*> distinct_channels() const;

 private:
  struct Cached {
    ChannelStep step;
    Matrix16c gate;
    Matrix16c gate_reversed;
  };
  const Cached& lookup(int plan_idx, int bond) const;

  int n_ = 0;
  double dt_ = 0.0;
  std::vector<SweepStep> plan_;
  std::vector<std::vector<int>> classes_;
  std::vector<Cached> cache_;
  std::vector<std::vector<int>> cache_index_;  // [plan][bond kind] -> cache slot
};

// Converts a factorized substep into the 16x16 fused-index gate applied
// by MPDO::apply_gate (acting as sum_k L_k rho R_k^dag on the two-site
// vectorized density).
Matrix16c channel_gate_for_mps(const ChannelStep& step);
Matrix16c reverse_gate(const Matrix16c& gate);

// Applies one factorized substep to the named bond, inserting swap
// transport when the bond is the ring-closing one.
void apply_channel_step(MPDO& state, const ChannelStep& step, int bond,
                        const TruncationPolicy& pol);

// Swap-transports site n next to site 0, applies the ring bond channel,
// and restores the site order: 2*(n_sites-2) swaps per call.
void close_ring(MPDO& state, const ChannelStep& step,
                const TruncationPolicy& pol);
void close_ring(MPDO& state, const Matrix16c& gate_reversed,
                const TruncationPolicy& pol);

double measure_site0_population(const MPDO& state, bool normalized = false);

struct EvolutionLog {
  std::vector<double> times;
  std::vector<double> site0_population;  // unnormalized, Tr(sp*sm*rho)
  std::vector<double> trace_value;
  std::vector<int> max_bond_dim;
  std::vector<double> truncation_weight_cum;
};

struct EvolveOptions {
  double t_max = 10.0;
  int sample_every = 1;  // in time steps
  TruncationPolicy trunc;
};

// Runs the full sweep plan repeatedly until t_max, sampling the log.
// Requires gamma*dt < 1 (checked at GateSet construction).
EvolutionLog evolve(MPDO& state, const GateSet& gates,
                    const EvolveOptions& opt);

}  // namespace delayline
