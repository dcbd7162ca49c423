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

#include <complex>
#include <functional>

#include "delayline/time_series.hpp"

namespace delayline {

// Ground-truth solver for the scalar delayed equation
//   da/dt = -kappa*a(t) + eta*Theta(t - delta_t)*a(t - delta_t),
// solved interval by interval (method of steps) with the history integral
// accumulated by trapezoid quadrature on an internal grid plus one
// Richardson level, so the output error is O(h^4) in the internal step.
struct DDEConfig {
  double kappa = 1.0;
  double eta = 1.0;
  double delta_t = 1.0;
  double t_max = 8.0;
  double dt = 0.01;  // output grid; must divide delta_t, dt <= delta_t/50
  // Internal resolution: points per delay interval (before Richardson).
  int internal_per_delay = 2000;

  void validate() const;
};

struct DDESolution {
  TimeSeries amplitude_re;
  TimeSeries amplitude_im;
  TimeSeries population;     // |a(t)|^2
  double steady_population;  // mean of |a|^2 over the final 5*delta_t
};

DDESolution solve_linear_dde(const DDEConfig& cfg,
                             std::complex<double> a0 = {1.0, 0.0});

// Deterministic cascade check: integrates
//   dx_j/dt = v x_j + w x_{j-1},  v = -(n-1)/delta_t, w = (n-1)/delta_t
// for j = 1..n driven by a prescribed x0(t) (x_j(0) = 0), and compares
// x_n(t) against the delayed input x0(t - delta_t).
struct ChainOracleResult {
  TimeSeries x_n;          // response at the end of the cascade
  TimeSeries x0_delayed;   // x0(t - delta_t), emitted for t >= delta_t
  double sup_error = 0.0;  // sup |x_n - x0_delayed| over [2*delta_t, t_max]
};

ChainOracleResult classical_chain_oracle(
    int n, double delta_t, const std::function<double(double)>& x0,
    double t_max, double out_dt = 0.0 /* default delta_t/200 */);

}  // namespace delayline
