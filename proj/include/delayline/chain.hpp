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

namespace delayline {

// User-facing parameters of the delay ring: a system site (index 0)
// weakly damped at rate kappa, fed back to itself through n auxiliary
// oscillators that realize a delay of delta_t.
//
// The feedback amplitude picks up a phase (-i)^(n+1) per round trip, so a
// real positive feedback requires n = 4m+3. All functions here are pure
// and thread-safe.
struct ChainConfig {
  int n = 3;                    // number of auxiliary oscillators
  double kappa = 1.0;           // amplitude decay rate of site 0 (1/time)
  double delta_t = 1.0;         // target delay (time)
  double omega = 0.0;           // drive strength on site 0 (1/time)
  double feedback_ratio = 1.0;  // |eta| / kappa, in [0, 1]

  // Throws ConfigError naming the violated invariant.
  void validate() const;
};

// Engineered ring parameters. gamma is the uniform damping of the
// auxiliary sites; chi_01 / chi_n0 weight the two special bonds into and
// out of site 0; eta is the resulting feedback amplitude.
struct DerivedParams {
  int n = 0;
  double gamma = 0.0;
  double chi_01 = 0.0;
  double chi_n0 = 0.0;
  std::complex<double> eta;
  double kappa = 0.0;

  double gamma_01() const { return gamma / (chi_01 * chi_01); }
  double gamma_n0() const { return gamma; }
  // Recomputes kappa from the bond parameters; equals kappa by construction.
  double kappa_check() const {
    return (chi_n0 * chi_n0 + 1.0 / (chi_01 * chi_01)) * gamma / 2.0;
  }
};

DerivedParams derive_params(const ChainConfig& cfg);

// Response kernel of the auxiliary chain: site n sees the site-0 history
// convolved with K_n(tau) = (-i*gamma)^n tau^(n-1) e^(-gamma*tau)/(n-1)!.
// |K_n| is the Gamma(shape n, rate gamma) density; evaluation is done in
// log space so large n does not overflow. tau must be >= 0.
std::complex<double> memory_kernel(int n, double gamma, double tau);

struct KernelStats {
  double peak_location;  // (n-1)/gamma
  double std_dev;        // sqrt(n)/gamma
};

// Requires n >= 2 so the kernel has an interior peak.
KernelStats kernel_stats(int n, double gamma);

}  // namespace delayline
