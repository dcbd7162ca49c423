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

#include "delayline/chain.hpp"

#include <cmath>
#include <string>

#include "delayline/errors.hpp"

namespace delayline {

void ChainConfig::validate() const {
  if (n < 2) {
    throw ConfigError("n must be >= 2 auxiliary oscillators; got n=" +
                      std::to_string(n));
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ConfigError("kappa must be finite and > 0");
  }
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
    throw ConfigError("delta_t must be finite and > 0");
  }
  if (!(kappa * delta_t > 0.0) || !std::isfinite(kappa * delta_t)) {
    throw ConfigError("kappa*delta_t must be finite and > 0");
  }
  if (omega < 0.0 || !std::isfinite(omega)) {
    throw ConfigError("omega must be finite and >= 0");
  }
  if (!(feedback_ratio >= 0.0) || !std::isfinite(feedback_ratio)) {
    throw ConfigError("feedback_ratio must be finite and >= 0");
  }
  if (feedback_ratio > 1.0) {
    throw ConfigError(
        "feedback_ratio must lie in [0, 1]: real bond weights cannot exceed "
        "|eta| = kappa");
  }
  if (feedback_ratio > 0.0 && n % 4 != 3) {
    throw ConfigError(
        "n must satisfy n = 4m+3 so the round-trip phase (-i)^(n+1) is real "
        "positive; got n=" +
        std::to_string(n));
  }
}

DerivedParams derive_params(const ChainConfig& cfg) {
  cfg.validate();
  DerivedParams p;
  p.n = cfg.n;
  p.kappa = cfg.kappa;
  p.gamma = (cfg.n - 1) / cfg.delta_t;

  // Split the site-0 decay between the in and out bonds:
  //   chi_n0^2 = a*kappa/gamma,  1/chi_01^2 = b*kappa/gamma,  a + b = 2
  // keeps kappa = (chi_n0^2 + 1/chi_01^2)*gamma/2 while
  // |eta| = gamma*chi_n0/chi_01 = sqrt(a*b)*kappa = feedback_ratio*kappa.
  const double r = cfg.feedback_ratio;
  const double root = std::sqrt(std::max(0.0, 1.0 - r * r));
  const double a = 1.0 - root;
  const double b = 1.0 + root;
  p.chi_n0 = std::sqrt(a * cfg.kappa / p.gamma);
  p.chi_01 = std::sqrt(p.gamma / (b * cfg.kappa));
  // (-i)^(n+1) = 1 for the admitted n = 4m+3; eta is real positive.
  p.eta = std::complex<double>(p.gamma * p.chi_n0 / p.chi_01, 0.0);
  return p;
}

std::complex<double> memory_kernel(int n, double gamma, double tau) {
  if (n < 1) throw ConfigError("memory_kernel: n must be >= 1");
  if (!(gamma > 0.0)) throw ConfigError("memory_kernel: gamma must be > 0");
  if (tau < 0.0) throw ConfigError("memory_kernel: tau must be >= 0");

  double modulus;
  if (tau == 0.0) {
    if (n > 1) return {0.0, 0.0};
    modulus = gamma;
  } else {
    const double log_mod = n * std::log(gamma) + (n - 1) * std::log(tau) -
                           gamma * tau - std::lgamma(static_cast<double>(n));
    modulus = std::exp(log_mod);
  }
  switch (n % 4) {  // phase (-i)^n
    case 0:
      return {modulus, 0.0};
    case 1:
      return {0.0, -modulus};
    case 2:
      return {-modulus, 0.0};
    default:
      return {0.0, modulus};
  }
}

KernelStats kernel_stats(int n, double gamma) {
  if (n < 2) throw ConfigError("kernel_stats: n must be >= 2");
  if (!(gamma > 0.0)) throw ConfigError("kernel_stats: gamma must be > 0");
  return {(n - 1) / gamma, std::sqrt(static_cast<double>(n)) / gamma};
}

}  // namespace delayline
