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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "delayline/chain.hpp"
#include "delayline/errors.hpp"
#include "delayline/quadrature.hpp"

using namespace delayline;

TEST_CASE("engineered parameters, default feedback") {
  const DerivedParams p = derive_params({.n = 83, .kappa = 1.0, .delta_t = 1.0});
  CHECK(p.gamma == doctest::Approx(82.0).epsilon(1e-15));
  CHECK(p.chi_01 == doctest::Approx(std::sqrt(82.0)).epsilon(1e-14));
  CHECK(p.chi_n0 == doctest::Approx(1.0 / std::sqrt(82.0)).epsilon(1e-14));
  CHECK(p.eta.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.eta.imag() == 0.0);
  CHECK(std::abs(p.kappa_check() - 1.0) < 1e-12);
}

TEST_CASE("smallest admissible ring") {
  const DerivedParams p = derive_params({.n = 3, .kappa = 1.0, .delta_t = 1.0});
  CHECK(p.gamma == doctest::Approx(2.0));
  CHECK(p.eta.real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("kappa round trip across parameter grid") {
  for (int n : {3, 7, 23, 83}) {
    for (double kappa : {0.5, 1.0, 2.5}) {
      for (double dt : {0.5, 1.0, 2.0}) {
        for (double r : {0.0, 0.3, 0.7, 1.0}) {
          ChainConfig cfg{.n = n, .kappa = kappa, .delta_t = dt,
                          .feedback_ratio = r};
          const DerivedParams p = derive_params(cfg);
          CHECK(std::abs(p.kappa_check() - kappa) < 1e-12 * kappa);
          CHECK(std::abs(p.eta.real() - r * kappa) < 1e-12 * (1.0 + kappa));
        }
      }
    }
  }
}

TEST_CASE("parameter rejection") {
  CHECK_THROWS_AS(derive_params({.n = 84}), ConfigError);  // phase not real
  CHECK_THROWS_AS(derive_params({.n = 23, .delta_t = -1.0}), ConfigError);
  CHECK_THROWS_AS(derive_params({.n = 23, .delta_t = 0.0}), ConfigError);
  CHECK_THROWS_AS(derive_params({.n = 23, .kappa = 0.0}), ConfigError);
  CHECK_THROWS_AS(derive_params({.n = 23, .feedback_ratio = 1.5}), ConfigError);
  CHECK_THROWS_AS(derive_params({.n = 1}), ConfigError);
  // Without feedback the phase constraint is moot.
  CHECK_NOTHROW(derive_params({.n = 84, .feedback_ratio = 0.0}));
}

TEST_CASE("kernel closed forms") {
  // n = 1: value is -i*gamma at tau = 0.
  const auto k0 = memory_kernel(1, 2.0, 0.0);
  CHECK(k0.real() == 0.0);
  CHECK(k0.imag() == doctest::Approx(-2.0));

  CHECK(memory_kernel(5, 3.0, 0.0) == std::complex<double>(0.0, 0.0));
  CHECK_THROWS_AS(memory_kernel(5, 3.0, -0.1), ConfigError);

  // Phase cycles with n; modulus matches the density formula.
  const double tau = 0.7, gamma = 2.0;
  for (int n = 1; n <= 8; ++n) {
    const auto k = memory_kernel(n, gamma, tau);
    const double ref = std::exp(n * std::log(gamma) +
                                (n - 1) * std::log(tau) - gamma * tau -
                                std::lgamma(n));
    CHECK(std::abs(k) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("kernel quadrature normalization and moments") {
  for (int n : {3, 23, 83}) {
    const double gamma = (n - 1) / 1.0;
    auto absk = [&](double t) { return std::abs(memory_kernel(n, gamma, t)); };
    const double hi = 40.0 * n / gamma;
    const double norm = simpson(absk, 0.0, hi, 200000);
    CHECK(std::abs(norm - 1.0) < 1e-9);

    const double mean =
        simpson([&](double t) { return t * absk(t); }, 0.0, hi, 200000);
    const double var = simpson(
        [&](double t) { return (t - mean) * (t - mean) * absk(t); }, 0.0, hi,
        200000);
    const KernelStats st = kernel_stats(n, gamma);
    CHECK(std::abs(std::sqrt(var) - st.std_dev) < 1e-7);
  }
}

TEST_CASE("kernel peak location") {
  for (int n : {23, 83}) {
    const double gamma = (n - 1) / 1.0;
    auto absk = [&](double t) { return std::abs(memory_kernel(n, gamma, t)); };
    const int cells = 100000;
    const double hi = 3.0;
    double best = 0.0, best_v = -1.0;
    for (int i = 0; i <= cells; ++i) {
      const double t = hi * i / cells;
      if (absk(t) > best_v) {
        best_v = absk(t);
        best = t;
      }
    }
    CHECK(std::abs(best - kernel_stats(n, gamma).peak_location) <= hi / cells);
  }
}

TEST_CASE("large-n evaluation stays finite (Stirling check)") {
  const int n = 403;
  const double gamma = (n - 1) / 1.0;
  const double peak = kernel_stats(n, gamma).peak_location;
  const double v = std::abs(memory_kernel(n, gamma, peak));
  CHECK(std::isfinite(v));
  CHECK(v * std::sqrt(2.0 * M_PI * n) / gamma == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("kernel stats identities") {
  CHECK(kernel_stats(83, 82.0).peak_location == doctest::Approx(1.0));
  CHECK(kernel_stats(83, 82.0).std_dev ==
        doctest::Approx(std::sqrt(83.0) / 82.0).epsilon(1e-14));
  CHECK(kernel_stats(2, 1.0).peak_location == doctest::Approx(1.0));
  CHECK(kernel_stats(2, 1.0).std_dev == doctest::Approx(std::sqrt(2.0)));
  for (int n : {2, 5, 17, 203}) {
    const auto st = kernel_stats(n, 3.7);
    CHECK(st.std_dev * 3.7 / std::sqrt(static_cast<double>(n)) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(kernel_stats(1, 1.0), ConfigError);
}
