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

#include "delayline/dde.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "delayline/errors.hpp"

namespace delayline {

namespace {

using Complex = std::complex<double>;

bool is_integer_multiple(double big, double small) {
  const double q = big / small;
  return std::abs(q - std::round(q)) < 1e-9 * (1.0 + std::abs(q));
}

// Marches a(t) on a uniform grid of step h with delay_steps*h = delta_t.
// Exact variation-of-constants over each step; the delayed source is
// integrated by trapezoid, so the global error is O(h^2) with a clean h^2
// expansion (the delay kinks sit on grid nodes).
std::vector<Complex> march(double kappa, double eta, int delay_steps, double h,
                           int total_steps, Complex a0) {
  std::vector<Complex> a(static_cast<std::size_t>(total_steps) + 1);
  a[0] = a0;
  const double decay = std::exp(-kappa * h);
  const double half_h = 0.5 * h;
  for (int i = 0; i < total_steps; ++i) {
    const Complex lo = (i - delay_steps >= 0) ? a[i - delay_steps] : Complex{};
    const Complex hi =
        (i + 1 - delay_steps >= 0) ? a[i + 1 - delay_steps] : Complex{};
    a[i + 1] = decay * a[i] + eta * half_h * (decay * lo + hi);
  }
  return a;
}

}  // namespace

void DDEConfig::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ConfigError("DDE: kappa must be finite and > 0");
  }
  if (!std::isfinite(eta)) throw ConfigError("DDE: eta must be finite");
  if (!(delta_t > 0.0)) throw ConfigError("DDE: delta_t must be > 0");
  if (!(t_max > 0.0)) throw ConfigError("DDE: t_max must be > 0");
  if (t_max / delta_t > 200.0) {
    throw ConfigError("DDE: t_max/delta_t > 200 rejected (history blowup)");
  }
  if (!(dt > 0.0) || dt > delta_t / 50.0) {
    throw ConfigError("DDE: dt must satisfy 0 < dt <= delta_t/50");
  }
  if (!is_integer_multiple(delta_t, dt)) {
    throw ConfigError(
        "DDE: delta_t must be an integer multiple of dt so delay kinks land "
        "on grid nodes");
  }
  if (internal_per_delay < 100) {
    throw ConfigError("DDE: internal_per_delay must be >= 100");
  }
}

DDESolution solve_linear_dde(const DDEConfig& cfg, Complex a0) {
  cfg.validate();

  const int out_per_delay = static_cast<int>(std::round(cfg.delta_t / cfg.dt));
  // Refine the output grid so the internal step h divides both dt and
  // delta_t and meets the requested resolution.
  const int refine = std::max(
      1, (cfg.internal_per_delay + out_per_delay - 1) / out_per_delay);
  const int delay_steps = out_per_delay * refine;
  const double h = cfg.delta_t / delay_steps;
  const int total_steps =
      static_cast<int>(std::ceil(cfg.t_max / h - 1e-9));

  const auto coarse = march(cfg.kappa, cfg.eta, delay_steps, h, total_steps, a0);
  const auto fine =
      march(cfg.kappa, cfg.eta, 2 * delay_steps, h / 2.0, 2 * total_steps, a0);

  DDESolution out;
  out.amplitude_re.name = "dde_amplitude_re";
  out.amplitude_im.name = "dde_amplitude_im";
  out.population.name = "dde_population";
  const std::string params = "kappa=" + std::to_string(cfg.kappa) +
                             " eta=" + std::to_string(cfg.eta) +
                             " delta_t=" + std::to_string(cfg.delta_t);
  out.population.meta["params"] = params;

  for (int i = 0; i <= total_steps; i += refine) {
    const double t = h * i;
    if (t > cfg.t_max + 1e-12) break;
    const Complex a = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
    out.amplitude_re.push(t, a.real());
    out.amplitude_im.push(t, a.imag());
    out.population.push(t, std::norm(a));
  }

  const double window = std::min(5.0 * cfg.delta_t, cfg.t_max / 2.0);
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < out.population.size(); ++i) {
    if (out.population.times[i] >= cfg.t_max - window) {
      acc += out.population.values[i];
      ++count;
    }
  }
  out.steady_population = (count > 0) ? acc / count : 0.0;
  return out;
}

ChainOracleResult classical_chain_oracle(
    int n, double delta_t, const std::function<double(double)>& x0,
    double t_max, double out_dt) {
  if (n < 2) throw ConfigError("classical_chain_oracle: n must be >= 2");
  if (!(delta_t > 0.0) || !(t_max > delta_t)) {
    throw ConfigError("classical_chain_oracle: need t_max > delta_t > 0");
  }
  if (out_dt <= 0.0) out_dt = delta_t / 200.0;

  const double v = -(n - 1) / delta_t;
  const double w = (n - 1) / delta_t;

  // Internal step: resolve both the cascade rate |v| and the kernel width.
  const int per_delay =
      std::max(2000, 20 * n);

  auto run = [&](int steps_per_delay) {
    const double h = delta_t / steps_per_delay;
    const int total = static_cast<int>(std::ceil(t_max / h - 1e-9));
    const double decay = std::exp(v * h);
    std::vector<double> cur(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> prev = cur;
    cur[0] = x0(0.0);
    std::vector<double> xn(static_cast<std::size_t>(total) + 1, 0.0);
    xn[0] = cur[static_cast<std::size_t>(n)];
    for (int i = 0; i < total; ++i) {
      prev = cur;
      cur[0] = x0(h * (i + 1));
      for (int j = 1; j <= n; ++j) {
        cur[j] = decay * prev[j] +
                 w * 0.5 * h * (decay * prev[j - 1] + cur[j - 1]);
      }
      xn[i + 1] = cur[static_cast<std::size_t>(n)];
    }
    return xn;
  };

  const auto coarse = run(per_delay);
  const auto fine = run(2 * per_delay);

  const double h = delta_t / per_delay;
  const int stride = std::max(1, static_cast<int>(std::round(out_dt / h)));

  ChainOracleResult res;
  res.x_n.name = "chain_x_n";
  res.x0_delayed.name = "chain_x0_delayed";
  double sup = 0.0;
  for (std::size_t i = 0; i < coarse.size(); i += stride) {
    const double t = h * static_cast<double>(i);
    const double xn = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
    res.x_n.push(t, xn);
    if (t >= delta_t) res.x0_delayed.push(t, x0(t - delta_t));
    if (t >= 2.0 * delta_t) {
      sup = std::max(sup, std::abs(xn - x0(t - delta_t)));
    }
  }
  res.sup_error = sup;
  return res;
}

}  // namespace delayline
