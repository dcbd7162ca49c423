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

#include "delayline/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "delayline/analysis.hpp"
#include "delayline/chain.hpp"
#include "delayline/dde.hpp"
#include "delayline/dense_oracle.hpp"
#include "delayline/errors.hpp"
#include "delayline/linear_engine.hpp"
#include "delayline/mpdo.hpp"
#include "delayline/quadrature.hpp"
#include "delayline/superop.hpp"
#include "delayline/version.hpp"

namespace delayline {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

TimeSeries decimate(const TimeSeries& s, std::size_t max_points) {
  if (s.size() <= max_points) return s;
  TimeSeries out;
  out.name = s.name;
  out.meta = s.meta;
  const std::size_t stride = (s.size() + max_points - 1) / max_points;
  for (std::size_t i = 0; i < s.size(); i += stride) {
    out.push(s.times[i], s.values[i]);
  }
  if ((s.size() - 1) % stride != 0) {
    out.push(s.times.back(), s.values.back());
  }
  return out;
}

}  // namespace

void ExperimentOutput::check(bool ok, const std::string& what) {
  report.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
  if (!ok) all_pass = false;
}

// --- kernel -------------------------------------------------------------

namespace {

void run_kernel(const RunConfig& cfg, ExperimentOutput& out) {
  for (int n : cfg.n_values) {
    const double gamma = (n - 1) / cfg.delta_t;
    auto absk = [&](double tau) { return std::abs(memory_kernel(n, gamma, tau)); };

    const double hi = 40.0 * n / gamma;
    const double norm = simpson(absk, 0.0, hi, 200000);
    out.check(std::abs(norm - 1.0) <= 1e-9,
              "kernel n=" + std::to_string(n) +
                  " quadrature norm = " + fmt6(norm) + " within 1e-9 of 1");

    // Peak scan over a window around the mode.
    const double scan_hi = 4.0 * (n - 1) / gamma + 1.0 / gamma;
    const int cells = 200000;
    double best_tau = 0.0, best_val = -1.0;
    for (int i = 0; i <= cells; ++i) {
      const double tau = scan_hi * i / cells;
      const double v = absk(tau);
      if (v > best_val) {
        best_val = v;
        best_tau = tau;
      }
    }
    const double cell = scan_hi / cells;
    const KernelStats stats = kernel_stats(n, gamma);
    out.check(std::abs(best_tau - stats.peak_location) <= cell,
              "kernel n=" + std::to_string(n) + " argmax " + fmt6(best_tau) +
                  " within one grid cell of " + fmt6(stats.peak_location));

    const double mean =
        simpson([&](double tau) { return tau * absk(tau); }, 0.0, hi, 200000);
    const double var = simpson(
        [&](double tau) { return (tau - mean) * (tau - mean) * absk(tau); },
        0.0, hi, 200000);
    const double std_num = std::sqrt(var);
    out.check(std::abs(std_num - stats.std_dev) <= 1e-6,
              "kernel n=" + std::to_string(n) + " std " + fmt6(std_num) +
                  " = sqrt(n)/gamma within 1e-6");

    TimeSeries shape;
    shape.name = "kernel_abs_n" + std::to_string(n);
    const double plot_hi = stats.peak_location + 6.0 * stats.std_dev;
    for (int i = 0; i <= 2000; ++i) {
      const double tau = plot_hi * i / 2000.0;
      shape.push(tau == 0.0 ? 0.0 : tau, absk(tau));
    }
    out.series.push_back(decimate(shape, 2001));
  }
}

// --- linear --------------------------------------------------------------

void run_linear(const RunConfig& cfg, ExperimentOutput& out) {
  const double t_cmp = cfg.t_max > 0.0 ? cfg.t_max : 8.0;
  const double t_steady = 40.0;

  DDEConfig dcfg;
  dcfg.kappa = cfg.kappa;
  dcfg.eta = cfg.feedback_ratio * cfg.kappa;
  dcfg.delta_t = cfg.delta_t;
  dcfg.t_max = t_steady;
  dcfg.dt = cfg.delta_t / std::max(cfg.samples, 50);
  const DDESolution dde = solve_linear_dde(dcfg);

  TimeSeries dde_series;
  dde_series.name = "dde_population";
  for (std::size_t i = 0; i < dde.population.size(); ++i) {
    if (dde.population.times[i] > t_cmp + 1e-9) break;
    dde_series.push(dde.population.times[i], dde.population.values[i]);
  }
  out.series.push_back(decimate(dde_series, 4001));

  double prev_sup = -1.0;
  bool monotone = true;
  double last_sup = 0.0;
  for (int n : cfg.n_values) {
    const DerivedParams p = derive_params(cfg.chain(n));
    const CovariancePropagator prop(build_drift(p));
    const CovarianceState c0 = single_photon_at_site0(n);

    const auto times = uniform_times(t_cmp, cfg.delta_t, cfg.samples);
    const PopulationGrid grid = prop.populations(c0, times);
    TimeSeries pop0 = grid.site(0, "pop_site0_n" + std::to_string(n));
    const double sup = pop0.sup_distance(dde.population, 0.0, t_cmp);
    out.series.push_back(decimate(pop0, 4001));

    // Steady-state window average around t = 40.
    std::vector<double> late;
    for (int i = 0; i <= 50; ++i) {
      late.push_back(t_steady - 5.0 * cfg.delta_t +
                     i * (5.0 * cfg.delta_t) / 50.0);
    }
    const PopulationGrid late_grid = prop.populations(c0, late);
    double steady = 0.0;
    for (std::size_t i = 0; i < late.size(); ++i) {
      steady += late_grid.pops(static_cast<Eigen::Index>(i), 0);
    }
    steady /= static_cast<double>(late.size());

    out.check(std::abs(steady - 0.25) <= 0.02,
              "linear n=" + std::to_string(n) + " steady population " +
                  fmt6(steady) + " = 0.25 +- 0.02");
    if (prev_sup >= 0.0 && sup > prev_sup) monotone = false;
    prev_sup = sup;
    last_sup = sup;
    out.manifest["sup_dev_n" + std::to_string(n)] = fmt(sup);
    out.report.push_back("INFO linear n=" + std::to_string(n) +
                         " sup deviation from oracle = " + fmt6(sup));
  }
  if (cfg.n_values.size() > 1) {
    out.check(monotone, "linear sup deviation decreases monotonically in n");
  }
  out.check(last_sup <= 0.02, "linear largest-n sup deviation " +
                                  fmt6(last_sup) + " <= 0.02");
  out.check(std::abs(dde.steady_population - 0.25) <= 0.02,
            "oracle steady population " + fmt6(dde.steady_population) +
                " = 0.25 +- 0.02");
}

// --- profile -------------------------------------------------------------

void run_profile(const RunConfig& cfg, ExperimentOutput& out) {
  const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 8.0 * cfg.delta_t;
  std::vector<double> widths, ns;

  for (int n : cfg.n_values) {
    const DerivedParams p = derive_params(cfg.chain(n));
    const CovariancePropagator prop(build_drift(p));
    const CovarianceState c0 = single_photon_at_site0(n);
    const auto times = uniform_times(t_max, cfg.delta_t, cfg.samples);
    const PopulationGrid grid = prop.populations(c0, times);

    TimeSeries f = memory_profile(grid, cfg.delta_t, p.gamma, p.kappa);
    f.name = "memory_profile_n" + std::to_string(n);
    const double plateau = mean_over(f, 3.0 * cfg.delta_t, 5.0 * cfg.delta_t);
    const double width = rise_width(f, plateau);
    widths.push_back(width);
    ns.push_back(static_cast<double>(n));
    out.series.push_back(decimate(f, 4001));
    out.manifest["rise_width_n" + std::to_string(n)] = fmt(width);

    out.check(std::abs(plateau - 1.0) <= 0.05,
              "profile n=" + std::to_string(n) + " plateau " + fmt6(plateau) +
                  " = 1 +- 0.05");

    if (n >= 60) {
      // Excitation front diagnostics for one representative size.
      const FrontSummary front = auxiliary_population_map(grid);
      bool mono = true;
      for (std::size_t j = 1; j < front.peak_times.size(); ++j) {
        if (front.peak_times[j] < front.peak_times[j - 1] - 1e-9) mono = false;
      }
      out.check(mono, "front n=" + std::to_string(n) +
                          " peak times monotone in site");
      const double last_peak = front.peak_times.back();
      out.check(std::abs(last_peak - cfg.delta_t) <= 0.1 * cfg.delta_t,
                "front n=" + std::to_string(n) + " site-n peak " +
                    fmt6(last_peak) + " = delta_t +- 0.1");
      TimeSeries peaks;
      peaks.name = "front_peak_times_n" + std::to_string(n);
      for (std::size_t j = 0; j < front.sites.size(); ++j) {
        peaks.push(static_cast<double>(front.sites[j]), front.peak_times[j]);
      }
      out.series.push_back(peaks);
      for (int site : {1, n / 4, n / 2, 3 * n / 4, n}) {
        out.series.push_back(decimate(
            grid.site(site, "pop_site" + std::to_string(site) + "_n" +
                                std::to_string(n)),
            2001));
      }
    }
  }

  if (widths.size() >= 2) {
    const LineFit fit = fit_loglog(ns, widths);
    out.manifest["width_exponent"] = fmt(fit.slope);
    out.check(std::abs(fit.slope + 0.5) <= 0.1,
              "profile rise width ~ n^p with p = " + fmt6(fit.slope) +
                  " = -0.5 +- 0.1");
  }
}

// --- qubit ---------------------------------------------------------------

void run_qubit(const RunConfig& cfg, ExperimentOutput& out) {
  const int n = cfg.n_values.front();
  const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 10.0;
  const DerivedParams p = derive_params(cfg.chain(n));

  const GateSet gates(p, cfg.omega, cfg.timestep);
  MPDO state = MPDO::product_state(
      n, sigma_plus() * sigma_minus());  // site 0 excited

  EvolveOptions opt;
  opt.t_max = t_max;
  const double steps_per_delay = cfg.delta_t / cfg.timestep;
  opt.sample_every =
      std::max(1, static_cast<int>(std::floor(steps_per_delay / cfg.samples)));
  opt.trunc.cutoff = cfg.cutoff;
  opt.trunc.max_bond = cfg.max_bond;

  const EvolutionLog log = evolve(state, gates, opt);

  TimeSeries pop, pop_norm, trace_err, bond, trunc;
  pop.name = "qubit_population";
  pop_norm.name = "qubit_population_normalized";
  trace_err.name = "trace_error";
  bond.name = "max_bond_dim";
  trunc.name = "truncation_weight_cum";
  for (std::size_t i = 0; i < log.times.size(); ++i) {
    pop.push(log.times[i], log.site0_population[i]);
    pop_norm.push(log.times[i], log.site0_population[i] / log.trace_value[i]);
    trace_err.push(log.times[i], 1.0 - log.trace_value[i]);
    bond.push(log.times[i], static_cast<double>(log.max_bond_dim[i]));
    trunc.push(log.times[i], log.truncation_weight_cum[i]);
  }
  for (const auto& s : {pop, pop_norm, trace_err, bond, trunc}) {
    out.series.push_back(decimate(s, 5001));
  }

  if (cfg.omega > 0.0 && t_max >= 5.0) {
    const auto peaks = oscillation_peak_times(pop, 1.0, 5.0);
    if (peaks.size() >= 2) {
      const double period =
          (peaks.back() - peaks.front()) / (static_cast<double>(peaks.size()) - 1.0);
      out.manifest["oscillation_period"] = fmt(period);
      out.check(std::abs(period - 1.0) <= 0.1,
                "qubit oscillation period " + fmt6(period) + " = 1.0 +- 0.1");
    } else {
      out.check(false, "qubit oscillations detected in t in [1,5]");
    }
  }
  if (t_max >= 10.0) {
    const double bond5 = bond.value_at(5.0), bond10 = bond.value_at(10.0);
    out.manifest["bond_t5"] = fmt(bond5);
    out.manifest["bond_t10"] = fmt(bond10);
    out.check(bond10 <= 2.0 * bond5,
              "bond dimension saturates: D(10) = " + fmt6(bond10) +
                  " <= 2*D(5) = " + fmt6(2.0 * bond5));
  }
}

// --- oracle compare --------------------------------------------------------

void run_oracle_compare(const RunConfig& cfg, ExperimentOutput& out) {
  const int n = cfg.n_values.front();

  if (cfg.oracle == "dense") {
    const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 3.0;
    const DerivedParams p = derive_params(cfg.chain(n));
    const double rk_dt = cfg.rk_dt > 0.0 ? cfg.rk_dt : 1.0 / (20.0 * p.gamma);
    const DenseRun oracle = dense_evolve(cfg.chain(n), t_max, rk_dt, 5);

    const GateSet gates(p, cfg.omega, cfg.timestep);
    MPDO state = MPDO::product_state(n, sigma_plus() * sigma_minus());
    EvolveOptions opt;
    opt.t_max = t_max;
    opt.sample_every = 1;
    opt.trunc.cutoff = cfg.cutoff;
    opt.trunc.max_bond = cfg.max_bond;
    const EvolutionLog log = evolve(state, gates, opt);

    TimeSeries pop;
    pop.name = "qubit_population";
    for (std::size_t i = 0; i < log.times.size(); ++i) {
      pop.push(log.times[i], log.site0_population[i]);
    }
    const double sup = pop.sup_distance(oracle.site0_population, 0.0, t_max);
    out.series.push_back(decimate(pop, 3001));
    out.series.push_back(decimate(oracle.site0_population, 3001));
    out.manifest["sup_deviation"] = fmt(sup);
    out.check(sup <= 1e-6, "engine vs dense oracle sup deviation " +
                               fmt6(sup) + " <= 1e-6");
  } else {
    const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 8.0;
    RunConfig sub = cfg;
    sub.omega = 0.0;
    const DerivedParams p = derive_params(sub.chain(n));

    const CovariancePropagator prop(build_drift(p));
    const auto times = uniform_times(t_max, cfg.delta_t, cfg.samples);
    const PopulationGrid grid =
        prop.populations(single_photon_at_site0(n), times);
    TimeSeries lin = grid.site(0, "linear_population");

    const GateSet gates(p, 0.0, cfg.timestep);
    MPDO state = MPDO::product_state(n, sigma_plus() * sigma_minus());
    EvolveOptions opt;
    opt.t_max = t_max;
    opt.sample_every = 1;
    opt.trunc.cutoff = cfg.cutoff;
    opt.trunc.max_bond = cfg.max_bond;
    const EvolutionLog log = evolve(state, gates, opt);

    TimeSeries pop;
    pop.name = "qubit_population";
    for (std::size_t i = 0; i < log.times.size(); ++i) {
      pop.push(log.times[i], log.site0_population[i]);
    }
    const double sup = pop.sup_distance(lin, 0.0, t_max);
    out.series.push_back(decimate(pop, 3001));
    out.series.push_back(decimate(lin, 3001));
    out.manifest["sup_deviation"] = fmt(sup);
    out.check(sup <= 0.01, "engine vs linear engine sup deviation " +
                               fmt6(sup) + " <= 0.01");
  }
}

// --- trotter order ----------------------------------------------------------

Eigen::MatrixXcd lifted_bond_generator(int n, int bond,
                                       const std::vector<BondParams>& table) {
  std::vector<BondParams> only(table.size());
  only[static_cast<std::size_t>(bond)] = table[static_cast<std::size_t>(bond)];
  return DenseModel::from_bonds(n, only).vectorized_generator();
}

void run_trotter_order(const RunConfig& cfg, ExperimentOutput& out) {
  // Three sites on a ring: three bonds, pairwise overlapping, so each
  // forms its own sweep class.
  const int n = 2;
  std::vector<BondParams> table = {
      {6.0, 1.0, 1.5, 0.0},  // bond (0,1), half drive on site 0
      {5.0, 0.8, 0.0, 0.0},  // bond (1,2)
      {7.0, 1.2, 0.0, 1.5},  // bond (2,0), other half drive on site 0
  };

  std::vector<Eigen::MatrixXcd> gens;
  Eigen::MatrixXcd total;
  for (int b = 0; b <= n; ++b) {
    gens.push_back(lifted_bond_generator(n, b, table));
    if (b == 0) {
      total = gens.back();
    } else {
      total += gens.back();
    }
  }

  const std::vector<double> dts = {4e-3, 2e-3, 1e-3, 5e-4};
  std::vector<double> errs;
  TimeSeries err_series;
  err_series.name = "trotter_one_step_error";
  for (double dt : dts) {
    const Eigen::MatrixXcd exact = (total * dt).exp();
    Eigen::MatrixXcd composite =
        Eigen::MatrixXcd::Identity(exact.rows(), exact.cols());
    for (const SweepStep& step : sweep_plan(dt, 3)) {
      composite =
          ((gens[static_cast<std::size_t>(step.klass)] * step.dt).exp() *
           composite)
              .eval();
    }
    const double err = (composite - exact).norm();
    errs.push_back(err);
    err_series.push(dt, err);
  }
  out.series.push_back(err_series);

  const LineFit fit = fit_loglog(dts, errs);
  out.manifest["local_order"] = fmt(fit.slope);
  out.check(std::abs(fit.slope - 5.0) <= 0.3,
            "one-step composition error order " + fmt6(fit.slope) +
                " = 5 +- 0.3");
}

}  // namespace

// --- driver -----------------------------------------------------------------

ExperimentOutput run_experiment(const RunConfig& cfg) {
  cfg.validate();
  ExperimentOutput out;
  const auto t0 = std::chrono::steady_clock::now();

  switch (cfg.experiment) {
    case Experiment::Kernel:
      run_kernel(cfg, out);
      break;
    case Experiment::Linear:
      run_linear(cfg, out);
      break;
    case Experiment::Profile:
      run_profile(cfg, out);
      break;
    case Experiment::Qubit:
      run_qubit(cfg, out);
      break;
    case Experiment::OracleCompare:
      run_oracle_compare(cfg, out);
      break;
    case Experiment::TrotterOrder:
      run_trotter_order(cfg, out);
      break;
  }

  const auto t1 = std::chrono::steady_clock::now();
  const double wall =
      std::chrono::duration_cast<std::chrono::duration<double>>(t1 - t0).count();

  out.manifest["experiment"] = to_string(cfg.experiment);
  {
    std::string ns;
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
      if (i) ns += ",";
      ns += std::to_string(cfg.n_values[i]);
    }
    out.manifest["n"] = ns;
  }
  out.manifest["kappa"] = fmt(cfg.kappa);
  out.manifest["delta_t"] = fmt(cfg.delta_t);
  out.manifest["omega"] = fmt(cfg.omega);
  out.manifest["feedback_ratio"] = fmt(cfg.feedback_ratio);
  out.manifest["timestep"] = fmt(cfg.timestep);
  out.manifest["cutoff"] = fmt(cfg.cutoff);
  out.manifest["max_bond"] = std::to_string(cfg.max_bond);
  out.manifest["t_max"] = fmt(cfg.t_max);
  out.manifest["samples"] = std::to_string(cfg.samples);
  out.manifest["rk_dt"] = fmt(cfg.rk_dt);
  out.manifest["oracle"] = cfg.oracle;
  for (int nv : cfg.n_values) {
    const DerivedParams p = derive_params(cfg.chain(nv));
    const std::string tag = "_n" + std::to_string(nv);
    out.manifest["gamma" + tag] = fmt(p.gamma);
    out.manifest["chi_01" + tag] = fmt(p.chi_01);
    out.manifest["chi_n0" + tag] = fmt(p.chi_n0);
    out.manifest["eta" + tag] = fmt(p.eta.real());
  }
  out.manifest["git_describe"] = kGitDescribe;
  out.manifest["wall_seconds"] = fmt(wall);
  return out;
}

void write_series_csv(const std::string& path,
                      const std::vector<TimeSeries>& series) {
  std::ofstream outf(path);
  if (!outf) throw NumericError("cannot write " + path);
  outf << "time,name,value\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      outf << fmt(s.times[i]) << ',' << s.name << ',' << fmt(s.values[i])
           << '\n';
    }
  }
}

void write_manifest(const std::string& path,
                    const std::map<std::string, std::string>& entries) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : entries) j[k] = v;
  std::ofstream outf(path);
  if (!outf) throw NumericError("cannot write " + path);
  outf << j.dump(2) << '\n';
}

void write_report(const std::string& path,
                  const std::vector<std::string>& lines) {
  std::ofstream outf(path);
  if (!outf) throw NumericError("cannot write " + path);
  for (const auto& l : lines) outf << l << '\n';
}

int run_and_write(const RunConfig& cfg) {
  if (cfg.prefix.empty()) throw ConfigError("missing required key 'prefix'");
  const ExperimentOutput out = run_experiment(cfg);
  write_series_csv(cfg.prefix + "_series.csv", out.series);
  write_manifest(cfg.prefix + "_meta.json", out.manifest);
  if (!out.report.empty()) {
    write_report(cfg.prefix + "_report.txt", out.report);
  }
  return out.all_pass ? 0 : 3;
}

}  // namespace delayline
