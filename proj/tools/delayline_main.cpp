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

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "delayline/errors.hpp"
#include "delayline/experiments.hpp"
#include "delayline/run_config.hpp"
#include "delayline/version.hpp"

namespace {

int do_validate(const std::string& path) {
  const delayline::RunConfig cfg = delayline::parse_config_file(path);
  std::cout << "config ok: experiment=" << delayline::to_string(cfg.experiment);
  std::cout << " n=";
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    if (i) std::cout << ',';
    std::cout << cfg.n_values[i];
  }
  std::cout << " kappa=" << cfg.kappa << " delta_t=" << cfg.delta_t
            << " omega=" << cfg.omega << '\n';
  for (int n : cfg.n_values) {
    const auto p = delayline::derive_params(cfg.chain(n));
    std::cout << "  n=" << n << ": gamma=" << p.gamma
              << " chi_01=" << p.chi_01 << " chi_n0=" << p.chi_n0
              << " eta=" << p.eta.real() << '\n';
  }
  return 0;
}

int do_run(const std::string& path) {
  const delayline::RunConfig cfg = delayline::parse_config_file(path);
  const int code = delayline::run_and_write(cfg);
  std::cout << "wrote " << cfg.prefix << "_series.csv, " << cfg.prefix
            << "_meta.json\n";
  if (code != 0) {
    std::cout << "thresholds failed, see " << cfg.prefix << "_report.txt\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delay-ring simulator"};
  app.set_version_flag("--version", std::string(delayline::kGitDescribe));
  app.require_subcommand(1);

  std::string run_path, validate_path;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", run_path, "flat key = value config file")
      ->required();
  auto* validate =
      app.add_subcommand("validate", "parse and validate a config file");
  validate->add_option("config", validate_path, "config file")->required();
  auto* list =
      app.add_subcommand("list-experiments", "print available experiments");

  try {
    app.parse(argc, argv);
    if (list->parsed()) {
      for (auto e : delayline::all_experiments()) {
        std::cout << delayline::to_string(e) << "  -  "
                  << delayline::experiment_description(e) << '\n';
      }
      return 0;
    }
    if (validate->parsed()) return do_validate(validate_path);
    return do_run(run_path);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const delayline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const delayline::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
