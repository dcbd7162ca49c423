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

#include <string>
#include <vector>

#include "delayline/chain.hpp"

namespace delayline {

enum class Experiment {
  Kernel,
  Linear,
  Profile,
  Qubit,
  OracleCompare,
  TrotterOrder,
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);
std::vector<Experiment> all_experiments();
std::string experiment_description(Experiment e);

// One experiment run, parsed from a flat `key = value` file with `#`
// comments. Unknown keys are rejected.
struct RunConfig {
  Experiment experiment = Experiment::Kernel;
  std::vector<int> n_values = {23};  // key `n`, single value or comma list
  double kappa = 1.0;
  double delta_t = 1.0;
  double omega = 0.0;
  double feedback_ratio = 1.0;

  double timestep = 2e-3;  // Trotter step for qubit runs
  double cutoff = 1e-10;   // MPDO truncation
  int max_bond = 512;
  double t_max = 0.0;  // 0 -> experiment default
  int samples = 400;   // sample points per delay interval
  double rk_dt = 0.0;  // dense-oracle step; 0 -> 1/(20*gamma)
  std::string oracle = "dense";  // oracle-compare mode: dense | linear
  std::string prefix;            // output path prefix (required by `run`)

  ChainConfig chain(int n) const;
  void validate() const;  // throws ConfigError naming the broken invariant
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace delayline
