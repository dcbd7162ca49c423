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

#include "delayline/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "delayline/errors.hpp"

namespace delayline {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Kernel:
      return "kernel";
    case Experiment::Linear:
      return "linear";
    case Experiment::Profile:
      return "profile";
    case Experiment::Qubit:
      return "qubit";
    case Experiment::OracleCompare:
      return "oracle-compare";
    case Experiment::TrotterOrder:
      return "trotter-order";
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& s) {
  for (Experiment e : all_experiments()) {
    if (to_string(e) == s) return e;
  }
  throw ConfigError("unknown experiment '" + s +
                    "' (see `delayline list-experiments`)");
}

std::vector<Experiment> all_experiments() {
  return {Experiment::Kernel,        Experiment::Linear,
          Experiment::Profile,      Experiment::Qubit,
          Experiment::OracleCompare, Experiment::TrotterOrder};
}

std::string experiment_description(Experiment e) {
  switch (e) {
    case Experiment::Kernel:
      return "response-kernel normalization, peak and width checks";
    case Experiment::Linear:
      return "single-photon decay vs the delayed-equation oracle";
    case Experiment::Profile:
      return "memory profile step sharpening and excitation front";
    case Experiment::Qubit:
      return "driven qubit on the ring via the tensor-network engine";
    case Experiment::OracleCompare:
      return "tensor-network engine vs dense master-equation oracle";
    case Experiment::TrotterOrder:
      return "local order of the split-step composition on a 3-site ring";
  }
  return "";
}

ChainConfig RunConfig::chain(int n) const {
  ChainConfig c;
  c.n = n;
  c.kappa = kappa;
  c.delta_t = delta_t;
  c.omega = omega;
  c.feedback_ratio = feedback_ratio;
  return c;
}

void RunConfig::validate() const {
  if (n_values.empty()) throw ConfigError("n: need at least one value");
  for (int n : n_values) chain(n).validate();
  if (!(timestep > 0.0)) throw ConfigError("timestep must be > 0");
  if (!(cutoff > 0.0) || cutoff >= 1.0) {
    throw ConfigError("cutoff must lie in (0, 1)");
  }
  if (max_bond < 1) throw ConfigError("max_bond must be >= 1");
  if (t_max < 0.0) throw ConfigError("t_max must be >= 0 (0 = default)");
  if (samples < 10) throw ConfigError("samples must be >= 10 per delay");
  if (rk_dt < 0.0) throw ConfigError("rk_dt must be >= 0 (0 = default)");
  if (oracle != "dense" && oracle != "linear") {
    throw ConfigError("oracle must be 'dense' or 'linear'");
  }
  if (experiment == Experiment::Qubit ||
      (experiment == Experiment::OracleCompare && oracle == "dense")) {
    for (int n : n_values) {
      const double gamma = (n - 1) / delta_t;
      if (gamma * timestep >= 1.0) {
        throw ConfigError("timestep violates gamma*dt < 1 for n=" +
                          std::to_string(n));
      }
    }
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + value + "' as a number");
  }
  if (used != value.size()) {
    throw ConfigError(key + ": trailing characters in '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (std::abs(v - std::round(v)) > 1e-9) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
  return static_cast<int>(std::llround(v));
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key + ": empty list entry");
    out.push_back(parse_int(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  bool saw_experiment = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty key or value");
    }

    if (key == "experiment") {
      cfg.experiment = experiment_from_string(value);
      saw_experiment = true;
    } else if (key == "n") {
      cfg.n_values = parse_int_list(key, value);
    } else if (key == "kappa") {
      cfg.kappa = parse_double(key, value);
    } else if (key == "delta_t") {
      cfg.delta_t = parse_double(key, value);
    } else if (key == "omega") {
      cfg.omega = parse_double(key, value);
    } else if (key == "feedback_ratio") {
      cfg.feedback_ratio = parse_double(key, value);
    } else if (key == "timestep") {
      cfg.timestep = parse_double(key, value);
    } else if (key == "cutoff") {
      cfg.cutoff = parse_double(key, value);
    } else if (key == "max_bond") {
      cfg.max_bond = parse_int(key, value);
    } else if (key == "t_max") {
      cfg.t_max = parse_double(key, value);
    } else if (key == "samples") {
      cfg.samples = parse_int(key, value);
    } else if (key == "rk_dt") {
      cfg.rk_dt = parse_double(key, value);
    } else if (key == "oracle") {
      cfg.oracle = value;
    } else if (key == "prefix") {
      cfg.prefix = value;
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
  }
  if (!saw_experiment) throw ConfigError("missing required key 'experiment'");
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace delayline
