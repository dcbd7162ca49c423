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

#include <map>
#include <string>
#include <vector>

#include "delayline/run_config.hpp"
#include "delayline/time_series.hpp"

namespace delayline {

struct ExperimentOutput {
  std::vector<TimeSeries> series;
  std::vector<std::string> report;  // "PASS ..." / "FAIL ..." lines
  std::map<std::string, std::string> manifest;
  bool all_pass = true;

  void check(bool ok, const std::string& what);
};

// Runs the experiment in-process; file output is handled separately.
ExperimentOutput run_experiment(const RunConfig& cfg);

// Runs and writes <prefix>_series.csv, <prefix>_meta.json and (for
// experiments with thresholds) <prefix>_report.txt.
// Returns the CLI exit code: 0 ok, 3 threshold failure.
int run_and_write(const RunConfig& cfg);

void write_series_csv(const std::string& path,
                      const std::vector<TimeSeries>& series);
void write_manifest(const std::string& path,
                    const std::map<std::string, std::string>& entries);
void write_report(const std::string& path,
                  const std::vector<std::string>& lines);

}  // namespace delayline
