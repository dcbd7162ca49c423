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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace delayline {

// Named sampled observable. All engines emit these; the CLI serializes
// them to long-format CSV. Times are strictly increasing.
struct TimeSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
  std::map<std::string, std::string> meta;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  // Appends a sample; rejects non-increasing times.
  void push(double t, double v);

  // Linear interpolation; t must lie within [times.front(), times.back()].
  double value_at(double t) const;

  double max_value() const;

  // sup_t |this(t) - other(t)| over this series' samples inside [t_lo, t_hi],
  // interpolating the other series.
  double sup_distance(const TimeSeries& other, double t_lo, double t_hi) const;
};

}  // namespace delayline
