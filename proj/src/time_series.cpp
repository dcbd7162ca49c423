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

#include "delayline/time_series.hpp"

#include <algorithm>
#include <cmath>

#include "delayline/errors.hpp"

namespace delayline {

void TimeSeries::push(double t, double v) {
  if (!times.empty() && !(t > times.back())) {
    throw ConfigError("TimeSeries '" + name +
                      "': times must be strictly increasing");
  }
  times.push_back(t);
  values.push_back(v);
}

double TimeSeries::value_at(double t) const {
  if (times.empty()) throw ConfigError("TimeSeries '" + name + "' is empty");
  if (t <= times.front()) {
    if (t < times.front() - 1e-12 * (1.0 + std::abs(times.front()))) {
      throw ConfigError("TimeSeries '" + name + "': t below sampled range");
    }
    return values.front();
  }
  if (t >= times.back()) {
    if (t > times.back() + 1e-12 * (1.0 + std::abs(times.back()))) {
      throw ConfigError("TimeSeries '" + name + "': t above sampled range");
    }
    return values.back();
  }
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * values[lo] + w * values[hi];
}

double TimeSeries::max_value() const {
  double m = -1e300;
  for (double v : values) m = std::max(m, v);
  return m;
}

double TimeSeries::sup_distance(const TimeSeries& other, double t_lo,
                                double t_hi) const {
  double sup = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t_lo || t > t_hi) continue;
    sup = std::max(sup, std::abs(values[i] - other.value_at(t)));
  }
  return sup;
}

}  // namespace delayline
