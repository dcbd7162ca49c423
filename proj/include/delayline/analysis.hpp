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

#include <cmath>
#include <cstddef>
#include <vector>

#include "delayline/errors.hpp"
#include "delayline/time_series.hpp"

namespace delayline {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("fit_line: need >= 2 matching points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

inline LineFit fit_loglog(const std::vector<double>& x,
                          const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

inline double mean_over(const TimeSeries& s, double t_lo, double t_hi) {
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.times[i] >= t_lo && s.times[i] <= t_hi) {
      acc += s.values[i];
      ++count;
    }
  }
  if (count == 0) throw ConfigError("mean_over: empty window");
  return acc / count;
}

// 10%-90% rise width of a step-like series with the given plateau level.
// Finds the first sample reaching 0.9*plateau and walks back to the last
// sample at or below 0.1*plateau, interpolating both crossings.
inline double rise_width(const TimeSeries& s, double plateau) {
  const double lo_level = 0.1 * plateau;
  const double hi_level = 0.9 * plateau;
  std::size_t i90 = 0;
  bool found = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.values[i] >= hi_level) {
      i90 = i;
      found = true;
      break;
    }
  }
  if (!found || i90 == 0) throw ConfigError("rise_width: no 90% crossing");

  auto cross = [&](std::size_t a, std::size_t b, double level) {
    const double v0 = s.values[a], v1 = s.values[b];
    if (v1 == v0) return s.times[b];
    const double w = (level - v0) / (v1 - v0);
    return s.times[a] + w * (s.times[b] - s.times[a]);
  };

  const double t90 = cross(i90 - 1, i90, hi_level);
  std::size_t i10 = 0;
  bool found10 = false;
  for (std::size_t i = i90; i-- > 0;) {
    if (s.values[i] <= lo_level) {
      i10 = i;
      found10 = true;
      break;
    }
  }
  if (!found10) throw ConfigError("rise_width: no 10% crossing");
  const double t10 = cross(i10, i10 + 1, lo_level);
  return t90 - t10;
}

// Interior local maxima in [t_lo, t_hi] with parabolic refinement.
inline std::vector<double> oscillation_peak_times(const TimeSeries& s,
                                                  double t_lo, double t_hi) {
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s.times[i] < t_lo || s.times[i] > t_hi) continue;
    const double ym = s.values[i - 1], y0 = s.values[i], yp = s.values[i + 1];
    if (y0 > ym && y0 >= yp) {
      double t = s.times[i];
      const double denom = ym - 2.0 * y0 + yp;
      if (std::abs(denom) > 1e-300) {
        t += 0.5 * (ym - yp) / denom * (s.times[i + 1] - s.times[i]);
      }
      if (!peaks.empty() && t - peaks.back() < 1e-9) continue;
      peaks.push_back(t);
    }
  }
  return peaks;
}

}  // namespace delayline
