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

#include <Eigen/Dense>

namespace delayline {

struct ThinSvd {
  Eigen::MatrixXcd u;   // m x k
  Eigen::VectorXd s;    // k, descending
  Eigen::MatrixXcd vt;  // k x n
};

// Thin SVD backed by LAPACK's divide-and-conquer routine when available
// (the hot path of the tensor engine); deterministic either way.
ThinSvd thin_svd(Eigen::MatrixXcd a);

}  // namespace delayline
