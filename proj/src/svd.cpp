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

#include "delayline/svd.hpp"

#ifdef DELAYLINE_HAVE_LAPACKE
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>
#endif

namespace delayline {

#ifdef DELAYLINE_HAVE_LAPACKE

ThinSvd thin_svd(Eigen::MatrixXcd a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);

  ThinSvd out;
  out.u.resize(m, k);
  out.s.resize(k);
  out.vt.resize(k, n);

  Eigen::MatrixXcd work = a;  // zgesdd destroys its input
  const lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, out.s.data(), out.u.data(),
      m, out.vt.data(), k);
  if (info == 0) return out;

  // Divide-and-conquer occasionally fails to converge; redo with Jacobi.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = svd.matrixU();
  out.s = svd.singularValues();
  out.vt = svd.matrixV().adjoint();
  return out;
}

#else

ThinSvd thin_svd(Eigen::MatrixXcd a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out;
  out.u = svd.matrixU();
  out.s = svd.singularValues();
  out.vt = svd.matrixV().adjoint();
  return out;
}

#endif

}  // namespace delayline
