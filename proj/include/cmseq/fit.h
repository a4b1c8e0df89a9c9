// Copyright 2026 The cmseq Authors
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

#ifndef CMSEQ_FIT_H_
#define CMSEQ_FIT_H_

#include "cmseq/block_covariance.h"
#include "cmseq/model.h"
#include "cmseq/report.h"

namespace cmseq {

struct FitOptions {
  // Run is_cm first and throw PreconditionError if it fails.
  bool enforce = true;
  double rel_tol = kDefaultClassifyTol;
  // Negative eigenvalues of fitted noise covariances down to
  // -psd_slack * (1 + ||C||_F) are clipped to zero.
  double psd_slack = 1e-9;
};

// Minimum-norm CM_c parameters whose covariance is `c` (when `c` is CM_c).
// Coefficients are conditional-expectation gains,
//   [G_{k,k-1} G_{k,c}] = Cov(x_k, y_{k-1}) Cov(y_{k-1})^+,
//   y_{k-1} = (x_{k-1}, x_c),
// and noise covariances are the matching error covariances. Boundary
// parameters follow x_N = e_N, x_0 = G_{0,N} x_N + e_0 for c = N, and
// x_0 = e_0, x_1 = C_{1,0} C_0^+ x_0 + e_1 for c = 0 (stored in
// transition[1]).
CmModel fit_cm(const BlockCovariance& c, Direction dir,
               const FitOptions& options = {});

// fit_cm in direction last for a reciprocal covariance. Throws
// PreconditionError if `c` is not reciprocal or, with enforcement on, if the
// fitted model fails is_reciprocal_model.
CmModel fit_reciprocal(const BlockCovariance& c, const FitOptions& options = {});

}  // namespace cmseq

#endif  // CMSEQ_FIT_H_
