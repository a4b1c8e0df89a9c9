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

#ifndef CMSEQ_LINALG_H_
#define CMSEQ_LINALG_H_

// Dense numerical kernel shared by every other module. Everything here is a
// pure function of its arguments.

#include <Eigen/Dense>

namespace cmseq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultPinvTol = 1e-12;

// Throws ValidationError if any entry is NaN or infinite. `what` names the
// offending matrix in the message.
void require_finite(const Matrix& a, const char* what);

// Moore-Penrose pseudoinverse via SVD. Singular values at or below
// rel_tol * sigma_max are dropped. The zero matrix maps to the (transposed
// shape) zero matrix.
Matrix mp_inverse(const Matrix& a, double rel_tol = kDefaultPinvTol);

// Same as mp_inverse, but the cutoff is rel_tol * max(sigma_max, scale).
// Callers that pseudo-invert sub-blocks of a larger covariance pass the norm
// of the whole matrix as `scale`, so that blocks that are zero up to rounding
// are recognised as zero rather than inverted.
Matrix mp_inverse_scaled(const Matrix& a, double rel_tol, double scale);

struct PsdCheck {
  bool is_psd = false;
  Matrix symmetrized;
  double min_eigenvalue = 0.0;
  double max_abs_eigenvalue = 0.0;
};

// Symmetrizes `a` and reports whether every eigenvalue is at least
// -rel_tol * max(max|eigenvalue|, 1). Throws ValidationError when `a` is not
// square.
PsdCheck psd_project_check(const Matrix& a, double rel_tol = kDefaultPinvTol);

// Rank-revealing symmetric factor: base * base^T reproduces the symmetrized
// input. base has one column per retained eigenvalue.
struct PsdFactor {
  Matrix base;
  double tolerance_used = 0.0;

  Eigen::Index rank() const { return base.cols(); }
};

// Eigendecomposition-based factorisation; works for singular input. Throws
// IndefiniteError (carrying the most negative eigenvalue) when the input
// fails psd_project_check.
PsdFactor psd_factor(const Matrix& a, double rel_tol = kDefaultPinvTol);

// Symmetrizes and clips eigenvalues in [-slack, 0) to zero. Eigenvalues below
// -slack raise IndefiniteError. Used for Schur-complement residual
// covariances, which come out slightly indefinite in floating point.
Matrix clip_to_psd(const Matrix& a, double slack);

// Number of singular values above rel_tol * max(sigma_max, scale).
Eigen::Index numerical_rank(const Matrix& a, double rel_tol, double scale = 0.0);

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace cmseq

#endif  // CMSEQ_LINALG_H_
