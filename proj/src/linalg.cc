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

#include "cmseq/linalg.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cmseq/errors.h"

namespace cmseq {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

Matrix mp_inverse(const Matrix& a, double rel_tol) {
  return mp_inverse_scaled(a, rel_tol, 0.0);
}

Matrix mp_inverse_scaled(const Matrix& a, double rel_tol, double scale) {
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = rel_tol * std::max(sigma_max, scale);
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::Index numerical_rank(const Matrix& a, double rel_tol, double scale) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double cutoff = rel_tol * std::max(sv(0), scale);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++r;
  }
  return r;
}

PsdCheck psd_project_check(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << "expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw ValidationError(msg.str());
  }
  PsdCheck out;
  out.symmetrized = symmetrize(a);
  if (a.size() == 0) {
    out.is_psd = true;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(out.symmetrized,
                                            Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  out.min_eigenvalue = ev.minCoeff();
  out.max_abs_eigenvalue = ev.cwiseAbs().maxCoeff();
  out.is_psd =
      out.min_eigenvalue >= -rel_tol * std::max(out.max_abs_eigenvalue, 1.0);
  return out;
}

PsdFactor psd_factor(const Matrix& a, double rel_tol) {
  PsdCheck check = psd_project_check(a, rel_tol);
  if (!check.is_psd) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite (most negative eigenvalue "
        << check.min_eigenvalue << ")";
    throw IndefiniteError(msg.str(), check.min_eigenvalue);
  }
  PsdFactor out;
  out.tolerance_used = rel_tol;
  const Eigen::Index n = a.rows();
  if (n == 0 || check.max_abs_eigenvalue == 0.0) {
    out.base = Matrix::Zero(n, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(check.symmetrized);
  const Vector& ev = eig.eigenvalues();
  const double cutoff = rel_tol * ev.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (ev(i) > cutoff) keep.push_back(i);
  }
  out.base.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const Eigen::Index i = keep[c];
    out.base.col(static_cast<Eigen::Index>(c)) =
        eig.eigenvectors().col(i) * std::sqrt(ev(i));
  }
  return out;
}

Matrix clip_to_psd(const Matrix& a, double slack) {
  Matrix sym = symmetrize(a);
  if (sym.size() == 0) return sym;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  Vector ev = eig.eigenvalues();
  if (ev.minCoeff() >= 0.0) return sym;
  if (ev.minCoeff() < -slack) {
    std::ostringstream msg;
    msg << "residual covariance is indefinite (most negative eigenvalue "
        << ev.minCoeff() << ", allowed slack " << slack << ")";
    throw IndefiniteError(msg.str(), ev.minCoeff());
  }
  ev = ev.cwiseMax(0.0);
  Matrix out = eig.eigenvectors() * ev.asDiagonal() *
               eig.eigenvectors().transpose();
  return symmetrize(out);
}

}  // namespace cmseq
