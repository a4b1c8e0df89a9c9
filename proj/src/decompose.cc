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

#include "cmseq/decompose.h"

#include <sstream>

#include "cmseq/characterize.h"
#include "cmseq/errors.h"

namespace cmseq {
namespace {

Eigen::Index off(int k, int d) { return static_cast<Eigen::Index>(k) * d; }

}  // namespace

BlockCovariance build_cm_covariance(const BlockCovariance& markov,
                                    const Matrix& s, const Matrix& d_cov,
                                    Direction dir, double rel_tol) {
  const int d = markov.dim();
  const int n = markov.blocks();  // horizon of the result
  if (s.rows() != off(n, d) || s.cols() != d) {
    std::ostringstream msg;
    msg << "S must be " << off(n, d) << "x" << d << ", got " << s.rows() << "x"
        << s.cols();
    throw ValidationError(msg.str());
  }
  if (d_cov.rows() != d || d_cov.cols() != d) {
    throw ValidationError("D must be d x d");
  }
  require_finite(s, "S");
  require_finite(d_cov, "D");
  PsdCheck dcheck = psd_project_check(d_cov, BlockCovariance::kPsdTol);
  if (!dcheck.is_psd) {
    std::ostringstream msg;
    msg << "D is not positive semidefinite (most negative eigenvalue "
        << dcheck.min_eigenvalue << ")";
    throw IndefiniteError(msg.str(), dcheck.min_eigenvalue);
  }
  ClassificationReport mcheck = is_markov(markov, rel_tol);
  if (!mcheck.passed) {
    throw PreconditionError("B1 is not a Markov covariance");
  }

  const Eigen::Index side = off(n + 1, d);
  Matrix b = Matrix::Zero(side, side);
  Matrix gamma(side, d);
  if (dir == Direction::kLast) {
    b.topLeftCorner(off(n, d), off(n, d)) = markov.matrix();
    gamma.topRows(off(n, d)) = s;
    gamma.bottomRows(d).setIdentity();
  } else {
    b.bottomRightCorner(off(n, d), off(n, d)) = markov.matrix();
    gamma.topRows(d).setIdentity();
    gamma.bottomRows(off(n, d)) = s;
  }
  return BlockCovariance(n, d, b + gamma * dcheck.symmetrized * gamma.transpose());
}

std::vector<Matrix> canonical_gamma(const BlockCovariance& c, Direction dir) {
  const int cond = conditioning_index(dir, c.horizon());
  const Matrix pinv = mp_inverse_scaled(c.block(cond, cond),
                                        kConditioningPinvTol, c.frobenius_norm());
  std::vector<Matrix> gamma;
  for (int k = 0; k <= c.horizon(); ++k) {
    gamma.push_back(k == cond ? Matrix(Matrix::Identity(c.dim(), c.dim()))
                              : Matrix(c.block(k, cond) * pinv));
  }
  return gamma;
}

MarkovPartCheck markov_part_report(const BlockCovariance& c,
                                   const std::vector<Matrix>& gamma,
                                   Direction dir, double rel_tol) {
  const int n = c.horizon();
  const int d = c.dim();
  const int cond = conditioning_index(dir, n);
  if (gamma.size() != static_cast<std::size_t>(n + 1)) {
    throw ValidationError("gamma must hold N+1 blocks indexed by time");
  }
  std::vector<int> times;
  for (int k = 0; k <= n; ++k) {
    if (k == cond) continue;
    const Matrix& g = gamma[static_cast<std::size_t>(k)];
    if (g.rows() != d || g.cols() != d) {
      throw ValidationError("every gamma block must be d x d");
    }
    times.push_back(k);
  }

  // y = L x, where L selects x_k and subtracts Gamma_k x_c.
  const auto m = static_cast<int>(times.size());
  Matrix lift = Matrix::Zero(off(m, d), off(n + 1, d));
  for (int a = 0; a < m; ++a) {
    const int k = times[static_cast<std::size_t>(a)];
    lift.block(off(a, d), off(k, d), d, d).setIdentity();
    lift.block(off(a, d), off(cond, d), d, d) -=
        gamma[static_cast<std::size_t>(k)];
  }

  MarkovPartCheck out;
  const double threshold = rel_tol * (1.0 + c.frobenius_norm());
  const Matrix cross = lift * c.matrix().middleCols(off(cond, d), d);
  for (int a = 0; a < m; ++a) {
    const double norm = cross.middleRows(off(a, d), d).norm();
    if (norm > out.worst_cross || out.worst_cross_time < 0) {
      out.worst_cross = norm;
      out.worst_cross_time = times[static_cast<std::size_t>(a)];
    }
  }

  if (m > 0) {
    BlockCovariance y(m - 1, d, lift * c.matrix() * lift.transpose());
    out.markov = is_markov(y, rel_tol);
    for (int& t : out.markov.worst_indices) t = times[static_cast<std::size_t>(t)];
  }
  out.markov.property = "markov_part";
  out.passed = out.worst_cross <= threshold && out.markov.passed;
  return out;
}

bool markov_part_check(const BlockCovariance& c, const std::vector<Matrix>& gamma,
                       Direction dir, double rel_tol) {
  return markov_part_report(c, gamma, dir, rel_tol).passed;
}

}  // namespace cmseq
