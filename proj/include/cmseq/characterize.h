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

#ifndef CMSEQ_CHARACTERIZE_H_
#define CMSEQ_CHARACTERIZE_H_

// Covariance-function characterizations of Gaussian Markov, CM_c and
// reciprocal sequences. None of them needs C (or any block of it) to be
// invertible: every conditional is formed with the Moore-Penrose inverse of
// the joint covariance of the conditioning variables.
//
// All checks share one residual convention: the Frobenius norm of the defect
// of the identity, compared against rel_tol * (1 + ||C||_F).

#include <vector>

#include "cmseq/block_covariance.h"
#include "cmseq/report.h"

namespace cmseq {

// Pseudoinverse cutoff used when conditioning on sub-blocks of C, relative to
// ||C||_F.
inline constexpr double kConditioningPinvTol = 1e-12;

// C_{k,i} - Cov(x_k, z) Cov(z)^+ Cov(z, x_i), z = (x_t for t in `given`).
// This is Cov(x_k - E[x_k | z], x_i).
Matrix conditional_defect(const BlockCovariance& c, int k, int i,
                          const std::vector<int>& given);

// C_{k,i} = C_{k,j} C_j^+ C_{j,i} for all i < j < k.
ClassificationReport is_markov(const BlockCovariance& c,
                               double rel_tol = kDefaultClassifyTol);

// C_{k,i} = [C_{k,j} C_{k,c}] [[C_j, C_{j,c}], [C_{c,j}, C_c]]^+ [C_{j,i}; C_{c,i}]
// for all i < j < k in [0,N] \ {c}.
ClassificationReport is_cm(const BlockCovariance& c, Direction dir,
                           double rel_tol = kDefaultClassifyTol);

// The same identity restricted to [k1,k2] \ {c}, c = k1 (first) or k2
// (last). Windows with k2 - k1 < 3 pass without any check. Throws
// ValidationError unless 0 <= k1 < k2 <= N.
ClassificationReport is_interval_cm(const BlockCovariance& c, int k1, int k2,
                                    Direction dir,
                                    double rel_tol = kDefaultClassifyTol);

enum class OutsideAnchor {
  kBelow,  // l < i < j < k
  kAbove,  // i < j < k < l
};

// C_{k,i} = [C_{k,j} C_{k,l}] [[C_j, C_{j,l}], [C_{l,j}, C_l]]^+ [C_{j,i}; C_{l,i}]
// over every (i, j, k, l) with the anchor l on the given side.
ClassificationReport reciprocal_identity(const BlockCovariance& c,
                                         OutsideAnchor side,
                                         double rel_tol = kDefaultClassifyTol);

// Reciprocal iff the identity above holds for (a) l < i < j < k and
// (b) i < j < k < l = N.
ClassificationReport is_reciprocal(const BlockCovariance& c,
                                   double rel_tol = kDefaultClassifyTol);

// Covariance of y_k = (x_k, x_anchor) for k = first..last, as a sequence with
// 2d-dimensional states.
BlockCovariance augment_with_anchor(const BlockCovariance& c, int first,
                                    int last, int anchor);

// CM_c iff (y_k = (x_k, x_c), k in [0,N] \ {c}) is Markov.
ClassificationReport is_cm_via_markov(const BlockCovariance& c, Direction dir,
                                      double rel_tol = kDefaultClassifyTol);

// Reciprocal iff (x_k, x_{k1})_{k=k1+1..N} is Markov for every k1, and
// (x_k, x_N)_{k=0..N-1} is Markov.
ClassificationReport is_reciprocal_via_markov(
    const BlockCovariance& c, double rel_tol = kDefaultClassifyTol);

// Largest (N+1)d accepted by cm_oracle.
inline constexpr int kOracleMaxSide = 64;

// Brute-force CM_c test by projection: for each j < k in [0,N] \ {c},
// compares the mean-square error of predicting x_k from all of
// (x_0..x_j, x_c) with that from (x_j, x_c). The residual is the difference
// of the error-covariance traces. Throws PreconditionError above
// kOracleMaxSide.
ClassificationReport cm_oracle(const BlockCovariance& c, Direction dir,
                               double rel_tol = kDefaultClassifyTol);

}  // namespace cmseq

#endif  // CMSEQ_CHARACTERIZE_H_
