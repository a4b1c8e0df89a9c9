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

#ifndef CMSEQ_DECOMPOSE_H_
#define CMSEQ_DECOMPOSE_H_

// A CM_c sequence is a Markov sequence plus a linear image of one vector
// uncorrelated with it:
//
//   x_k = y_k + Gamma_k x_c,  k != c.
//
// At the covariance level this reads C = B + Gamma D Gamma^T with B the
// Markov covariance padded by a zero block at c.

#include <vector>

#include "cmseq/block_covariance.h"
#include "cmseq/linalg.h"
#include "cmseq/report.h"

namespace cmseq {

// Builds C = B + Gamma D Gamma^T.
//   last:  B = [[markov, 0], [0, 0]],  Gamma = [s; I]
//   first: B = [[0, 0], [0, markov]],  Gamma = [I; s]
// markov has N blocks (horizon N-1), s is Nd x d, d_cov is d x d PSD.
// Throws PreconditionError if `markov` fails is_markov, ValidationError on
// shape mismatch and IndefiniteError if d_cov is not PSD.
BlockCovariance build_cm_covariance(const BlockCovariance& markov,
                                    const Matrix& s, const Matrix& d_cov,
                                    Direction dir,
                                    double rel_tol = kDefaultClassifyTol);

// Gamma_k = C_{k,c} C_c^+ for every k (entry c is the identity).
std::vector<Matrix> canonical_gamma(const BlockCovariance& c, Direction dir);

struct MarkovPartCheck {
  bool passed = false;
  double worst_cross = 0.0;            // max_k ||Cov(y_k, x_c)||_F
  int worst_cross_time = -1;
  ClassificationReport markov;         // is_markov on (y_k), k != c
};

// With y_k = x_k - Gamma_k x_c, checks Cov(y_k, x_c) = 0 for all k != c and
// that (y_k)_{k != c} is Markov. gamma has N+1 entries indexed by time; the
// entry at c is ignored.
MarkovPartCheck markov_part_report(const BlockCovariance& c,
                                   const std::vector<Matrix>& gamma,
                                   Direction dir,
                                   double rel_tol = kDefaultClassifyTol);

bool markov_part_check(const BlockCovariance& c, const std::vector<Matrix>& gamma,
                       Direction dir, double rel_tol = kDefaultClassifyTol);

}  // namespace cmseq

#endif  // CMSEQ_DECOMPOSE_H_
