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

#ifndef CMSEQ_MODEL_H_
#define CMSEQ_MODEL_H_

// CM_c dynamic model
//
//   x_k = G_{k,k-1} x_{k-1} + G_{k,c} x_c + e_k,   k in [1,N] \ {c}
//
// with e_k zero-mean white Gaussian, Cov(e_k) = G_k, and boundary condition
//
//   c = N:  x_N = e_N,  x_0 = G_{0,N} x_N + e_0
//   c = 0:  x_0 = e_0
//
// The model is well posed for every parameter value, including singular and
// zero noise covariances; this is what lets it describe singular sequences
// such as trajectories with a known destination.

#include <cstdint>
#include <vector>

#include "cmseq/block_covariance.h"
#include "cmseq/linalg.h"
#include "cmseq/report.h"

namespace cmseq {

// Parameters of a CM_c model. Every vector holds N+1 d x d blocks indexed by
// time; entries the model does not use must be zero.
//
//   transition[k] = G_{k,k-1}   for k in [1,N] \ {c}
//   coupling[k]   = G_{k,c}     for k in [1,N] \ {c}, plus coupling[0] =
//                               G_{0,N} when c = N
//   noise_cov[k]  = G_k         for every k in [0,N]
//
// For c = 0 and k = 1 both transition[1] and coupling[1] multiply x_0, so the
// effective coefficient is their sum.
struct CmModel {
  int horizon = 1;
  int dim = 1;
  Direction direction = Direction::kLast;
  std::vector<Matrix> transition;
  std::vector<Matrix> coupling;
  std::vector<Matrix> noise_cov;

  // Model with every block zero (the a.s. zero sequence).
  static CmModel zeros(int horizon, int dim, Direction dir);

  int c() const { return conditioning_index(direction, horizon); }
  bool uses_transition(int k) const;
  bool uses_coupling(int k) const;
};

// Throws ValidationError / IndefiniteError when shapes, finiteness, unused
// blocks or noise covariances are off.
void validate(const CmModel& model);

// Converts the alternative c = N boundary condition
//   x_0 = e_0 (Cov = initial_cov),  x_N = final_from_initial x_0 + e_N
//   (Cov(e_N) = final_noise_cov)
// into the canonical x_N = e_N, x_0 = G_{0,N} x_N + e_0 form. The dynamic
// blocks of `dynamics` are kept; its boundary blocks are overwritten.
CmModel with_initial_boundary(CmModel dynamics, const Matrix& final_from_initial,
                              const Matrix& initial_cov,
                              const Matrix& final_noise_cov);

// The (N+1)d square matrix mapping the stacked state to the stacked noise,
// script-G x = e.
Matrix assemble_g(const CmModel& model);

// Cov(x) = G^{-1} diag(G_0..G_N) G^{-T}, with G^{-1} formed by block
// substitution along the model recursion.
BlockCovariance covariance_of(const CmModel& model);

// Stable 64-bit fingerprint of the parameter values.
std::uint64_t model_fingerprint(const CmModel& model);

// M sampled paths. paths.row(m) stacks x_0..x_N of path m.
struct TrajectoryEnsemble {
  int horizon = 0;
  int dim = 1;
  std::uint64_t seed = 0;
  std::uint64_t model_hash = 0;
  Matrix paths;

  Eigen::Index count() const { return paths.rows(); }
  Vector state(Eigen::Index path, int k) const {
    return paths.row(path).segment(static_cast<Eigen::Index>(k) * dim, dim)
        .transpose();
  }
};

// Draws `count` paths by running the recursion in the order x_c, then (for
// c = N) x_0, then forward. Each path's randomness is derived from
// (seed, path index) only, so the result does not depend on how paths are
// split across threads.
TrajectoryEnsemble sample(const CmModel& model, Eigen::Index count,
                          std::uint64_t seed, unsigned threads = 0);

// Zero-mean second-moment estimate (1/M) sum x x^T.
BlockCovariance empirical_covariance(const TrajectoryEnsemble& ensemble);

struct SingularityEntry {
  int time = 0;
  bool noise_degenerate = false;  // Cov(e_k) = 0: x_k is a.s. a linear
                                  // function of (x_{k-1}, x_N)
  bool state_as_zero = false;     // x_k = 0 a.s.
  Eigen::Index rank_noise = 0;
};

struct SingularityReport {
  std::vector<SingularityEntry> entries;  // k = 1..N-1
};

// c = N only. `tol` is relative to 1 + ||Cov(x)||_F.
SingularityReport singularity_report(const CmModel& model, double tol = 1e-12);

// For each k in [0,N-2]: whether Cov((x_k, x_N)) is nonsingular, i.e. its
// smallest eigenvalue exceeds tol times its largest. c = N only.
std::vector<bool> boundary_nonsingular(const CmModel& model, double tol = 1e-10);

// Checks whether the sequence the model describes is reciprocal, i.e. whether
// P = covariance_of(model) satisfies
//   P_{k,i} = [P_{k,j} P_{k,l}] [[P_j, P_{j,l}], [P_{l,j}, P_l]]^+ [P_{j,i}; P_{l,i}]
// for l < i < j < k (c = N) or i < j < k < l (c = 0).
ClassificationReport is_reciprocal_model(const CmModel& model,
                                         double rel_tol = kDefaultClassifyTol);

}  // namespace cmseq

#endif  // CMSEQ_MODEL_H_
