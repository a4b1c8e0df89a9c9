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

#ifndef CMSEQ_BLOCK_COVARIANCE_H_
#define CMSEQ_BLOCK_COVARIANCE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmseq/linalg.h"

namespace cmseq {

// Time at which a CM sequence is conditioned: the first (c = 0) or the last
// (c = N) index of the CM interval.
enum class Direction { kFirst, kLast };

inline int conditioning_index(Direction dir, int horizon) {
  return dir == Direction::kFirst ? 0 : horizon;
}

std::string_view to_string(Direction dir);
std::optional<Direction> parse_direction(std::string_view text);

// Covariance of a whole zero-mean sequence x_0..x_N of d-vectors, stored as
// one symmetric (N+1)d square matrix. block(i, j) is Cov(x_i, x_j).
class BlockCovariance {
 public:
  static constexpr double kPsdTol = 1e-10;

  // Validates shape, finiteness and positive semidefiniteness (within
  // kPsdTol relative); stores the symmetrized matrix. Throws ValidationError
  // or IndefiniteError.
  BlockCovariance(int horizon, int dim, const Matrix& full);

  int horizon() const { return horizon_; }
  int dim() const { return dim_; }
  int blocks() const { return horizon_ + 1; }
  const Matrix& matrix() const { return full_; }
  double frobenius_norm() const { return norm_; }

  Eigen::Block<const Matrix> block(int i, int j) const {
    return full_.block(i * dim_, j * dim_, dim_, dim_);
  }

  // Covariance of the stacked vector (x_{t_0}, x_{t_1}, ...) for the given
  // time indices (repeats allowed).
  Matrix gather(const std::vector<int>& times) const;

  // Cov(x_k, (x_{t_0}, x_{t_1}, ...)).
  Matrix cross(int k, const std::vector<int>& times) const;

  // Same matrix multiplied by alpha > 0.
  BlockCovariance scaled(double alpha) const;

 private:
  int horizon_;
  int dim_;
  Matrix full_;
  double norm_;
};

}  // namespace cmseq

#endif  // CMSEQ_BLOCK_COVARIANCE_H_
