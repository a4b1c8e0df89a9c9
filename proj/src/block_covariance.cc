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

#include "cmseq/block_covariance.h"

#include <sstream>

#include "cmseq/errors.h"

namespace cmseq {

std::string_view to_string(Direction dir) {
  return dir == Direction::kFirst ? "first" : "last";
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "first" || text == "F" || text == "0") return Direction::kFirst;
  if (text == "last" || text == "L" || text == "N") return Direction::kLast;
  return std::nullopt;
}

BlockCovariance::BlockCovariance(int horizon, int dim, const Matrix& full)
    : horizon_(horizon), dim_(dim) {
  if (horizon < 0 || dim < 1) {
    std::ostringstream msg;
    msg << "invalid covariance dimensions: N=" << horizon << ", d=" << dim;
    throw ValidationError(msg.str());
  }
  const Eigen::Index side = static_cast<Eigen::Index>(horizon + 1) * dim;
  if (full.rows() != side || full.cols() != side) {
    std::ostringstream msg;
    msg << "covariance must be " << side << "x" << side << " for N=" << horizon
        << ", d=" << dim << ", got " << full.rows() << "x" << full.cols();
    throw ValidationError(msg.str());
  }
  require_finite(full, "covariance");
  PsdCheck check = psd_project_check(full, kPsdTol);
  if (!check.is_psd) {
    std::ostringstream msg;
    msg << "covariance is not positive semidefinite (most negative eigenvalue "
        << check.min_eigenvalue << ")";
    throw IndefiniteError(msg.str(), check.min_eigenvalue);
  }
  full_ = std::move(check.symmetrized);
  norm_ = full_.norm();
}

Matrix BlockCovariance::gather(const std::vector<int>& times) const {
  const auto n = static_cast<Eigen::Index>(times.size());
  Matrix out(n * dim_, n * dim_);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      out.block(a * dim_, b * dim_, dim_, dim_) =
          block(times[static_cast<std::size_t>(a)],
                times[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

Matrix BlockCovariance::cross(int k, const std::vector<int>& times) const {
  const auto n = static_cast<Eigen::Index>(times.size());
  Matrix out(dim_, n * dim_);
  for (Eigen::Index b = 0; b < n; ++b) {
    out.block(0, b * dim_, dim_, dim_) =
        block(k, times[static_cast<std::size_t>(b)]);
  }
  return out;
}

BlockCovariance BlockCovariance::scaled(double alpha) const {
  return BlockCovariance(horizon_, dim_, alpha * full_);
}

}  // namespace cmseq
