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

#include "cmseq/fit.h"

#include <sstream>
#include <string>

#include "cmseq/characterize.h"
#include "cmseq/errors.h"
#include "cmseq/linalg.h"

namespace cmseq {
namespace {

std::string describe_failure(const ClassificationReport& r) {
  std::ostringstream msg;
  msg << r.property << " check failed: worst residual " << r.worst_residual
      << " (threshold " << r.rel_tol * r.scale << ") at indices (";
  for (std::size_t i = 0; i < r.worst_indices.size(); ++i) {
    msg << (i ? "," : "") << r.worst_indices[i];
  }
  msg << ")";
  return msg.str();
}

struct Regression {
  Matrix gain;
  Matrix noise;
};

// Best linear predictor of x_k from (x_t, t in given) and its error
// covariance.
Regression regress(const BlockCovariance& c, int k, const std::vector<int>& given,
                   double slack) {
  const Matrix cross = c.cross(k, given);
  Regression r;
  r.gain = cross * mp_inverse_scaled(c.gather(given), kConditioningPinvTol,
                                     c.frobenius_norm());
  r.noise = clip_to_psd(c.block(k, k) - r.gain * cross.transpose(), slack);
  return r;
}

}  // namespace

CmModel fit_cm(const BlockCovariance& c, Direction dir,
               const FitOptions& options) {
  if (c.horizon() < 1) {
    throw ValidationError("fit_cm needs at least two time steps (N >= 1)");
  }
  if (options.enforce) {
    ClassificationReport check = is_cm(c, dir, options.rel_tol);
    if (!check.passed) throw PreconditionError(describe_failure(check));
  }
  const int n = c.horizon();
  const int d = c.dim();
  const double slack = options.psd_slack * (1.0 + c.frobenius_norm());
  CmModel m = CmModel::zeros(n, d, dir);
  auto at = [](int k) { return static_cast<std::size_t>(k); };

  if (dir == Direction::kLast) {
    m.noise_cov[at(n)] = clip_to_psd(c.block(n, n), slack);
    Regression boundary = regress(c, 0, {n}, slack);
    m.coupling[0] = boundary.gain;
    m.noise_cov[0] = boundary.noise;
    for (int k = 1; k <= n - 1; ++k) {
      Regression step = regress(c, k, {k - 1, n}, slack);
      m.transition[at(k)] = step.gain.leftCols(d);
      m.coupling[at(k)] = step.gain.rightCols(d);
      m.noise_cov[at(k)] = step.noise;
    }
  } else {
    m.noise_cov[0] = clip_to_psd(c.block(0, 0), slack);
    Regression first = regress(c, 1, {0}, slack);
    m.transition[1] = first.gain;
    m.noise_cov[1] = first.noise;
    for (int k = 2; k <= n; ++k) {
      Regression step = regress(c, k, {k - 1, 0}, slack);
      m.transition[at(k)] = step.gain.leftCols(d);
      m.coupling[at(k)] = step.gain.rightCols(d);
      m.noise_cov[at(k)] = step.noise;
    }
  }
  validate(m);
  return m;
}

CmModel fit_reciprocal(const BlockCovariance& c, const FitOptions& options) {
  ClassificationReport check = is_reciprocal(c, options.rel_tol);
  if (!check.passed) throw PreconditionError(describe_failure(check));
  FitOptions inner = options;
  inner.enforce = false;
  CmModel m = fit_cm(c, Direction::kLast, inner);
  if (options.enforce) {
    ClassificationReport model_check = is_reciprocal_model(m, options.rel_tol);
    if (!model_check.passed) {
      throw PreconditionError(describe_failure(model_check));
    }
  }
  return m;
}

}  // namespace cmseq
