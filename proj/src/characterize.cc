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

#include "cmseq/characterize.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "cmseq/errors.h"
#include "cmseq/linalg.h"

namespace cmseq {
namespace {

ClassificationReport start_report(std::string property,
                                  const BlockCovariance& c, double rel_tol) {
  ClassificationReport r;
  r.property = std::move(property);
  r.rel_tol = rel_tol;
  r.scale = 1.0 + c.frobenius_norm();
  return r;
}

// Times in [lo, hi] except `skip`.
std::vector<int> times_without(int lo, int hi, int skip) {
  std::vector<int> out;
  for (int t = lo; t <= hi; ++t) {
    if (t != skip) out.push_back(t);
  }
  return out;
}

// Every i < j < k drawn from `times`, conditioning on x_j and (optionally) x_anchor.
void conditional_triples(const BlockCovariance& c, const std::vector<int>& times,
                         int anchor, ClassificationReport& report) {
  const auto n = times.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t e = b + 1; e < n; ++e) {
        const int i = times[a], j = times[b], k = times[e];
        std::vector<int> given{j};
        if (anchor >= 0) given.push_back(anchor);
        report.observe(conditional_defect(c, k, i, given).norm(), {i, j, k});
      }
    }
  }
}

std::string window_name(int k1, int k2, Direction dir) {
  std::ostringstream s;
  s << "[" << k1 << "," << k2 << "]-cm_" << to_string(dir);
  return s.str();
}

}  // namespace

ClassificationReport combine_reports(
    std::string property, const std::vector<ClassificationReport>& parts) {
  ClassificationReport out;
  out.property = std::move(property);
  double worst = -1.0;
  for (const auto& p : parts) {
    out.tuples_checked += p.tuples_checked;
    out.passed = out.passed && p.passed;
    out.rel_tol = p.rel_tol;
    if (p.normalized_residual() > worst) {
      worst = p.normalized_residual();
      out.worst_residual = p.worst_residual;
      out.worst_indices = p.worst_indices;
      out.scale = p.scale;
    }
  }
  return out;
}

Matrix conditional_defect(const BlockCovariance& c, int k, int i,
                          const std::vector<int>& given) {
  const Matrix joint = c.gather(given);
  const Matrix left = c.cross(k, given);
  const Matrix right = c.cross(i, given).transpose();
  const Matrix pinv =
      mp_inverse_scaled(joint, kConditioningPinvTol, c.frobenius_norm());
  return c.block(k, i) - left * pinv * right;
}

ClassificationReport is_markov(const BlockCovariance& c, double rel_tol) {
  ClassificationReport r = start_report("markov", c, rel_tol);
  conditional_triples(c, times_without(0, c.horizon(), -1), -1, r);
  r.finish();
  return r;
}

ClassificationReport is_cm(const BlockCovariance& c, Direction dir,
                           double rel_tol) {
  const int cond = conditioning_index(dir, c.horizon());
  ClassificationReport r =
      start_report(std::string("cm_") + std::string(to_string(dir)), c, rel_tol);
  conditional_triples(c, times_without(0, c.horizon(), cond), cond, r);
  r.finish();
  return r;
}

ClassificationReport is_interval_cm(const BlockCovariance& c, int k1, int k2,
                                    Direction dir, double rel_tol) {
  if (k1 < 0 || k2 > c.horizon() || k1 >= k2) {
    std::ostringstream msg;
    msg << "invalid CM window [" << k1 << "," << k2 << "] for N="
        << c.horizon();
    throw ValidationError(msg.str());
  }
  ClassificationReport r = start_report(window_name(k1, k2, dir), c, rel_tol);
  if (k2 - k1 >= 3) {
    const int cond = dir == Direction::kFirst ? k1 : k2;
    conditional_triples(c, times_without(k1, k2, cond), cond, r);
  }
  r.finish();
  return r;
}

ClassificationReport reciprocal_identity(const BlockCovariance& c,
                                         OutsideAnchor side, double rel_tol) {
  ClassificationReport r = start_report(
      side == OutsideAnchor::kBelow ? "reciprocal(l<i<j<k)"
                                    : "reciprocal(i<j<k<l)",
      c, rel_tol);
  const int n = c.horizon();
  for (int l = 0; l <= n; ++l) {
    const int lo = side == OutsideAnchor::kBelow ? l + 1 : 0;
    const int hi = side == OutsideAnchor::kBelow ? n : l - 1;
    for (int i = lo; i <= hi; ++i) {
      for (int j = i + 1; j <= hi; ++j) {
        for (int k = j + 1; k <= hi; ++k) {
          r.observe(conditional_defect(c, k, i, {j, l}).norm(), {i, j, k, l});
        }
      }
    }
  }
  r.finish();
  return r;
}

ClassificationReport is_reciprocal(const BlockCovariance& c, double rel_tol) {
  ClassificationReport below =
      reciprocal_identity(c, OutsideAnchor::kBelow, rel_tol);
  // Condition (b), i < j < k < l = N, is the CM_L identity.
  ClassificationReport last = start_report("reciprocal(i<j<k<l=N)", c, rel_tol);
  const int n = c.horizon();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        last.observe(conditional_defect(c, k, i, {j, n}).norm(), {i, j, k, n});
      }
    }
  }
  last.finish();
  return combine_reports("reciprocal", {below, last});
}

BlockCovariance augment_with_anchor(const BlockCovariance& c, int first,
                                    int last, int anchor) {
  const int d = c.dim();
  const int count = last - first + 1;
  if (count < 1) {
    throw ValidationError("augmented sequence must have at least one state");
  }
  Matrix y(2 * d * count, 2 * d * count);
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b < count; ++b) {
      auto blk = y.block(2 * d * a, 2 * d * b, 2 * d, 2 * d);
      blk.topLeftCorner(d, d) = c.block(first + a, first + b);
      blk.topRightCorner(d, d) = c.block(first + a, anchor);
      blk.bottomLeftCorner(d, d) = c.block(anchor, first + b);
      blk.bottomRightCorner(d, d) = c.block(anchor, anchor);
    }
  }
  return BlockCovariance(count - 1, 2 * d, y);
}

namespace {

// Markov check on an augmented sequence with results mapped back to the
// original time indices (augmented index a is time first + a).
ClassificationReport markov_on_augmented(const BlockCovariance& c, int first,
                                         int last, int anchor,
                                         std::string property, double rel_tol) {
  ClassificationReport r;
  r.property = std::move(property);
  r.rel_tol = rel_tol;
  if (last - first + 1 < 3) {
    r.scale = 1.0 + c.frobenius_norm();
    return r;
  }
  r = is_markov(augment_with_anchor(c, first, last, anchor), rel_tol);
  for (int& t : r.worst_indices) t += first;
  return r;
}

}  // namespace

ClassificationReport is_cm_via_markov(const BlockCovariance& c, Direction dir,
                                      double rel_tol) {
  const int n = c.horizon();
  const int first = dir == Direction::kFirst ? 1 : 0;
  const int last = dir == Direction::kFirst ? n : n - 1;
  ClassificationReport r =
      markov_on_augmented(c, first, last, conditioning_index(dir, n), "", rel_tol);
  r.property = std::string("cm_") + std::string(to_string(dir)) + "_via_markov";
  return r;
}

ClassificationReport is_reciprocal_via_markov(const BlockCovariance& c,
                                              double rel_tol) {
  const int n = c.horizon();
  std::vector<ClassificationReport> parts;
  for (int k1 = 0; k1 <= n; ++k1) {
    parts.push_back(markov_on_augmented(c, k1 + 1, n, k1, "", rel_tol));
  }
  parts.push_back(markov_on_augmented(c, 0, n - 1, n, "", rel_tol));
  return combine_reports("reciprocal_via_markov", parts);
}

ClassificationReport cm_oracle(const BlockCovariance& c, Direction dir,
                               double rel_tol) {
  const int side = c.blocks() * c.dim();
  if (side > kOracleMaxSide) {
    std::ostringstream msg;
    msg << "cm_oracle is limited to (N+1)d <= " << kOracleMaxSide << ", got "
        << side;
    throw PreconditionError(msg.str());
  }
  const int n = c.horizon();
  const int cond = conditioning_index(dir, n);
  const double norm = c.frobenius_norm();
  ClassificationReport r = start_report(
      std::string("cm_") + std::string(to_string(dir)) + "_oracle", c, rel_tol);

  // Trace of Cov(x_k - E[x_k | z]) for z = (x_t, t in given).
  auto mse = [&](int k, const std::vector<int>& given) {
    const Matrix joint = c.gather(given);
    const Matrix cross = c.cross(k, given);
    const Matrix err =
        c.block(k, k) -
        cross * mp_inverse_scaled(joint, kConditioningPinvTol, norm) *
            cross.transpose();
    return err.trace();
  };

  const std::vector<int> times = times_without(0, n, cond);
  for (std::size_t b = 0; b < times.size(); ++b) {
    std::vector<int> past;
    for (std::size_t a = 0; a <= b; ++a) past.push_back(times[a]);
    past.push_back(cond);
    const int j = times[b];
    for (std::size_t e = b + 1; e < times.size(); ++e) {
      const int k = times[e];
      const double gap = mse(k, {j, cond}) - mse(k, past);
      r.observe(std::abs(gap), {j, k});
    }
  }
  r.finish();
  return r;
}

}  // namespace cmseq
