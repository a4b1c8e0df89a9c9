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

#ifndef CMSEQ_REPORT_H_
#define CMSEQ_REPORT_H_

#include <cstddef>
#include <string>
#include <vector>

namespace cmseq {

inline constexpr double kDefaultClassifyTol = 1e-8;

// Outcome of one covariance identity checked over an index range.
//
// worst_residual is the largest Frobenius norm of the identity's defect over
// every index tuple checked, and worst_indices is the tuple that produced it
// (in the order the property names them, e.g. (i, j, k) or (i, j, k, l)).
// passed holds exactly when worst_residual <= rel_tol * scale, where scale is
// 1 + ||C||_F of the covariance under test.
struct ClassificationReport {
  std::string property;
  bool passed = true;
  double worst_residual = 0.0;
  std::vector<int> worst_indices;
  double rel_tol = kDefaultClassifyTol;
  double scale = 1.0;
  std::size_t tuples_checked = 0;

  double normalized_residual() const { return worst_residual / scale; }

  // Folds a residual for `indices` into the running worst case. Does not
  // touch `passed`; call finish() once all tuples are in.
  void observe(double residual, std::vector<int> indices) {
    ++tuples_checked;
    if (worst_indices.empty() || residual > worst_residual) {
      worst_residual = residual;
      worst_indices = std::move(indices);
    }
  }

  void finish() { passed = worst_residual <= rel_tol * scale; }
};

// Combines reports that must all pass; the worst normalized residual and its
// indices are carried over.
ClassificationReport combine_reports(std::string property,
                                     const std::vector<ClassificationReport>& parts);

}  // namespace cmseq

#endif  // CMSEQ_REPORT_H_
