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

#ifndef CMSEQ_CLI_H_
#define CMSEQ_CLI_H_

#include <iosfwd>

namespace cmseq {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,          // I/O or parse failure, bad usage
  kExitValidation = 2,  // non-PSD input, shape mismatch
  kExitPrecondition = 3,
};

// Default tolerance for classifying covariances estimated from sampled paths.
inline constexpr double kEmpiricalTol = 5e-2;

// Entry point behind the `cmseq` binary:
//   cmseq generate   --model M --count K --seed S --out paths.csv
//   cmseq classify   --cov C [--tol T] [--direction D] [--windows k1:k2]...
//                    [--out report.json]
//   cmseq classify   --empirical --paths paths.csv [...]
//   cmseq fit        --cov C --direction D --out model.json [--no-enforce]
//   cmseq covariance --model M --out C   |   --paths paths.csv --out C
// CMSEQ_TOL overrides the default tolerance when --tol is absent.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace cmseq

#endif  // CMSEQ_CLI_H_
