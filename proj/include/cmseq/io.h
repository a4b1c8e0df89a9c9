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

#ifndef CMSEQ_IO_H_
#define CMSEQ_IO_H_

// File formats.
//
// Model (JSON):
//   {"N": 2, "d": 1, "c": "last",
//    "transition": {"1": [...]}, "coupling": {"0": [...], "1": [...]},
//    "noise_cov": {"0": [...], "1": [...], "2": [...]}}
// Each block is a flat row-major array of d*d numbers keyed by its time
// index. Missing transition/coupling entries are zero; every noise_cov entry
// is required. With "boundary": "initial" (c = last only) the file uses
// x_0 = e_0, x_N = G_{N,0} x_0 + e_N instead: coupling["N"] holds G_{N,0},
// noise_cov["0"] and noise_cov["N"] the covariances of that form. It is
// converted to the canonical x_N = e_N form on load.
//
// Covariance (JSON): {"n": N, "d": d, "data": [(N+1)d * (N+1)d numbers,
// row-major]}.
//
// Trajectories (CSV): header "path_id,k,x_1,...,x_d", one row per
// (path, time), paths in order and k = 0..N within each path.
//
// Numbers are written in the shortest decimal form that parses back to the
// same double, so parse(serialize(v)) == v bit for bit.

#include <iosfwd>
#include <string>
#include <string_view>

#include "cmseq/block_covariance.h"
#include "cmseq/model.h"
#include "cmseq/report.h"

namespace cmseq {

std::string serialize_model(const CmModel& model);
CmModel parse_model(std::string_view text);

std::string serialize_covariance(const BlockCovariance& c);
BlockCovariance parse_covariance(std::string_view text);

void write_trajectories(std::ostream& out, const TrajectoryEnsemble& e);
TrajectoryEnsemble read_trajectories(std::istream& in);

std::string serialize_report(const ClassificationReport& r);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace cmseq

#endif  // CMSEQ_IO_H_
