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

#include <doctest.h>

#include "cmseq/characterize.h"
#include "cmseq/decompose.h"
#include "cmseq/errors.h"
#include "cmseq/fit.h"
#include "cmseq/model.h"
#include "test_support.h"

namespace cmseq {
namespace {

using testing::random_cm_model;
using testing::random_markov_covariance;
using testing::random_matrix;
using testing::Rng;

TEST_CASE("build_cm_covariance fixed cases") {
  const int d = 2, blocks = 4;
  const BlockCovariance id(blocks - 1, d, Matrix::Identity(blocks * d, blocks * d));
  const BlockCovariance c = build_cm_covariance(
      id, Matrix::Zero(blocks * d, d), Matrix::Identity(d, d), Direction::kLast);
  CHECK(c.horizon() == blocks);
  CHECK(max_abs(c.matrix() - Matrix::Identity(10, 10)) == 0.0);
  CHECK(is_cm(c, Direction::kLast).passed);

  Rng rng(61);
  const BlockCovariance b1 = random_markov_covariance(rng, blocks - 1, d);
  Matrix dm(2, 2);
  dm << 2.0, 0.5, 0.5, 1.0;
  const BlockCovariance diag =
      build_cm_covariance(b1, Matrix::Zero(blocks * d, d), dm, Direction::kLast);
  CHECK(max_abs(diag.matrix().topLeftCorner(8, 8) - b1.matrix()) == 0.0);
  CHECK(max_abs(diag.block(4, 4) - dm) == 0.0);
  CHECK(diag.matrix().topRightCorner(8, 2).isZero(0.0));
  CHECK(is_cm(diag, Direction::kLast).passed);
}

TEST_CASE("build_cm_covariance output is CM in its direction") {
  Rng rng(62);
  for (int t = 0; t < 60; ++t) {
    const int blocks = std::uniform_int_distribution<int>(1, 6)(rng);
    const int d = std::uniform_int_distribution<int>(1, 2)(rng);
    const Direction dir = t % 2 ? Direction::kFirst : Direction::kLast;
    const BlockCovariance b1 = random_markov_covariance(rng, blocks - 1, d);
    const Matrix s = random_matrix(rng, blocks * d, d);
    const Matrix dm =
        testing::random_noise(rng, d, testing::random_noise_kind(rng));
    const BlockCovariance c = build_cm_covariance(b1, s, dm, dir);
    CHECK(is_cm(c, dir, 1e-9).passed);

    // build -> fit -> covariance_of reproduces the build.
    const BlockCovariance back = covariance_of(fit_cm(c, dir));
    CHECK((back.matrix() - c.matrix()).norm() <= 1e-8 * c.matrix().norm());
  }
}

TEST_CASE("build_cm_covariance rejects bad input") {
  Rng rng(63);
  const BlockCovariance b1 = random_markov_covariance(rng, 3, 2);
  const Matrix s = Matrix::Zero(8, 2);
  CHECK_THROWS_AS(build_cm_covariance(b1, Matrix::Zero(6, 2), Matrix::Identity(2, 2),
                                      Direction::kLast),
                  ValidationError);
  CHECK_THROWS_AS(
      build_cm_covariance(b1, s, Matrix::Identity(3, 3), Direction::kLast),
      ValidationError);
  Matrix indefinite(2, 2);
  indefinite << 1, 0, 0, -1;
  CHECK_THROWS_AS(build_cm_covariance(b1, s, indefinite, Direction::kLast),
                  IndefiniteError);
  const BlockCovariance dense = testing::random_dense_covariance(rng, 3, 2);
  CHECK_THROWS_AS(
      build_cm_covariance(dense, s, Matrix::Identity(2, 2), Direction::kLast),
      PreconditionError);
}

TEST_CASE("markov_part_check") {
  Rng rng(64);
  for (Direction dir : {Direction::kLast, Direction::kFirst}) {
    const BlockCovariance c =
        covariance_of(random_cm_model(rng, 5, 2, dir, {0.6, 1.0, false}));
    CHECK(markov_part_check(c, canonical_gamma(c, dir), dir));

    std::vector<Matrix> zero(6, Matrix::Zero(2, 2));
    const MarkovPartCheck r = markov_part_report(c, zero, dir);
    CHECK_FALSE(r.passed);
    CHECK(r.worst_cross > 1e-3);
  }

  const BlockCovariance b1 = random_markov_covariance(rng, 3, 2);
  const BlockCovariance diag = build_cm_covariance(
      b1, Matrix::Zero(8, 2), Matrix::Identity(2, 2), Direction::kLast);
  CHECK(markov_part_check(diag, std::vector<Matrix>(5, Matrix::Zero(2, 2)),
                          Direction::kLast));

  CHECK_THROWS_AS(markov_part_check(diag, std::vector<Matrix>(3, Matrix::Zero(2, 2)),
                                    Direction::kLast),
                  ValidationError);
}

TEST_CASE("canonical decomposition exists for every CM covariance") {
  Rng rng(65);
  for (int t = 0; t < 60; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const int d = std::uniform_int_distribution<int>(1, 3)(rng);
    const Direction dir = t % 2 ? Direction::kFirst : Direction::kLast;
    const BlockCovariance c = covariance_of(random_cm_model(rng, n, d, dir));
    const MarkovPartCheck r = markov_part_report(c, canonical_gamma(c, dir), dir);
    CHECK_MESSAGE(r.passed, "cross " << r.worst_cross << " markov "
                                     << r.markov.normalized_residual());
  }
}

}  // namespace
}  // namespace cmseq
