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
#include "cmseq/errors.h"
#include "cmseq/model.h"
#include "test_support.h"

namespace cmseq {
namespace {

using testing::dense_model_covariance;
using testing::random_cm_model;
using testing::random_matrix;
using testing::Rng;

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST_CASE("assemble_g block pattern") {
  CmModel trivial = CmModel::zeros(1, 2, Direction::kLast);
  CHECK(max_abs(assemble_g(trivial) - Matrix::Identity(4, 4)) == 0.0);

  CmModel zeros = CmModel::zeros(2, 2, Direction::kLast);
  CHECK(max_abs(assemble_g(zeros) - Matrix::Identity(6, 6)) == 0.0);

  const Matrix a = mat2(1, 2, 3, 4), b = mat2(5, 6, 7, 8), d = mat2(9, 10, 11, 12);
  CmModel m = CmModel::zeros(2, 2, Direction::kLast);
  m.transition[1] = a;
  m.coupling[1] = b;
  m.coupling[0] = d;
  const Matrix g = assemble_g(m);
  const Matrix i2 = Matrix::Identity(2, 2), z = Matrix::Zero(2, 2);
  Matrix expected(6, 6);
  expected << i2, z, -d,
              -a, i2, -b,
              z, z, i2;
  CHECK(max_abs(g - expected) == 0.0);
}

TEST_CASE("assemble_g for c = first sums the two x_0 coefficients at k = 1") {
  const Matrix a = mat2(1, 0, 0, 2);
  CmModel m = CmModel::zeros(3, 2, Direction::kFirst);
  m.transition[1] = a;
  m.coupling[1] = a;
  m.transition[2] = mat2(0, 1, 1, 0);
  m.coupling[2] = mat2(3, 0, 0, 3);
  m.transition[3] = mat2(1, 1, 0, 1);
  m.coupling[3] = mat2(0, 0, 1, 0);
  const Matrix g = assemble_g(m);
  CHECK(max_abs(g.block(2, 0, 2, 2) + 2.0 * a) == 0.0);
  CHECK(max_abs(g.block(4, 0, 2, 2) + m.coupling[2]) == 0.0);
  CHECK(max_abs(g.block(4, 2, 2, 2) + m.transition[2]) == 0.0);
  CHECK(max_abs(g.block(6, 4, 2, 2) + m.transition[3]) == 0.0);
  CHECK(max_abs(g.block(6, 0, 2, 2) + m.coupling[3]) == 0.0);
  CHECK(max_abs(g.topRows(2) - Matrix::Identity(8, 8).topRows(2)) == 0.0);
}

TEST_CASE("covariance_of fixed cases") {
  CmModel white = CmModel::zeros(3, 2, Direction::kLast);
  for (auto& g : white.noise_cov) g = Matrix::Identity(2, 2);
  CHECK(max_abs(covariance_of(white).matrix() - Matrix::Identity(8, 8)) == 0.0);

  CmModel zero = CmModel::zeros(3, 2, Direction::kFirst);
  zero.transition[2] = mat2(1, 1, 1, 1);
  CHECK(max_abs(covariance_of(zero).matrix()) == 0.0);

  // x_1 = e_1, x_0 = A x_1 + e_0: C_1 = G_1, C_{0,1} = A G_1,
  // C_0 = G_0 + A G_1 A^T.
  const Matrix a = mat2(0.5, -1.0, 2.0, 0.25);
  const Matrix g0 = mat2(1.0, 0.2, 0.2, 0.5);
  const Matrix g1 = mat2(2.0, -0.3, -0.3, 1.0);
  CmModel one = CmModel::zeros(1, 2, Direction::kLast);
  one.coupling[0] = a;
  one.noise_cov[0] = g0;
  one.noise_cov[1] = g1;
  BlockCovariance c = covariance_of(one);
  CHECK(max_abs(c.block(1, 1) - g1) < 1e-15);
  CHECK(max_abs(c.block(0, 1) - a * g1) < 1e-15);
  CHECK(max_abs(c.block(0, 0) - (g0 + a * g1 * a.transpose())) < 1e-14);
}

TEST_CASE("covariance_of matches dense inversion of script-G") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int d = std::uniform_int_distribution<int>(1, 3)(rng);
    const Direction dir = trial % 2 ? Direction::kFirst : Direction::kLast;
    const CmModel m = random_cm_model(rng, n, d, dir);
    const Matrix dense = dense_model_covariance(m);
    const BlockCovariance c = covariance_of(m);
    CHECK(max_abs(c.matrix() - dense) <= 1e-12 * (1.0 + dense.norm()));
    CHECK(max_abs(c.matrix() - c.matrix().transpose()) == 0.0);
    CHECK(psd_project_check(c.matrix(), 1e-12).is_psd);
  }
}

TEST_CASE("covariance_of passes the CM characterization in its direction") {
  Rng rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 7)(rng);
    const int d = std::uniform_int_distribution<int>(1, 3)(rng);
    const Direction dir = trial % 2 ? Direction::kFirst : Direction::kLast;
    const ClassificationReport r =
        is_cm(covariance_of(random_cm_model(rng, n, d, dir)), dir);
    CHECK_MESSAGE(r.passed, "normalized residual " << r.normalized_residual());
  }
}

TEST_CASE("initial-boundary form converts to the canonical form") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const int d = std::uniform_int_distribution<int>(1, 3)(rng);
    CmModel dyn = random_cm_model(rng, n, d, Direction::kLast);
    const Matrix f = random_matrix(rng, d, d, 0.8);
    const Matrix q0 = testing::random_noise(rng, d, testing::random_noise_kind(rng));
    const Matrix qn = testing::random_noise(rng, d, testing::random_noise_kind(rng));

    // Oracle: script-G of x_0 = e_0, x_N = F x_0 + e_N, same dynamics.
    Matrix g = Matrix::Identity((n + 1) * d, (n + 1) * d);
    g.block(n * d, 0, d, d) = -f;
    for (int k = 1; k < n; ++k) {
      g.block(k * d, (k - 1) * d, d, d) -= dyn.transition[static_cast<std::size_t>(k)];
      g.block(k * d, n * d, d, d) -= dyn.coupling[static_cast<std::size_t>(k)];
    }
    Matrix noise = Matrix::Zero(g.rows(), g.cols());
    for (int k = 1; k < n; ++k) {
      noise.block(k * d, k * d, d, d) = dyn.noise_cov[static_cast<std::size_t>(k)];
    }
    noise.block(0, 0, d, d) = q0;
    noise.block(n * d, n * d, d, d) = qn;
    const Matrix gi = g.inverse();
    const Matrix expected = gi * noise * gi.transpose();

    const CmModel canon = with_initial_boundary(dyn, f, q0, qn);
    CHECK(max_abs(covariance_of(canon).matrix() - expected) <=
          1e-9 * (1.0 + expected.norm()));
  }
}

TEST_CASE("validate rejects malformed models") {
  CmModel m = CmModel::zeros(3, 2, Direction::kLast);
  CHECK_NOTHROW(validate(m));

  CmModel unused = m;
  unused.coupling[3] = Matrix::Identity(2, 2);  // G_{N,N} is not a parameter
  CHECK_THROWS_AS(validate(unused), ValidationError);

  CmModel bad_shape = m;
  bad_shape.transition[1] = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(validate(bad_shape), ValidationError);

  CmModel indefinite = m;
  indefinite.noise_cov[2] = mat2(1, 0, 0, -1);
  CHECK_THROWS_AS(validate(indefinite), IndefiniteError);

  CmModel nan = m;
  nan.coupling[1](0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate(nan), ValidationError);

  CmModel short_lists = m;
  short_lists.noise_cov.pop_back();
  CHECK_THROWS_AS(validate(short_lists), ValidationError);

  CHECK_THROWS_AS(validate(CmModel::zeros(0, 1, Direction::kLast)), ValidationError);
}

TEST_CASE("sample: degenerate noise and determinism") {
  Rng rng(24);
  CmModel m = random_cm_model(rng, 5, 2, Direction::kLast);

  CmModel silent = m;
  for (auto& g : silent.noise_cov) g.setZero();
  CHECK(max_abs(sample(silent, 100, 1).paths) == 0.0);

  CmModel fixed = m;
  fixed.noise_cov[5].setZero();
  TrajectoryEnsemble e = sample(fixed, 1000, 2);
  CHECK(max_abs(e.paths.rightCols(2)) == 0.0);

  TrajectoryEnsemble a = sample(m, 5000, 77, 1);
  TrajectoryEnsemble b = sample(m, 5000, 77, 3);
  CHECK(a.paths == b.paths);
  CHECK(a.model_hash == model_fingerprint(m));
  CHECK(a.seed == 77);
  CHECK_FALSE(sample(m, 5000, 78).paths == a.paths);

  CHECK_THROWS_AS(sample(m, 0, 1), ValidationError);
}

TEST_CASE("sample: zero noise makes x_k an exact function of (x_{k-1}, x_c)") {
  Rng rng(25);
  for (Direction dir : {Direction::kLast, Direction::kFirst}) {
    CmModel m = random_cm_model(rng, 6, 2, dir, {0.6, 0.6, false});
    m.noise_cov[3].setZero();
    const int c = m.c();
    TrajectoryEnsemble e = sample(m, 2000, 5);
    double worst = 0.0;
    for (Eigen::Index p = 0; p < e.count(); ++p) {
      const Vector predicted =
          m.transition[3] * e.state(p, 2) + m.coupling[3] * e.state(p, c);
      worst = std::max(worst, (e.state(p, 3) - predicted).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("sample: Monte Carlo covariance matches covariance_of") {
  Rng rng(26);
  for (Direction dir : {Direction::kLast, Direction::kFirst}) {
    const CmModel m = random_cm_model(rng, 4, 2, dir);
    const BlockCovariance truth = covariance_of(m);
    const BlockCovariance est = empirical_covariance(sample(m, 200000, 9));
    CHECK(testing::relative_max_error(est.matrix(), truth.matrix()) <= 5e-2);
  }
}

TEST_CASE("singularity_report") {
  CmModel zero = CmModel::zeros(4, 2, Direction::kLast);
  SingularityReport all_zero = singularity_report(zero);
  REQUIRE(all_zero.entries.size() == 3);
  for (const auto& e : all_zero.entries) {
    CHECK(e.noise_degenerate);
    CHECK(e.state_as_zero);
    CHECK(e.rank_noise == 0);
  }

  Rng rng(27);
  CmModel full = random_cm_model(rng, 4, 2, Direction::kLast, {0.6, 0.6, false});
  for (const auto& e : singularity_report(full).entries) {
    CHECK_FALSE(e.noise_degenerate);
    CHECK_FALSE(e.state_as_zero);
    CHECK(e.rank_noise == 2);
  }

  // Cov(e_2) = 0 but x_1 has nonsingular covariance and G_{2,1} != 0, so the
  // explained part [C_{2,1} C_{2,N}] Cov(y_1)^+ [..]^T equals
  // G_{2,1} C_1 G_{2,1}^T + ... which is nonzero.
  CmModel partial = full;
  partial.noise_cov[2].setZero();
  const auto entries = singularity_report(partial).entries;
  CHECK(entries[1].time == 2);
  CHECK(entries[1].noise_degenerate);
  CHECK_FALSE(entries[1].state_as_zero);
  CHECK(entries[1].rank_noise == 0);
  const BlockCovariance p = covariance_of(partial);
  CHECK(p.block(2, 2).norm() > 1e-3);

  // Zero noise and zero coefficients at k = 2 force x_2 = 0.
  CmModel pinned = partial;
  pinned.transition[2].setZero();
  pinned.coupling[2].setZero();
  const auto pinned_entries = singularity_report(pinned).entries;
  CHECK(pinned_entries[1].state_as_zero);
  CHECK_FALSE(pinned_entries[0].state_as_zero);

  CHECK_THROWS_AS(singularity_report(CmModel::zeros(3, 1, Direction::kFirst)),
                  PreconditionError);
}

TEST_CASE("boundary_nonsingular") {
  CmModel white = CmModel::zeros(4, 2, Direction::kLast);
  for (auto& g : white.noise_cov) g = Matrix::Identity(2, 2);
  for (bool f : boundary_nonsingular(white)) CHECK(f);
  CHECK(boundary_nonsingular(white).size() == 3);

  CmModel dest = white;
  dest.noise_cov[4].setZero();
  for (bool f : boundary_nonsingular(dest)) CHECK_FALSE(f);

  Rng rng(28);
  const CmModel m = random_cm_model(rng, 4, 2, Direction::kLast, {0.6, 0.6, false});
  const BlockCovariance p = covariance_of(m);
  const auto flags = boundary_nonsingular(m);
  for (int k = 0; k <= 2; ++k) {
    Matrix joint(4, 4);
    joint << p.block(k, k), p.block(k, 4), p.block(4, k), p.block(4, 4);
    CHECK(joint.determinant() > 1e-8);
    CHECK(flags[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("is_reciprocal_model") {
  CmModel white = CmModel::zeros(5, 2, Direction::kLast);
  for (auto& g : white.noise_cov) g = Matrix::Identity(2, 2);
  CHECK(is_reciprocal_model(white).passed);
  white.direction = Direction::kFirst;
  CHECK(is_reciprocal_model(white).passed);

  Rng rng(29);
  CmModel dense = random_cm_model(rng, 5, 1, Direction::kLast, {0.6, 1.0, false});
  const ClassificationReport r = is_reciprocal_model(dense);
  CHECK_FALSE(r.passed);
  REQUIRE(r.worst_indices.size() == 4);
  const int i = r.worst_indices[0], j = r.worst_indices[1],
            k = r.worst_indices[2], l = r.worst_indices[3];
  CHECK(l < i);
  CHECK(i < j);
  CHECK(j < k);
  CHECK(r.normalized_residual() > 1e-4);
}

TEST_CASE("model_fingerprint changes with any parameter bit") {
  CmModel m = CmModel::zeros(2, 1, Direction::kLast);
  const auto base = model_fingerprint(m);
  CmModel n = m;
  n.noise_cov[1](0, 0) = 1e-300;
  CHECK(model_fingerprint(n) != base);
  n = m;
  n.direction = Direction::kFirst;
  CHECK(model_fingerprint(n) != base);
}

}  // namespace
}  // namespace cmseq
