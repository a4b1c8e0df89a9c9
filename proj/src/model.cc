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

#include "cmseq/model.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <random>
#include <sstream>
#include <thread>

#include "cmseq/characterize.h"
#include "cmseq/errors.h"

namespace cmseq {
namespace {

Eigen::Index off(int k, int d) { return static_cast<Eigen::Index>(k) * d; }

void require_block(const Matrix& m, int d, const char* field, int k) {
  if (m.rows() != d || m.cols() != d) {
    std::ostringstream msg;
    msg << field << "[" << k << "] must be " << d << "x" << d << ", got "
        << m.rows() << "x" << m.cols();
    throw ValidationError(msg.str());
  }
  if (!m.allFinite()) {
    std::ostringstream msg;
    msg << field << "[" << k << "] has a non-finite entry";
    throw ValidationError(msg.str());
  }
}

// Rows of x = T e, one d x (N+1)d block per time, built along the recursion
// in topological order (x_c first).
Matrix propagation_map(const CmModel& m) {
  const int n = m.horizon;
  const int d = m.dim;
  const Eigen::Index side = off(n + 1, d);
  Matrix t = Matrix::Zero(side, side);
  auto row = [&](int k) { return t.middleRows(off(k, d), d); };
  const int c = m.c();
  row(c).middleCols(off(c, d), d).setIdentity();
  if (m.direction == Direction::kLast) {
    row(0) = m.coupling[0] * row(n);
    row(0).middleCols(0, d) += Matrix::Identity(d, d);
  }
  for (int k = 1; k <= n; ++k) {
    if (k == c) continue;
    Matrix next = m.transition[static_cast<std::size_t>(k)] * row(k - 1) +
                  m.coupling[static_cast<std::size_t>(k)] * row(c);
    next.middleCols(off(k, d), d) += Matrix::Identity(d, d);
    row(k) = next;
  }
  return t;
}

void fnv_mix(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

void require_last(const CmModel& m, const char* op) {
  if (m.direction != Direction::kLast) {
    throw PreconditionError(std::string(op) +
                            " is defined for c = N (direction last) only");
  }
}

}  // namespace

CmModel CmModel::zeros(int horizon, int dim, Direction dir) {
  CmModel m;
  m.horizon = horizon;
  m.dim = dim;
  m.direction = dir;
  const auto n = static_cast<std::size_t>(std::max(horizon, 0) + 1);
  const Matrix z = Matrix::Zero(dim, dim);
  m.transition.assign(n, z);
  m.coupling.assign(n, z);
  m.noise_cov.assign(n, z);
  return m;
}

bool CmModel::uses_transition(int k) const {
  return k >= 1 && k <= horizon && k != c();
}

bool CmModel::uses_coupling(int k) const {
  if (direction == Direction::kLast) return k >= 0 && k <= horizon - 1;
  return k >= 1 && k <= horizon;
}

void validate(const CmModel& m) {
  if (m.horizon < 1 || m.dim < 1) {
    std::ostringstream msg;
    msg << "model needs N >= 1 and d >= 1, got N=" << m.horizon
        << ", d=" << m.dim;
    throw ValidationError(msg.str());
  }
  const auto n = static_cast<std::size_t>(m.horizon + 1);
  if (m.transition.size() != n || m.coupling.size() != n ||
      m.noise_cov.size() != n) {
    throw ValidationError("model block lists must each hold N+1 entries");
  }
  for (int k = 0; k <= m.horizon; ++k) {
    const auto i = static_cast<std::size_t>(k);
    require_block(m.transition[i], m.dim, "transition", k);
    require_block(m.coupling[i], m.dim, "coupling", k);
    require_block(m.noise_cov[i], m.dim, "noise_cov", k);
    if (!m.uses_transition(k) && !m.transition[i].isZero(0.0)) {
      std::ostringstream msg;
      msg << "transition[" << k << "] is not a model parameter and must be zero";
      throw ValidationError(msg.str());
    }
    if (!m.uses_coupling(k) && !m.coupling[i].isZero(0.0)) {
      std::ostringstream msg;
      msg << "coupling[" << k << "] is not a model parameter and must be zero";
      throw ValidationError(msg.str());
    }
    PsdCheck check = psd_project_check(m.noise_cov[i], BlockCovariance::kPsdTol);
    if (!check.is_psd) {
      std::ostringstream msg;
      msg << "noise_cov[" << k << "] is not positive semidefinite (most "
          << "negative eigenvalue " << check.min_eigenvalue << ")";
      throw IndefiniteError(msg.str(), check.min_eigenvalue);
    }
  }
}

CmModel with_initial_boundary(CmModel dynamics, const Matrix& final_from_initial,
                              const Matrix& initial_cov,
                              const Matrix& final_noise_cov) {
  require_last(dynamics, "with_initial_boundary");
  const int d = dynamics.dim;
  require_block(final_from_initial, d, "final_from_initial", dynamics.horizon);
  require_block(initial_cov, d, "initial_cov", 0);
  require_block(final_noise_cov, d, "final_noise_cov", dynamics.horizon);
  const Matrix q0 = symmetrize(initial_cov);
  const Matrix cross_0n = q0 * final_from_initial.transpose();
  const Matrix cov_n = symmetrize(final_from_initial * cross_0n +
                                  symmetrize(final_noise_cov));
  const double scale = std::max({q0.norm(), cov_n.norm(), 1.0});
  const Matrix gain = cross_0n * mp_inverse_scaled(cov_n, kDefaultPinvTol, scale);
  const auto n = static_cast<std::size_t>(dynamics.horizon);
  dynamics.coupling[0] = gain;
  dynamics.noise_cov[n] = cov_n;
  dynamics.noise_cov[0] =
      clip_to_psd(q0 - gain * cross_0n.transpose(), 1e-9 * scale);
  validate(dynamics);
  return dynamics;
}

Matrix assemble_g(const CmModel& m) {
  validate(m);
  const int n = m.horizon;
  const int d = m.dim;
  const int c = m.c();
  Matrix g = Matrix::Identity(off(n + 1, d), off(n + 1, d));
  if (m.direction == Direction::kLast) {
    g.block(0, off(n, d), d, d) -= m.coupling[0];
  }
  for (int k = 1; k <= n; ++k) {
    if (k == c) continue;
    const auto i = static_cast<std::size_t>(k);
    g.block(off(k, d), off(k - 1, d), d, d) -= m.transition[i];
    g.block(off(k, d), off(c, d), d, d) -= m.coupling[i];
  }
  return g;
}

BlockCovariance covariance_of(const CmModel& m) {
  validate(m);
  const int d = m.dim;
  const Matrix t = propagation_map(m);
  Matrix weighted(t.rows(), t.cols());
  for (int k = 0; k <= m.horizon; ++k) {
    weighted.middleCols(off(k, d), d) =
        t.middleCols(off(k, d), d) *
        symmetrize(m.noise_cov[static_cast<std::size_t>(k)]);
  }
  return BlockCovariance(m.horizon, d, weighted * t.transpose());
}

std::uint64_t model_fingerprint(const CmModel& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::int32_t header[3] = {m.horizon, m.dim,
                                  m.direction == Direction::kLast ? 1 : 0};
  fnv_mix(h, header, sizeof(header));
  for (const auto* blocks : {&m.transition, &m.coupling, &m.noise_cov}) {
    for (const Matrix& b : *blocks) {
      for (Eigen::Index r = 0; r < b.rows(); ++r) {
        for (Eigen::Index col = 0; col < b.cols(); ++col) {
          const auto bits = std::bit_cast<std::uint64_t>(b(r, col));
          fnv_mix(h, &bits, sizeof(bits));
        }
      }
    }
  }
  return h;
}

TrajectoryEnsemble sample(const CmModel& m, Eigen::Index count,
                          std::uint64_t seed, unsigned threads) {
  validate(m);
  if (count < 1) throw ValidationError("sample count must be >= 1");
  const int n = m.horizon;
  const int d = m.dim;
  const int c = m.c();

  std::vector<Matrix> factor;
  factor.reserve(static_cast<std::size_t>(n + 1));
  for (const Matrix& g : m.noise_cov) factor.push_back(psd_factor(g).base);

  TrajectoryEnsemble out;
  out.horizon = n;
  out.dim = d;
  out.seed = seed;
  out.model_hash = model_fingerprint(m);
  out.paths.resize(count, off(n + 1, d));

  auto run = [&](Eigen::Index begin, Eigen::Index end) {
    Vector x(off(n + 1, d));
    for (Eigen::Index p = begin; p < end; ++p) {
      std::normal_distribution<double> normal(0.0, 1.0);
      const auto path = static_cast<std::uint64_t>(p);
      std::seed_seq seq{static_cast<std::uint32_t>(seed),
                        static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(path),
                        static_cast<std::uint32_t>(path >> 32)};
      std::mt19937_64 rng(seq);
      auto noise = [&](int k) {
        const Matrix& f = factor[static_cast<std::size_t>(k)];
        Vector z(f.cols());
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
        return Vector(f * z);
      };
      auto state = [&](int k) { return x.segment(off(k, d), d); };

      state(c) = noise(c);
      if (m.direction == Direction::kLast) {
        state(0) = m.coupling[0] * state(n) + noise(0);
      }
      for (int k = 1; k <= n; ++k) {
        if (k == c) continue;
        const auto i = static_cast<std::size_t>(k);
        Vector next = m.transition[i] * state(k - 1) + m.coupling[i] * state(c);
        if (factor[i].cols() > 0) next += noise(k);
        state(k) = next;
      }
      out.paths.row(p) = x.transpose();
    }
  };

  unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(
                             workers, static_cast<unsigned>(
                                          std::max<Eigen::Index>(1, count / 1024))));
  if (workers == 1) {
    run(0, count);
    return out;
  }
  std::vector<std::jthread> pool;
  const Eigen::Index chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const Eigen::Index begin = chunk * w;
    const Eigen::Index end = std::min(count, begin + chunk);
    if (begin < end) pool.emplace_back(run, begin, end);
  }
  pool.clear();
  return out;
}

BlockCovariance empirical_covariance(const TrajectoryEnsemble& e) {
  if (e.count() < 1) throw ValidationError("empty trajectory ensemble");
  Matrix moment = e.paths.transpose() * e.paths;
  moment /= static_cast<double>(e.count());
  return BlockCovariance(e.horizon, e.dim, moment);
}

SingularityReport singularity_report(const CmModel& m, double tol) {
  require_last(m, "singularity_report");
  const BlockCovariance p = covariance_of(m);
  const double scale = 1.0 + p.frobenius_norm();
  const int n = m.horizon;
  SingularityReport out;
  for (int k = 1; k <= n - 1; ++k) {
    const Matrix& g = m.noise_cov[static_cast<std::size_t>(k)];
    SingularityEntry e;
    e.time = k;
    e.rank_noise = numerical_rank(g, kDefaultPinvTol);
    e.noise_degenerate = g.norm() <= tol * scale;
    const std::vector<int> given{k - 1, n};
    const Matrix cross = p.cross(k, given);
    const Matrix explained =
        cross *
        mp_inverse_scaled(p.gather(given), kConditioningPinvTol,
                          p.frobenius_norm()) *
        cross.transpose();
    e.state_as_zero = e.noise_degenerate && explained.norm() <= tol * scale;
    out.entries.push_back(e);
  }
  return out;
}

std::vector<bool> boundary_nonsingular(const CmModel& m, double tol) {
  require_last(m, "boundary_nonsingular");
  const BlockCovariance p = covariance_of(m);
  const int n = m.horizon;
  std::vector<bool> out;
  for (int k = 0; k <= n - 2; ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(p.gather({k, n}),
                                              Eigen::EigenvaluesOnly);
    const Vector& ev = eig.eigenvalues();
    const double largest = ev.maxCoeff();
    out.push_back(largest > 0.0 && ev.minCoeff() > tol * largest);
  }
  return out;
}

ClassificationReport is_reciprocal_model(const CmModel& m, double rel_tol) {
  const BlockCovariance p = covariance_of(m);
  ClassificationReport r = reciprocal_identity(
      p,
      m.direction == Direction::kLast ? OutsideAnchor::kBelow
                                      : OutsideAnchor::kAbove,
      rel_tol);
  r.property = "reciprocal_model";
  return r;
}

}  // namespace cmseq
