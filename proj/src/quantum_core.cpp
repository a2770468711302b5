// Copyright 2026 The qtomo Authors
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

#include "qtomo/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtomo/error.hpp"

namespace qtomo {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const CMatrix& m) {
  return max_abs(m - m.adjoint());
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())) < tol;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector::StateVector(CVector amps) : amps_(std::move(amps)) {
  if (amps_.size() < 2) throw InvalidArgument("StateVector: dimension must be at least 2");
  const double norm = amps_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("StateVector: amplitudes must be finite and not all zero");
  }
  amps_ /= norm;
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument("StateVector::basis: index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(CMatrix mat) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols()) throw DimensionError("DensityMatrix: matrix must be square");
  if (mat_.rows() < 2) throw InvalidArgument("DensityMatrix: dimension must be at least 2");
  if (hermiticity_deviation(mat_) >= 1e-12) {
    throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(mat_.trace() - Complex(1.0)) >= 1e-12) {
    throw InvalidArgument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidArgument("DensityMatrix: matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(dim));
}

KrausChannel::KrausChannel(std::vector<CMatrix> ops) : dim_(0), ops_(std::move(ops)) {
  if (ops_.empty()) throw InvalidArgument("KrausChannel: at least one Kraus operator required");
  dim_ = static_cast<std::size_t>(ops_.front().rows());
  for (const auto& e : ops_) {
    if (e.rows() != e.cols() || static_cast<std::size_t>(e.rows()) != dim_) {
      throw DimensionError("KrausChannel: operators must be square and of equal size");
    }
  }
  if (completeness_deviation() >= 1e-10) {
    throw InvalidArgument("KrausChannel: operators are not trace preserving");
  }
}

KrausChannel KrausChannel::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return KrausChannel({CMatrix::Identity(n, n)});
}

KrausChannel KrausChannel::unitary(const CMatrix& u) {
  if (!is_unitary(u)) throw InvalidArgument("KrausChannel::unitary: matrix is not unitary");
  return KrausChannel({u});
}

double KrausChannel::completeness_deviation() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& e : ops_) sum.noalias() += e.adjoint() * e;
  return max_abs(sum - CMatrix::Identity(n, n));
}

DensityMatrix density_from_pure(const StateVector& c) {
  CMatrix rho = c.amps() * c.amps().adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

CMatrix density_of(const AnyState& state) {
  if (const auto* c = std::get_if<StateVector>(&state)) return c->amps() * c->amps().adjoint();
  return std::get<DensityMatrix>(state).mat();
}

std::size_t dim_of(const AnyState& state) {
  return std::visit([](const auto& s) { return s.dim(); }, state);
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  require_same_dim(ch.dim(), rho.dim(), "apply_channel");
  const auto n = static_cast<Eigen::Index>(rho.dim());
  CMatrix out = CMatrix::Zero(n, n);
  for (const auto& e : ch.ops()) out.noalias() += e * rho.mat() * e.adjoint();
  out = 0.5 * (out + out.adjoint());
  // Rounding can drift the trace by a few ulps per Kraus term.
  out /= out.trace().real();
  return DensityMatrix(std::move(out));
}

KrausChannel compose_channels(const KrausChannel& first, const KrausChannel& second) {
  require_same_dim(first.dim(), second.dim(), "compose_channels");
  std::vector<CMatrix> ops;
  ops.reserve(first.size() * second.size());
  for (const auto& a : first.ops()) {
    for (const auto& b : second.ops()) ops.push_back(b * a);
  }
  return KrausChannel(std::move(ops));
}

KrausChannel tensor_channels(std::span<const KrausChannel> per_site) {
  if (per_site.empty()) throw InvalidArgument("tensor_channels: empty channel list");
  std::vector<CMatrix> ops = per_site.front().ops();
  for (std::size_t site = 1; site < per_site.size(); ++site) {
    std::vector<CMatrix> next;
    next.reserve(ops.size() * per_site[site].size());
    for (const auto& a : ops) {
      for (const auto& b : per_site[site].ops()) next.push_back(kron(a, b));
    }
    ops = std::move(next);
  }
  return KrausChannel(std::move(ops));
}

double fidelity(const StateVector& c_th, const StateVector& estimate) {
  require_same_dim(c_th.dim(), estimate.dim(), "fidelity");
  return std::min(1.0, std::norm(c_th.amps().dot(estimate.amps())));
}

double fidelity(const StateVector& c_th, const DensityMatrix& estimate) {
  require_same_dim(c_th.dim(), estimate.dim(), "fidelity");
  const double f = (c_th.amps().adjoint() * estimate.mat() * c_th.amps())(0).real();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const StateVector& c_th, const AnyState& estimate) {
  return std::visit([&](const auto& e) { return fidelity(c_th, e); }, estimate);
}

}  // namespace qtomo
