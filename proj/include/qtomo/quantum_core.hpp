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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qtomo {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

/// Pure state |c> of a d-level system. Always normalized; dim >= 2.
class StateVector {
 public:
  /// Normalizes `amps`. Throws InvalidArgument for dim < 2 or a zero vector.
  explicit StateVector(CVector amps);

  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amps() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  CVector amps_;
};

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityMatrix {
 public:
  /// Validates the invariants (hermiticity 1e-12, trace 1e-12, eigenvalues >= -1e-10).
  explicit DensityMatrix(CMatrix mat);

  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
  const CMatrix& mat() const { return mat_; }

 private:
  CMatrix mat_;
};

/// Operator-sum channel rho -> sum_k E_k rho E_k^+. Trace preserving within 1e-10.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix> ops);

  static KrausChannel identity(std::size_t dim);
  /// One-element channel {U}; U must be unitary within 1e-10.
  static KrausChannel unitary(const CMatrix& u);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ops_.size(); }
  const std::vector<CMatrix>& ops() const { return ops_; }

  /// max |sum_k E_k^+ E_k - I|
  double completeness_deviation() const;

 private:
  std::size_t dim_;
  std::vector<CMatrix> ops_;
};

using AnyState = std::variant<StateVector, DensityMatrix>;

DensityMatrix density_from_pure(const StateVector& c);

/// Dense matrix of either representation.
CMatrix density_of(const AnyState& state);
std::size_t dim_of(const AnyState& state);

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);

/// Channel that applies `first`, then `second`: {B_k A_j}.
KrausChannel compose_channels(const KrausChannel& first, const KrausChannel& second);

/// Kronecker product of per-site channels, site 0 being the most significant factor.
KrausChannel tensor_channels(std::span<const KrausChannel> per_site);

/// |<c_th|c_est>|^2, or <c_th|rho|c_th> for a mixed estimate.
double fidelity(const StateVector& c_th, const StateVector& estimate);
double fidelity(const StateVector& c_th, const DensityMatrix& estimate);
double fidelity(const StateVector& c_th, const AnyState& estimate);

// Small helpers shared by the other modules.
double max_abs(const CMatrix& m);
double hermiticity_deviation(const CMatrix& m);
bool is_unitary(const CMatrix& u, double tol = 1e-10);
CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace qtomo
