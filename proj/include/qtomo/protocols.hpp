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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qtomo/quantum_core.hpp"

namespace qtomo {

/// One row of an instrumental matrix: measurement operator Lambda_j and the
/// setting it belongs to. For rank-1 rows `projector` holds the ket
/// |x_j> = X_j^+ with Lambda_j = |x_j><x_j|.
struct ProtocolRow {
  CMatrix op;
  std::size_t setting = 0;
  std::optional<CVector> projector;
};

/// A protocol whose operators decompose unity (sum_j Lambda_j = I) and whose
/// settings each carry an equal share I / n_settings.
class MeasurementProtocol {
 public:
  /// Validates every invariant; throws InvalidArgument on violation.
  MeasurementProtocol(std::size_t dim, std::size_t n_settings, std::vector<ProtocolRow> rows);

  /// Divides all operators (and projectors) so that sum_j Lambda_j = I before validating.
  static MeasurementProtocol renormalized(std::size_t dim, std::size_t n_settings,
                                          std::vector<ProtocolRow> rows);

  std::size_t dim() const { return dim_; }
  std::size_t n_settings() const { return n_settings_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<ProtocolRow>& rows() const { return rows_; }
  const ProtocolRow& row(std::size_t j) const { return rows_[j]; }

  /// Row indices belonging to `setting`, in protocol order.
  const std::vector<std::size_t>& setting_rows(std::size_t setting) const {
    return setting_rows_[setting];
  }

  /// Unitary U whose b-th row is the normalized bra of the setting's b-th row,
  /// so that row b measures U^+ |b><b| U. Empty unless the setting consists of
  /// `dim` orthonormal projectors.
  std::optional<CMatrix> setting_basis(std::size_t setting) const;

 private:
  std::size_t dim_;
  std::size_t n_settings_;
  std::vector<ProtocolRow> rows_;
  std::vector<std::vector<std::size_t>> setting_rows_;
};

inline constexpr std::size_t kDefaultMaxProtocolDim = 16;

/// Tensor products of per-qubit Pauli eigenbases, settings ordered
/// lexicographically with z < x < y and qubit 0 most significant.
MeasurementProtocol pauli_protocol(std::size_t n_qubits,
                                   std::size_t max_dim = kDefaultMaxProtocolDim);

/// Complete set of dim+1 mutually unbiased bases; dim prime or 2^m, dim <= 16.
/// Basis 0 is the computational basis.
MeasurementProtocol mub_protocol(std::size_t dim);

/// lambda_j = Tr(Lambda_j rho), clamped at 0 from below.
RVector probabilities(const MeasurementProtocol& p, const AnyState& state);
RVector probabilities(const MeasurementProtocol& p, const CMatrix& rho);

/// max |sum_j Lambda_j - I|
double verify_unity_decomposition(const MeasurementProtocol& p);
double verify_unity_decomposition(std::size_t dim, std::span<const ProtocolRow> rows);

}  // namespace qtomo
