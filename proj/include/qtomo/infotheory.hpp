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

#include <cstdint>

#include "qtomo/protocols.hpp"
#include "qtomo/quantum_core.hpp"
#include "qtomo/sampling.hpp"

namespace qtomo {

/// [Re(c); Im(c)]
RVector realify_state(const StateVector& c);
RVector realify_state(const CVector& c);

/// [[Re, -Im], [Im, Re]]; c~^T L~ c~ equals c^+ L c for Hermitian L.
RMatrix realify_operator(const CMatrix& op);

/// Complete information matrix H = 2n sum_j (L~_j c~)(L~_j c~)^T / lambda_j
/// for a pure state, built with sample size n.
struct InfoMatrix {
  RMatrix mat;
  std::uint64_t n = 0;
  RVector state;  ///< c~ the matrix was built at; may be empty for imported matrices
};

/// Throws NumericalError when a row has lambda_j ~ 0 but L~_j c~ does not vanish.
InfoMatrix information_matrix(const MeasurementProtocol& p, const StateVector& c,
                              std::uint64_t n);

/// Variances d_j = 1 / (2 S_j) of the 2s-2 principal fluctuation components.
struct PrecisionProfile {
  RVector d;
  double zero_eigenvalue = 0.0;  ///< dropped global-phase mode
  double norm_eigenvalue = 0.0;  ///< dropped normalization mode
  /// |overlap| of c~ with the dropped top eigenspace (1 when H carries no state).
  /// At or below 0.9 the dropped mode is not the normalization direction.
  double norm_overlap = 1.0;
  RVector spectrum;  ///< all 2s eigenvalues, ascending
  bool normalization_mode_mismatch() const { return norm_overlap <= 0.9; }
};

/// Sorts the spectrum, drops the smallest (which must be ~0) and the largest.
/// Throws NumericalError carrying the spectrum when no zero mode exists.
PrecisionProfile precision_profile(const InfoMatrix& h);

struct LossMoments {
  double mean = 0.0;      ///< sum_j d_j
  double variance = 0.0;  ///< 2 sum_j d_j^2
};

LossMoments expected_loss(const PrecisionProfile& dp);

/// One draw of sum_j d_j xi_j^2, xi_j ~ N(0, 1).
double sample_loss(const PrecisionProfile& dp, const SeedSpec& seed);
double sample_loss(const PrecisionProfile& dp, Rng& rng);

/// 2 dc~^T H dc~ after aligning the global phase of c_est to c_true.
double chi_square_statistic(const InfoMatrix& h, const StateVector& c_true,
                            const StateVector& c_est);

/// L = n * sum_j d_j, asymptotically independent of n.
double loss_function(const PrecisionProfile& dp, std::uint64_t n);

}  // namespace qtomo
