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
#include <optional>
#include <span>
#include <vector>

#include "qtomo/quantum_core.hpp"

namespace qtomo {

/// p10 = P(read 1 | true 0), p01 = P(read 0 | true 1).
struct ReadoutErrorRates {
  double p10 = 0.0;
  double p01 = 0.0;

  /// Throws InvalidArgument unless both rates lie in [0, 1].
  void validate() const;
  static ReadoutErrorRates symmetric(double p) { return {p, p}; }
};

/// Phase relaxation level g in [0, 1].
struct DephasingStrength {
  double g = 0.0;

  void validate() const;
};

/// The three Kraus operators for single-qubit registration errors:
/// E0 = diag(sqrt(1-p10), sqrt(1-p01)), E1 = sqrt(p10)|1><0|, E2 = sqrt(p01)|0><1|.
KrausChannel readout_channel(const ReadoutErrorRates& rates);

/// Independent per-qubit readout errors; qubit 0 is the most significant factor.
KrausChannel readout_channel_multiqubit(std::span<const ReadoutErrorRates> rates_per_qubit);

/// With probability g the state is projected onto the computational-basis
/// diagonal: {sqrt(1-g) I} u {sqrt(g) |k><k|}. Off-diagonals shrink by (1-g).
KrausChannel dephasing_channel(std::size_t dim, const DephasingStrength& strength);

/// Calibration tally: how many prepared copies of a basis state were read out wrong.
struct CalibrationCounts {
  std::uint64_t n_trials = 0;
  std::uint64_t n_flips = 0;
};

/// Frequency (maximum-likelihood) estimates from preparing |0> and |1>.
ReadoutErrorRates estimate_readout_rates(const CalibrationCounts& counts0,
                                         const CalibrationCounts& counts1);

/// Noise seen by a tomography experiment. `decoherence` acts on the state
/// before the setting's basis change; `readout` acts after it, at registration.
struct NoiseModel {
  std::optional<KrausChannel> decoherence;
  std::optional<KrausChannel> readout;

  bool empty() const { return !decoherence && !readout; }
};

/// Noise parameters as configured, independent of the system size. A single
/// readout entry applies to every qubit; a list gives one entry per qubit.
struct NoiseSpec {
  std::vector<ReadoutErrorRates> readout;
  std::optional<DephasingStrength> dephasing;

  bool empty() const { return readout.empty() && !dephasing; }
  /// Throws InvalidArgument if readout is requested for a non-qubit dimension
  /// or the per-qubit list length does not match.
  NoiseModel to_model(std::size_t dim) const;
};

/// Kraus operators M_k U D_j for one measurement setting with basis unitary U.
KrausChannel setting_channel(const NoiseModel& noise, const CMatrix& basis_unitary);

}  // namespace qtomo
