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

#include <utility>

#include "qtomo/noise.hpp"
#include "qtomo/protocols.hpp"
#include "qtomo/quantum_core.hpp"

namespace qtomo {

/// sum_k E_k^+ Lambda E_k: the measurement operator that, applied to the
/// channel input, reproduces Lambda's statistics on the channel output.
CMatrix mixed_operator(const CMatrix& op, const KrausChannel& ch);

/// Every row replaced by its mixed operator under a channel that acts on the
/// state ahead of the whole protocol. Projectors are dropped.
MeasurementProtocol fuzzy_protocol(const MeasurementProtocol& p, const KrausChannel& ch);

/// Setting-aware transform: row b of a setting with basis U becomes
/// sum_jk E_jk^+ |b><b| E_jk / n_settings with E_jk = M_k U D_j.
/// Readout noise requires every setting to be a complete projective basis.
MeasurementProtocol fuzzy_protocol(const MeasurementProtocol& p, const NoiseModel& noise);

/// The fuzzy pair (Lambda_0, Lambda_1) for a qubit measured in basis U under readout errors.
std::pair<CMatrix, CMatrix> fuzzy_qubit_operators(const CMatrix& u,
                                                  const ReadoutErrorRates& rates);

}  // namespace qtomo
