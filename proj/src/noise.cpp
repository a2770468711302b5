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

#include "qtomo/noise.hpp"

#include <cmath>
#include <string>

#include "qtomo/error.hpp"

namespace qtomo {

void ReadoutErrorRates::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(p10) || !in_unit(p01)) {
    throw InvalidArgument("readout rates must lie in [0, 1] (p10=" + std::to_string(p10) +
                          ", p01=" + std::to_string(p01) + ")");
  }
}

void DephasingStrength::validate() const {
  if (!(g >= 0.0 && g <= 1.0)) {
    throw InvalidArgument("dephasing strength g must lie in [0, 1] (g=" + std::to_string(g) + ")");
  }
}

KrausChannel readout_channel(const ReadoutErrorRates& rates) {
  rates.validate();
  CMatrix e0 = CMatrix::Zero(2, 2);
  CMatrix e1 = CMatrix::Zero(2, 2);
  CMatrix e2 = CMatrix::Zero(2, 2);
  e0(0, 0) = std::sqrt(1.0 - rates.p10);
  e0(1, 1) = std::sqrt(1.0 - rates.p01);
  e1(1, 0) = std::sqrt(rates.p10);
  e2(0, 1) = std::sqrt(rates.p01);
  return KrausChannel({e0, e1, e2});
}

KrausChannel readout_channel_multiqubit(std::span<const ReadoutErrorRates> rates_per_qubit) {
  if (rates_per_qubit.empty()) {
    throw InvalidArgument("readout_channel_multiqubit: empty rate list");
  }
  std::vector<KrausChannel> sites;
  sites.reserve(rates_per_qubit.size());
  for (const auto& r : rates_per_qubit) sites.push_back(readout_channel(r));
  return tensor_channels(sites);
}

KrausChannel dephasing_channel(std::size_t dim, const DephasingStrength& strength) {
  if (dim < 2) throw InvalidArgument("dephasing_channel: dimension must be at least 2");
  strength.validate();
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<CMatrix> ops;
  ops.reserve(dim + 1);
  ops.push_back(std::sqrt(1.0 - strength.g) * CMatrix::Identity(n, n));
  for (Eigen::Index k = 0; k < n; ++k) {
    CMatrix e = CMatrix::Zero(n, n);
    e(k, k) = std::sqrt(strength.g);
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops));
}

ReadoutErrorRates estimate_readout_rates(const CalibrationCounts& counts0,
                                         const CalibrationCounts& counts1) {
  for (const auto* c : {&counts0, &counts1}) {
    if (c->n_trials == 0) throw InvalidArgument("estimate_readout_rates: zero trials");
    if (c->n_flips > c->n_trials) {
      throw InvalidArgument("estimate_readout_rates: more flips than trials");
    }
  }
  return {static_cast<double>(counts0.n_flips) / static_cast<double>(counts0.n_trials),
          static_cast<double>(counts1.n_flips) / static_cast<double>(counts1.n_trials)};
}

NoiseModel NoiseSpec::to_model(std::size_t dim) const {
  NoiseModel model;
  if (dephasing) model.decoherence = dephasing_channel(dim, *dephasing);
  if (!readout.empty()) {
    std::size_t n_qubits = 0;
    while ((std::size_t{1} << n_qubits) < dim) ++n_qubits;
    if ((std::size_t{1} << n_qubits) != dim) {
      throw InvalidArgument("readout noise needs a qubit register; dimension " +
                            std::to_string(dim) + " is not a power of 2");
    }
    std::vector<ReadoutErrorRates> per_qubit = readout;
    if (per_qubit.size() == 1) per_qubit.assign(n_qubits, readout.front());
    if (per_qubit.size() != n_qubits) {
      throw InvalidArgument("readout noise lists " + std::to_string(readout.size()) +
                            " qubits but the register has " + std::to_string(n_qubits));
    }
    model.readout = readout_channel_multiqubit(per_qubit);
  }
  return model;
}

KrausChannel setting_channel(const NoiseModel& noise, const CMatrix& basis_unitary) {
  KrausChannel ch = KrausChannel::unitary(basis_unitary);
  if (noise.decoherence) ch = compose_channels(*noise.decoherence, ch);
  if (noise.readout) ch = compose_channels(ch, *noise.readout);
  return ch;
}

}  // namespace qtomo
