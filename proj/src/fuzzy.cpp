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

#include "qtomo/fuzzy.hpp"

#include <string>

#include "qtomo/error.hpp"

namespace qtomo {

CMatrix mixed_operator(const CMatrix& op, const KrausChannel& ch) {
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != ch.dim()) {
    throw DimensionError("mixed_operator: operator and channel dimension differ");
  }
  CMatrix out = CMatrix::Zero(op.rows(), op.cols());
  for (const auto& e : ch.ops()) out.noalias() += e.adjoint() * op * e;
  return 0.5 * (out + out.adjoint());
}

MeasurementProtocol fuzzy_protocol(const MeasurementProtocol& p, const KrausChannel& ch) {
  if (p.dim() != ch.dim()) throw DimensionError("fuzzy_protocol: protocol and channel dimension differ");
  std::vector<ProtocolRow> rows;
  rows.reserve(p.size());
  for (const auto& r : p.rows()) rows.push_back({mixed_operator(r.op, ch), r.setting, std::nullopt});
  return MeasurementProtocol(p.dim(), p.n_settings(), std::move(rows));
}

MeasurementProtocol fuzzy_protocol(const MeasurementProtocol& p, const NoiseModel& noise) {
  if (!noise.readout) {
    if (!noise.decoherence) return p;
    return fuzzy_protocol(p, *noise.decoherence);
  }
  for (const auto* ch : {noise.decoherence ? &*noise.decoherence : nullptr, &*noise.readout}) {
    if (ch && ch->dim() != p.dim()) {
      throw DimensionError("fuzzy_protocol: protocol and noise dimension differ");
    }
  }
  // E_jk = M_k U D_j, so the pullback factors: readout first, then U, then decoherence.
  const auto n = static_cast<Eigen::Index>(p.dim());
  std::vector<CMatrix> readout_pullback(p.dim(), CMatrix::Zero(n, n));
  for (const auto& m : noise.readout->ops()) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const CVector r = m.row(b).adjoint();
      readout_pullback[static_cast<std::size_t>(b)].noalias() += r * r.adjoint();
    }
  }
  std::vector<ProtocolRow> rows(p.size());
  for (std::size_t s = 0; s < p.n_settings(); ++s) {
    const auto u = p.setting_basis(s);
    if (!u) {
      throw InvalidArgument("fuzzy_protocol: setting " + std::to_string(s) +
                            " is not a projective basis; readout noise needs its basis unitary");
    }
    const auto& idx = p.setting_rows(s);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const double weight = p.row(idx[b]).op.trace().real();
      CMatrix op = weight * (u->adjoint() * readout_pullback[b] * *u);
      if (noise.decoherence) op = mixed_operator(op, *noise.decoherence);
      rows[idx[b]] = {0.5 * (op + op.adjoint()), s, std::nullopt};
    }
  }
  return MeasurementProtocol(p.dim(), p.n_settings(), std::move(rows));
}

std::pair<CMatrix, CMatrix> fuzzy_qubit_operators(const CMatrix& u,
                                                  const ReadoutErrorRates& rates) {
  if (u.rows() != 2 || u.cols() != 2) throw DimensionError("fuzzy_qubit_operators: U must be 2x2");
  if (!is_unitary(u)) throw InvalidArgument("fuzzy_qubit_operators: U is not unitary");
  const KrausChannel ch = compose_channels(KrausChannel::unitary(u), readout_channel(rates));
  CMatrix p0 = CMatrix::Zero(2, 2);
  CMatrix p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return {mixed_operator(p0, ch), mixed_operator(p1, ch)};
}

}  // namespace qtomo
