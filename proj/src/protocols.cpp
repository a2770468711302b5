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

#include "qtomo/protocols.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qtomo/error.hpp"
#include "qtomo/galois.hpp"

namespace qtomo {

namespace {

constexpr double kUnityTol = 1e-10;

bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

// Rows of `basis` (bras) become rank-1 rows scaled by `weight`.
void append_basis(std::vector<ProtocolRow>& rows, const CMatrix& basis, std::size_t setting,
                  double weight) {
  const double amp = std::sqrt(weight);
  for (Eigen::Index b = 0; b < basis.rows(); ++b) {
    CVector ket = amp * basis.row(b).adjoint();
    CMatrix op = ket * ket.adjoint();
    rows.push_back({std::move(op), setting, std::move(ket)});
  }
}

// Phase convention: first non-negligible component real positive.
CVector fix_phase(CVector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-8) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  }
  return v;
}

CMatrix pauli_string(unsigned m, std::uint32_t x, std::uint32_t z) {
  const CMatrix id = CMatrix::Identity(2, 2);
  CMatrix px(2, 2), pz(2, 2);
  px << 0, 1, 1, 0;
  pz << 1, 0, 0, -1;
  CMatrix out = CMatrix::Identity(1, 1);
  for (unsigned q = 0; q < m; ++q) {
    // qubit 0 is the most significant tensor factor and bit m-1-q of x/z
    const std::uint32_t bit = 1u << (m - 1 - q);
    CMatrix factor = id;
    if (x & bit) factor = px * factor;
    if (z & bit) factor = factor * pz;
    if ((x & bit) && (z & bit)) factor *= kI;
    out = kron(out, factor);
  }
  return out;
}

// Joint eigenbasis of commuting Hermitian generators, as bras in rows.
CMatrix joint_eigenbasis(const std::vector<CMatrix>& generators, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix mix = CMatrix::Zero(n, n);
  double weight = 1.0;
  for (const auto& g : generators) {
    mix += weight * g;
    weight *= 2.0;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(mix);
  CMatrix bras(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    bras.row(b) = fix_phase(es.eigenvectors().col(b)).adjoint();
  }
  return bras;
}

std::vector<CMatrix> mub_bases_prime(std::size_t d) {
  std::vector<CMatrix> bases;
  const auto n = static_cast<Eigen::Index>(d);
  bases.push_back(CMatrix::Identity(n, n));
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k) {
    CMatrix basis(n, n);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t x = 0; x < d; ++x) {
        const std::size_t exponent = (k * x * x + j * x) % d;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(exponent) /
                             static_cast<double>(d);
        // bra components are conjugated kets
        basis(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(x)) =
            norm * std::polar(1.0, -angle);
      }
    }
    bases.push_back(std::move(basis));
  }
  return bases;
}

std::vector<CMatrix> mub_bases_power_of_two(std::size_t d) {
  const auto m = static_cast<unsigned>(std::countr_zero(d));
  const GaloisField2 field(m);
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<CMatrix> bases;
  bases.push_back(CMatrix::Identity(n, n));
  // Class a: Pauli operators (x, S_a x) with S_a[i][j] = tr(a * t^i * t^j).
  for (std::uint32_t a = 0; a < field.order(); ++a) {
    std::vector<CMatrix> generators;
    for (unsigned i = 0; i < m; ++i) {
      std::uint32_t z = 0;
      for (unsigned j = 0; j < m; ++j) {
        const std::uint32_t prod = field.mul(a, field.mul(1u << i, 1u << j));
        if (field.trace(prod)) z |= 1u << j;
      }
      generators.push_back(pauli_string(m, 1u << i, z));
    }
    bases.push_back(joint_eigenbasis(generators, d));
  }
  return bases;
}

}  // namespace

MeasurementProtocol::MeasurementProtocol(std::size_t dim, std::size_t n_settings,
                                         std::vector<ProtocolRow> rows)
    : dim_(dim), n_settings_(n_settings), rows_(std::move(rows)), setting_rows_(n_settings) {
  if (dim_ < 2) throw InvalidArgument("MeasurementProtocol: dimension must be at least 2");
  if (n_settings_ == 0) throw InvalidArgument("MeasurementProtocol: no settings");
  if (rows_.empty()) throw InvalidArgument("MeasurementProtocol: no rows");
  const auto n = static_cast<Eigen::Index>(dim_);
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    const auto& r = rows_[j];
    const std::string where = "MeasurementProtocol row " + std::to_string(j) + ": ";
    if (r.op.rows() != n || r.op.cols() != n) throw DimensionError(where + "operator size");
    if (r.setting >= n_settings_) throw InvalidArgument(where + "setting id out of range");
    if (hermiticity_deviation(r.op) >= 1e-12) throw InvalidArgument(where + "not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r.op, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) throw InvalidArgument(where + "not PSD");
    if (r.projector) {
      if (r.projector->size() != n) throw DimensionError(where + "projector size");
      if (max_abs(*r.projector * r.projector->adjoint() - r.op) >= 1e-12) {
        throw InvalidArgument(where + "operator differs from its projector outer product");
      }
    }
    setting_rows_[r.setting].push_back(j);
  }
  if (verify_unity_decomposition(*this) >= kUnityTol) {
    throw InvalidArgument("MeasurementProtocol: operators do not decompose unity");
  }
  const CMatrix share = CMatrix::Identity(n, n) / static_cast<double>(n_settings_);
  for (std::size_t s = 0; s < n_settings_; ++s) {
    CMatrix sum = CMatrix::Zero(n, n);
    for (auto j : setting_rows_[s]) sum += rows_[j].op;
    if (max_abs(sum - share) >= kUnityTol) {
      throw InvalidArgument("MeasurementProtocol: setting " + std::to_string(s) +
                            " does not sum to I / n_settings");
    }
  }
}

MeasurementProtocol MeasurementProtocol::renormalized(std::size_t dim, std::size_t n_settings,
                                                      std::vector<ProtocolRow> rows) {
  Complex total = 0.0;
  for (const auto& r : rows) total += r.op.trace();
  const double a = total.real() / static_cast<double>(dim);
  if (!(a > 0.0)) throw InvalidArgument("MeasurementProtocol: operators have zero total weight");
  for (auto& r : rows) {
    r.op /= a;
    if (r.projector) *r.projector /= std::sqrt(a);
  }
  return MeasurementProtocol(dim, n_settings, std::move(rows));
}

std::optional<CMatrix> MeasurementProtocol::setting_basis(std::size_t setting) const {
  const auto& idx = setting_rows_.at(setting);
  if (idx.size() != dim_) return std::nullopt;
  const auto n = static_cast<Eigen::Index>(dim_);
  CMatrix u(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const auto& r = rows_[idx[static_cast<std::size_t>(b)]];
    if (!r.projector) return std::nullopt;
    const double norm = r.projector->norm();
    if (!(norm > 0.0)) return std::nullopt;
    u.row(b) = (*r.projector / norm).adjoint();
  }
  if (!is_unitary(u)) return std::nullopt;
  return u;
}

MeasurementProtocol pauli_protocol(std::size_t n_qubits, std::size_t max_dim) {
  if (n_qubits < 1) throw InvalidArgument("pauli_protocol: need at least one qubit");
  if (n_qubits >= 31 || (std::size_t{1} << n_qubits) > max_dim) {
    throw InvalidArgument("pauli_protocol: dimension 2^" + std::to_string(n_qubits) +
                          " exceeds the cap " + std::to_string(max_dim));
  }
  const double r = 1.0 / std::sqrt(2.0);
  std::array<CMatrix, 3> single{CMatrix(2, 2), CMatrix(2, 2), CMatrix(2, 2)};
  single[0] << 1, 0, 0, 1;
  single[1] << r, r, r, -r;
  single[2] << r, -kI * r, r, kI * r;

  std::size_t n_settings = 1;
  for (std::size_t q = 0; q < n_qubits; ++q) n_settings *= 3;
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::vector<ProtocolRow> rows;
  rows.reserve(n_settings * dim);
  for (std::size_t s = 0; s < n_settings; ++s) {
    CMatrix u = CMatrix::Identity(1, 1);
    std::size_t code = s;
    std::size_t place = n_settings / 3;
    for (std::size_t q = 0; q < n_qubits; ++q) {
      u = kron(u, single[code / place]);
      code %= place;
      place = std::max<std::size_t>(place / 3, 1);
    }
    append_basis(rows, u, s, 1.0 / static_cast<double>(n_settings));
  }
  return MeasurementProtocol(dim, n_settings, std::move(rows));
}

MeasurementProtocol mub_protocol(std::size_t dim) {
  std::vector<CMatrix> bases;
  if (dim >= 2 && dim <= 16 && std::has_single_bit(dim)) {
    bases = mub_bases_power_of_two(dim);
  } else if (dim >= 2 && dim <= 16 && is_prime(dim)) {
    bases = mub_bases_prime(dim);
  } else {
    throw InvalidArgument("mub_protocol: unsupported dimension " + std::to_string(dim) +
                          " (need a prime or a power of 2, at most 16)");
  }
  std::vector<ProtocolRow> rows;
  rows.reserve(bases.size() * dim);
  for (std::size_t k = 0; k < bases.size(); ++k) {
    append_basis(rows, bases[k], k, 1.0 / static_cast<double>(bases.size()));
  }
  return MeasurementProtocol(dim, bases.size(), std::move(rows));
}

RVector probabilities(const MeasurementProtocol& p, const CMatrix& rho) {
  if (static_cast<std::size_t>(rho.rows()) != p.dim()) {
    throw DimensionError("probabilities: state and protocol dimension differ");
  }
  RVector lambda(static_cast<Eigen::Index>(p.size()));
  for (std::size_t j = 0; j < p.size(); ++j) {
    // Tr(A B) for Hermitian A, B is sum_ij A_ij conj(B_ij)
    const double v = p.row(j).op.cwiseProduct(rho.conjugate()).sum().real();
    lambda(static_cast<Eigen::Index>(j)) = std::max(v, 0.0);
  }
  return lambda;
}

RVector probabilities(const MeasurementProtocol& p, const AnyState& state) {
  if (dim_of(state) != p.dim()) {
    throw DimensionError("probabilities: state and protocol dimension differ");
  }
  if (const auto* c = std::get_if<StateVector>(&state)) {
    RVector lambda(static_cast<Eigen::Index>(p.size()));
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto& r = p.row(j);
      const double v = r.projector ? std::norm(r.projector->dot(c->amps()))
                                   : c->amps().dot(r.op * c->amps()).real();
      lambda(static_cast<Eigen::Index>(j)) = std::max(v, 0.0);
    }
    return lambda;
  }
  return probabilities(p, std::get<DensityMatrix>(state).mat());
}

double verify_unity_decomposition(std::size_t dim, std::span<const ProtocolRow> rows) {
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& r : rows) sum += r.op;
  return max_abs(sum - CMatrix::Identity(n, n));
}

double verify_unity_decomposition(const MeasurementProtocol& p) {
  return verify_unity_decomposition(p.dim(), p.rows());
}

}  // namespace qtomo
