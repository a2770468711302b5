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

#include "qtomo/infotheory.hpp"

#include <cmath>
#include <sstream>

#include "qtomo/error.hpp"

namespace qtomo {

namespace {

constexpr double kZeroRowTol = 1e-14;
constexpr double kZeroModeRelTol = 1e-6;

}  // namespace

RVector realify_state(const CVector& c) {
  RVector out(2 * c.size());
  out << c.real(), c.imag();
  return out;
}

RVector realify_state(const StateVector& c) { return realify_state(c.amps()); }

RMatrix realify_operator(const CMatrix& op) {
  if (op.rows() != op.cols()) throw DimensionError("realify_operator: matrix must be square");
  if (hermiticity_deviation(op) >= 1e-10) throw InvalidArgument("realify_operator: not Hermitian");
  const Eigen::Index n = op.rows();
  RMatrix out(2 * n, 2 * n);
  out << op.real(), -op.imag(), op.imag(), op.real();
  return out;
}

InfoMatrix information_matrix(const MeasurementProtocol& p, const StateVector& c,
                              std::uint64_t n) {
  if (c.dim() != p.dim()) throw DimensionError("information_matrix: dimension mismatch");
  const RVector ct = realify_state(c);
  const Eigen::Index m = ct.size();
  RMatrix h = RMatrix::Zero(m, m);
  for (std::size_t j = 0; j < p.size(); ++j) {
    const RVector v = realify_operator(p.row(j).op) * ct;
    const double lambda = ct.dot(v);
    const double vnorm = v.norm();
    if (lambda < kZeroRowTol) {
      if (vnorm < kZeroRowTol) continue;  // 0/0 limit contributes nothing
      // lambda ~ 0 with a non-vanishing gradient only happens for a pathological protocol.
      if (lambda <= 0.0 || vnorm * vnorm / lambda > 1e12) {
        std::ostringstream msg;
        msg << "information_matrix: row " << j << " has lambda=" << lambda
            << " but |L~c~|=" << vnorm << " (singular protocol)";
        throw NumericalError(msg.str());
      }
    }
    h.noalias() += (v * v.transpose()) / lambda;
  }
  h *= 2.0 * static_cast<double>(n);
  h = 0.5 * (h + h.transpose());
  return {std::move(h), n, ct};
}

PrecisionProfile precision_profile(const InfoMatrix& h) {
  const Eigen::Index m = h.mat.rows();
  if (m < 4 || m % 2 != 0) throw DimensionError("precision_profile: H must be 2s x 2s with s >= 2");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h.mat);
  const RVector& s = es.eigenvalues();
  const double top = s(m - 1);
  if (!(top > 0.0) || std::abs(s(0)) >= kZeroModeRelTol * top || s(1) <= kZeroModeRelTol * top) {
    std::ostringstream msg;
    msg << "precision_profile: expected exactly one zero eigenvalue; spectrum =";
    for (Eigen::Index i = 0; i < m; ++i) msg << ' ' << s(i);
    throw NumericalError(msg.str());
  }
  PrecisionProfile dp;
  dp.spectrum = s;
  dp.zero_eigenvalue = s(0);
  dp.norm_eigenvalue = top;
  dp.d.resize(m - 2);
  for (Eigen::Index i = 1; i < m - 1; ++i) dp.d(i - 1) = 1.0 / (2.0 * s(i));

  if (h.state.size() == m) {
    // Pool numerically degenerate top eigenvalues before measuring the overlap.
    const RMatrix& vecs = es.eigenvectors();
    const RVector unit = h.state.normalized();
    double weight = 0.0;
    for (Eigen::Index i = 1; i < m; ++i) {
      if (top - s(i) <= 1e-9 * top) weight += std::pow(vecs.col(i).dot(unit), 2);
    }
    dp.norm_overlap = std::sqrt(std::min(1.0, weight));
  }
  return dp;
}

LossMoments expected_loss(const PrecisionProfile& dp) {
  return {dp.d.sum(), 2.0 * dp.d.squaredNorm()};
}

double sample_loss(const PrecisionProfile& dp, Rng& rng) {
  std::normal_distribution<double> normal;
  double loss = 0.0;
  for (Eigen::Index j = 0; j < dp.d.size(); ++j) {
    const double xi = normal(rng);
    loss += dp.d(j) * xi * xi;
  }
  return loss;
}

double sample_loss(const PrecisionProfile& dp, const SeedSpec& seed) {
  Rng rng = make_rng(seed);
  return sample_loss(dp, rng);
}

double chi_square_statistic(const InfoMatrix& h, const StateVector& c_true,
                            const StateVector& c_est) {
  if (c_true.dim() != c_est.dim() || static_cast<Eigen::Index>(2 * c_true.dim()) != h.mat.rows()) {
    throw DimensionError("chi_square_statistic: dimension mismatch");
  }
  const Complex overlap = c_est.amps().dot(c_true.amps());
  const double mag = std::abs(overlap);
  const Complex phase = mag > 0.0 ? overlap / mag : Complex(1.0);
  const RVector dc = realify_state(CVector(phase * c_est.amps())) - realify_state(c_true);
  return 2.0 * dc.dot(h.mat * dc);
}

double loss_function(const PrecisionProfile& dp, std::uint64_t n) {
  return static_cast<double>(n) * dp.d.sum();
}

}  // namespace qtomo
