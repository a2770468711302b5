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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qtomo/error.hpp"
#include "qtomo/fuzzy.hpp"
#include "qtomo/noise.hpp"
#include "qtomo/sampling.hpp"
#include "test_support.hpp"

namespace qtomo {
namespace {

CMatrix projector(std::size_t dim, std::size_t b) {
  CMatrix p = CMatrix::Zero(dim, dim);
  p(b, b) = 1.0;
  return p;
}

TEST(MixedOperatorTest, IdentityChannel) {
  std::mt19937_64 rng(41);
  const CMatrix op = testing::random_density(3, rng);
  EXPECT_LT(max_abs(mixed_operator(op, KrausChannel::identity(3)) - op), 1e-15);
}

TEST(MixedOperatorTest, ReadoutOnGroundProjector) {
  const double p10 = 0.0156, p01 = 0.0830;
  const CMatrix m = mixed_operator(projector(2, 0), readout_channel({p10, p01}));
  CMatrix want = CMatrix::Zero(2, 2);
  want(0, 0) = 1 - p10;
  want(1, 1) = p01;
  EXPECT_LT(max_abs(m - want), 1e-15);
}

TEST(MixedOperatorTest, IdentityOperatorIsFixed) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 20; ++k) {
    const std::size_t dim = 2 + k % 4;
    const KrausChannel ch(testing::random_kraus_ops(dim, 1 + k % 4, rng));
    EXPECT_LT(max_abs(mixed_operator(CMatrix::Identity(dim, dim), ch) - CMatrix::Identity(dim, dim)),
              1e-12);
  }
}

TEST(MixedOperatorTest, DimensionMismatch) {
  EXPECT_THROW(mixed_operator(CMatrix::Identity(3, 3), KrausChannel::identity(2)), DimensionError);
}

TEST(FuzzyProtocolTest, IdentityChannelLeavesProtocol) {
  const auto p = mub_protocol(3);
  const auto f = fuzzy_protocol(p, KrausChannel::identity(3));
  ASSERT_EQ(f.size(), p.size());
  EXPECT_EQ(f.n_settings(), p.n_settings());
  for (std::size_t j = 0; j < p.size(); ++j) {
    EXPECT_LT(max_abs(f.row(j).op - p.row(j).op), 1e-15);
    EXPECT_EQ(f.row(j).setting, p.row(j).setting);
    EXPECT_FALSE(f.row(j).projector.has_value());
  }
}

TEST(FuzzyProtocolTest, UnityDecompositionSurvives) {
  const auto p = pauli_protocol(1);
  EXPECT_LT(verify_unity_decomposition(fuzzy_protocol(p, readout_channel({0.0156, 0.0830}))), 1e-10);
  const NoiseModel noise{dephasing_channel(2, {0.05}), readout_channel({0.0156, 0.0830})};
  EXPECT_LT(verify_unity_decomposition(fuzzy_protocol(p, noise)), 1e-10);
  std::mt19937_64 rng(43);
  for (std::size_t dim : {2, 3, 4, 5, 8}) {
    const KrausChannel ch(testing::random_kraus_ops(dim, 3, rng));
    EXPECT_LT(verify_unity_decomposition(fuzzy_protocol(mub_protocol(dim), ch)), 1e-10);
  }
}

TEST(FuzzyProtocolTest, ChannelAbsorbedIntoOperators) {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 100; ++k) {
    const std::size_t dim = 2 + k % 4;
    const auto p = dim == 3 || dim == 5 ? mub_protocol(dim) : pauli_protocol(dim == 2 ? 1 : 2);
    const KrausChannel ch(testing::random_kraus_ops(dim, 1 + k % 5, rng));
    const auto f = fuzzy_protocol(p, ch);
    const DensityMatrix rho(testing::random_density(dim, rng));
    const CMatrix out = apply_channel(ch, rho).mat();
    const std::size_t j = static_cast<std::size_t>(rng() % p.size());
    const Complex lhs = (p.row(j).op * out).trace();
    const Complex rhs = (f.row(j).op * rho.mat()).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(FuzzyProtocolTest, SettingAwareMatchesPropagatedProbabilities) {
  std::mt19937_64 rng(45);
  NoiseSpec spec;
  spec.readout = {{0.0156, 0.0830}, {0.03, 0.1}};
  spec.dephasing = DephasingStrength{0.05};
  const auto p = pauli_protocol(2);
  const auto f = fuzzy_protocol(p, spec.to_model(4));
  for (int k = 0; k < 20; ++k) {
    const StateVector c(testing::random_ket(4, rng));
    const RVector a = probabilities(f, c);
    const RVector b = noisy_probabilities(p, c, spec.to_model(4));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FuzzyProtocolTest, CombinedNoiseMatchesExplicitKrausSum) {
  const std::size_t dim = 4;
  NoiseSpec spec;
  spec.readout = {ReadoutErrorRates{0.02, 0.07}};
  spec.dephasing = DephasingStrength{0.1};
  const NoiseModel noise = spec.to_model(dim);
  const auto p = mub_protocol(dim);
  const auto f = fuzzy_protocol(p, noise);
  for (std::size_t s = 0; s < p.n_settings(); ++s) {
    const auto& rows = p.setting_rows(s);
    CMatrix u(dim, dim);
    for (std::size_t b = 0; b < dim; ++b) {
      const CVector& x = *p.row(rows[b]).projector;
      u.row(b) = x.adjoint() / x.norm();
    }
    for (std::size_t b = 0; b < dim; ++b) {
      CMatrix want = CMatrix::Zero(dim, dim);
      for (const auto& dj : noise.decoherence->ops()) {
        for (const auto& mk : noise.readout->ops()) {
          const CMatrix e = mk * u * dj;
          want += e.adjoint() * projector(dim, b) * e;
        }
      }
      want /= double(p.n_settings());
      EXPECT_LT(max_abs(f.row(rows[b]).op - want), 1e-12);
    }
  }
}

TEST(FuzzyProtocolTest, ReadoutNeedsProjectiveSettings) {
  const auto p = fuzzy_protocol(pauli_protocol(1), KrausChannel::identity(2));
  const NoiseModel noise{std::nullopt, readout_channel({0.1, 0.1})};
  EXPECT_THROW(fuzzy_protocol(p, noise), InvalidArgument);
}

TEST(FuzzyQubitOperatorsTest, NoiselessComputationalBasis) {
  const auto [l0, l1] = fuzzy_qubit_operators(CMatrix::Identity(2, 2), {0.0, 0.0});
  EXPECT_LT(max_abs(l0 - projector(2, 0)), 1e-15);
  EXPECT_LT(max_abs(l1 - projector(2, 1)), 1e-15);
}

TEST(FuzzyQubitOperatorsTest, ReadoutInComputationalBasis) {
  const double p10 = 0.0156, p01 = 0.0830;
  const auto [l0, l1] = fuzzy_qubit_operators(CMatrix::Identity(2, 2), {p10, p01});
  CMatrix w0 = CMatrix::Zero(2, 2), w1 = CMatrix::Zero(2, 2);
  w0(0, 0) = 1 - p10;
  w0(1, 1) = p01;
  w1(0, 0) = p10;
  w1(1, 1) = 1 - p01;
  EXPECT_LT(max_abs(l0 - w0), 1e-15);
  EXPECT_LT(max_abs(l1 - w1), 1e-15);
}

TEST(FuzzyQubitOperatorsTest, HadamardBasis) {
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const auto [l0, l1] = fuzzy_qubit_operators(h, {0.0, 0.0});
  EXPECT_LT(max_abs(l0 - CMatrix::Constant(2, 2, 0.5)), 1e-15);
  CMatrix minus(2, 2);
  minus << 0.5, -0.5, -0.5, 0.5;
  EXPECT_LT(max_abs(l1 - minus), 1e-15);
}

TEST(FuzzyQubitOperatorsTest, DecomposeUnityAndArePositive) {
  std::mt19937_64 rng(46);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const auto [l0, l1] = fuzzy_qubit_operators(testing::random_unitary(2, rng), {rate(rng), rate(rng)});
    EXPECT_LT(max_abs(l0 + l1 - CMatrix::Identity(2, 2)), 1e-12);
    for (const CMatrix& l : {l0, l1}) {
      EXPECT_LT(hermiticity_deviation(l), 1e-15);
      EXPECT_GE(Eigen::SelfAdjointEigenSolver<CMatrix>(l).eigenvalues().minCoeff(), -1e-14);
    }
  }
}

TEST(FuzzyQubitOperatorsTest, AgreesWithProtocolTransform) {
  const ReadoutErrorRates rates{0.0156, 0.0830};
  const auto p = pauli_protocol(1);
  const auto f = fuzzy_protocol(p, NoiseModel{std::nullopt, readout_channel(rates)});
  for (std::size_t s = 0; s < 3; ++s) {
    const auto [l0, l1] = fuzzy_qubit_operators(*p.setting_basis(s), rates);
    EXPECT_LT(max_abs(f.row(p.setting_rows(s)[0]).op * 3.0 - l0), 1e-12);
    EXPECT_LT(max_abs(f.row(p.setting_rows(s)[1]).op * 3.0 - l1), 1e-12);
  }
}

TEST(FuzzyQubitOperatorsTest, RejectsNonUnitary) {
  EXPECT_THROW(fuzzy_qubit_operators(CMatrix::Identity(2, 2) * 1.1, {0.0, 0.0}), InvalidArgument);
}

}  // namespace
}  // namespace qtomo
