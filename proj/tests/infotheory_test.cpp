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
#include "qtomo/infotheory.hpp"
#include "qtomo/mle.hpp"
#include "qtomo/noise.hpp"
#include "qtomo/sampling.hpp"
#include "test_support.hpp"

namespace qtomo {
namespace {

// Information matrix summed from complex products: L~ c~ is the realified L c.
RMatrix info_oracle(const MeasurementProtocol& p, const CVector& c, double n) {
  const Eigen::Index s = c.size();
  RMatrix h = RMatrix::Zero(2 * s, 2 * s);
  for (const auto& row : p.rows()) {
    const CVector v = row.op * c;
    const double lam = c.dot(v).real();
    if (lam < 1e-14) continue;
    RVector vt(2 * s);
    vt << v.real(), v.imag();
    h += 2.0 * n * vt * vt.transpose() / lam;
  }
  return h;
}

double oracle_loss_function(const MeasurementProtocol& p, const CVector& c) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(info_oracle(p, c, 1.0));
  const RVector w = es.eigenvalues();
  double l = 0.0;
  for (Eigen::Index i = 1; i + 1 < w.size(); ++i) l += 1.0 / (2.0 * w(i));
  return l;
}

TEST(RealifyTest, StateExamples) {
  EXPECT_EQ(realify_state(StateVector::basis(2, 0)), (RVector(4) << 1, 0, 0, 0).finished());
  const StateVector c((CVector(2) << 1.0, kI).finished());
  const RVector want = (RVector(4) << 1, 0, 0, 1).finished() / std::sqrt(2.0);
  EXPECT_LT((realify_state(c) - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RealifyTest, StateIsometry) {
  std::mt19937_64 rng(81);
  for (int k = 0; k < 50; ++k) {
    const CVector c = testing::ginibre(5, 1, rng).col(0);
    EXPECT_NEAR(realify_state(c).norm(), c.norm(), 1e-12);
  }
}

TEST(RealifyTest, OperatorExamples) {
  EXPECT_EQ(realify_operator(CMatrix::Identity(2, 2)), RMatrix::Identity(4, 4));
  CMatrix sy(2, 2);
  sy << 0, -kI, kI, 0;
  RMatrix want(4, 4);
  want << 0, 0, 0, 1,
          0, 0, -1, 0,
          0, -1, 0, 0,
          1, 0, 0, 0;
  EXPECT_LT((realify_operator(sy) - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RealifyTest, QuadraticFormTransport) {
  std::mt19937_64 rng(82);
  for (int k = 0; k < 100; ++k) {
    const std::size_t dim = 2 + k % 6;
    const CMatrix op = testing::random_hermitian(dim, rng);
    const CVector c = testing::ginibre(dim, 1, rng).col(0);
    const RMatrix lt = realify_operator(op);
    const RVector ct = realify_state(c);
    EXPECT_LT((lt - lt.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    const double scale = std::max(1.0, std::abs(c.dot(op * c)));
    EXPECT_NEAR(ct.dot(lt * ct), c.dot(op * c).real(), 1e-12 * scale);
  }
}

TEST(RealifyTest, RejectsNonHermitian) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(realify_operator(m), InvalidArgument);
}

TEST(InformationMatrixTest, NormalizationIdentity) {
  const auto h = information_matrix(pauli_protocol(1), StateVector::basis(2, 0), 1);
  const RVector ct = realify_state(StateVector::basis(2, 0));
  EXPECT_NEAR(ct.dot(h.mat * ct), 2.0, 1e-12);
}

TEST(InformationMatrixTest, LinearInSampleSize) {
  const auto p = mub_protocol(3);
  const auto c = haar_random_state(3, SeedSpec{83, 0});
  const auto h1 = information_matrix(p, c, 1000);
  const auto h2 = information_matrix(p, c, 2000);
  EXPECT_LT((h2.mat - 2.0 * h1.mat).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(h2.n, 2000u);
}

TEST(InformationMatrixTest, GroundStateMatchesOracle) {
  const auto p = pauli_protocol(1);
  const auto h = information_matrix(p, StateVector::basis(2, 0), 1);
  EXPECT_LT((h.mat - info_oracle(p, StateVector::basis(2, 0).amps(), 1.0)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(InformationMatrixTest, RandomStatesMatchOracle) {
  std::uint64_t k = 0;
  for (const auto& p : {pauli_protocol(2), mub_protocol(5), mub_protocol(8)}) {
    for (int t = 0; t < 10; ++t, ++k) {
      const auto c = haar_random_state(p.dim(), SeedSpec{84, k});
      const auto h = information_matrix(p, c, 500);
      const RMatrix want = info_oracle(p, c.amps(), 500.0);
      EXPECT_LT((h.mat - want).cwiseAbs().maxCoeff(), 1e-9 * want.cwiseAbs().maxCoeff());
      EXPECT_LT((h.mat - h.mat.transpose()).cwiseAbs().maxCoeff(), 1e-10 * h.mat.norm());
      const RVector ct = realify_state(c);
      EXPECT_NEAR(ct.dot(h.mat * ct) / 1000.0, 1.0, 1e-6);
    }
  }
}

TEST(PrecisionProfileTest, DegreesOfFreedom) {
  const auto q = precision_profile(information_matrix(pauli_protocol(1), haar_random_state(2, SeedSpec{85, 0}), 100));
  EXPECT_EQ(q.d.size(), 2);
  const auto m = precision_profile(information_matrix(mub_protocol(8), haar_random_state(8, SeedSpec{85, 1}), 100));
  EXPECT_EQ(m.d.size(), 14);
  EXPECT_EQ(m.spectrum.size(), 16);
}

TEST(PrecisionProfileTest, HaarSweepIsWellConditioned) {
  std::uint64_t k = 0;
  for (std::size_t n_qubits = 1; n_qubits <= 4; ++n_qubits) {
    for (const auto& p : {pauli_protocol(n_qubits), mub_protocol(std::size_t{1} << n_qubits)}) {
      for (int t = 0; t < 100; ++t, ++k) {
        const auto dp = precision_profile(information_matrix(p, haar_random_state(p.dim(), SeedSpec{86, k}), 1000));
        ASSERT_EQ(dp.d.size(), Eigen::Index(2 * p.dim() - 2));
        EXPECT_GT(dp.d.minCoeff(), 0.0);
        EXPECT_TRUE(std::isfinite(dp.d.sum()));
        EXPECT_LT(std::abs(dp.zero_eigenvalue), 1e-6 * dp.spectrum.maxCoeff());
        EXPECT_GT(dp.spectrum(1), 1e-6 * dp.spectrum.maxCoeff());
        EXPECT_FALSE(dp.normalization_mode_mismatch());
      }
    }
  }
}

TEST(PrecisionProfileTest, IncompleteProtocolRejected) {
  std::vector<ProtocolRow> rows;
  for (std::size_t b = 0; b < 2; ++b) {
    CMatrix op = CMatrix::Zero(2, 2);
    op(b, b) = 1.0;
    rows.push_back({op, 0, std::nullopt});
  }
  const MeasurementProtocol z_only(2, 1, rows);
  const StateVector c((CVector(2) << 1.0, 1.0).finished());
  EXPECT_THROW(precision_profile(information_matrix(z_only, c, 100)), NumericalError);
}

TEST(ExpectedLossTest, Algebra) {
  PrecisionProfile dp;
  dp.d = RVector::Constant(2, 0.25);
  const auto m = expected_loss(dp);
  EXPECT_DOUBLE_EQ(m.mean, 0.5);
  EXPECT_DOUBLE_EQ(m.variance, 4 * 0.25 * 0.25);
  std::mt19937_64 rng(87);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    dp.d = RVector::NullaryExpr(2 + k % 10, [&] { return u(rng); });
    const auto mk = expected_loss(dp);
    EXPECT_LE(mk.variance, 2 * mk.mean * mk.mean + 1e-15);
  }
}

TEST(SampleLossTest, SingleComponentMean) {
  PrecisionProfile dp;
  dp.d = RVector::Constant(1, 0.3);
  auto rng = make_rng({88, 0});
  std::vector<double> draws;
  for (int k = 0; k < 100000; ++k) draws.push_back(sample_loss(dp, rng));
  EXPECT_NEAR(testing::mean(draws), 0.3, 3 * 0.3 * std::sqrt(2.0 / 100000));
  EXPECT_GE(*std::min_element(draws.begin(), draws.end()), 0.0);
  const auto ks = testing::ks_one_sample(draws, [](double x) { return testing::chi2_cdf(x / 0.3, 1); });
  EXPECT_GT(ks.pvalue, 0.01);
}

TEST(SampleLossTest, MomentsMatchProfile) {
  const auto dp = precision_profile(information_matrix(mub_protocol(4), haar_random_state(4, SeedSpec{89, 0}), 1000));
  auto rng = make_rng({89, 1});
  std::vector<double> draws;
  for (int k = 0; k < 100000; ++k) draws.push_back(sample_loss(dp, rng));
  const auto m = expected_loss(dp);
  EXPECT_NEAR(testing::mean(draws) / m.mean, 1.0, 0.05);
  EXPECT_NEAR(testing::variance(draws) / m.variance, 1.0, 0.05);
  EXPECT_EQ(sample_loss(dp, SeedSpec{89, 2}), sample_loss(dp, SeedSpec{89, 2}));
}

TEST(ChiSquareStatisticTest, ZeroAtTruthAndPhaseInvariant) {
  const auto p = mub_protocol(3);
  const auto c = haar_random_state(3, SeedSpec{90, 0});
  const auto h = information_matrix(p, c, 1000);
  EXPECT_NEAR(chi_square_statistic(h, c, c), 0.0, 1e-20);
  const auto est = reconstruct_pure(p, simulate_counts(p, c, 4000, SeedSpec{90, 1})).estimate;
  const double a = chi_square_statistic(h, c, est);
  const StateVector est_rot(est.amps() * std::polar(1.0, 0.7));
  EXPECT_NEAR(chi_square_statistic(h, c, est_rot), a, 1e-9 * a);
  EXPECT_GT(a, 0.0);
  EXPECT_THROW(chi_square_statistic(h, c, StateVector::basis(2, 0)), DimensionError);
}

TEST(LossFunctionTest, IndependentOfSampleSize) {
  const auto p = mub_protocol(5);
  const auto c = haar_random_state(5, SeedSpec{91, 0});
  const double a = loss_function(precision_profile(information_matrix(p, c, 1000)), 1000);
  const double b = loss_function(precision_profile(information_matrix(p, c, 2000)), 2000);
  EXPECT_NEAR(a, b, 1e-10 * a);
}

TEST(LossFunctionTest, IdealQubitHaarBaseline) {
  const auto p = pauli_protocol(1);
  std::vector<double> ls;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto c = haar_random_state(2, SeedSpec{92, k});
    const double l = loss_function(precision_profile(information_matrix(p, c, 1000)), 1000);
    EXPECT_NEAR(l, oracle_loss_function(p, c.amps()), 1e-9);
    EXPECT_GE(l, 1.0 - 1e-9);
    EXPECT_LE(l, 1.125 + 1e-9);
    ls.push_back(l);
  }
  // Haar mean from an independent 1e5-state computation: 1.0832 +- 0.0001.
  EXPECT_NEAR(testing::mean(ls), 1.0832, 0.005);
}

TEST(LossFunctionTest, ReadoutNoiseRaisesLoss) {
  const auto p = pauli_protocol(2);
  NoiseSpec spec;
  spec.readout = {ReadoutErrorRates::symmetric(0.03)};
  const auto f = fuzzy_protocol(p, spec.to_model(4));
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto c = haar_random_state(4, SeedSpec{93, k});
    const double ideal = loss_function(precision_profile(information_matrix(p, c, 1)), 1);
    const double noisy = loss_function(precision_profile(information_matrix(f, c, 1)), 1);
    EXPECT_GT(noisy, ideal);
  }
}

TEST(LossDistributionTest, PipelineMatchesGeneralizedChiSquare) {
  const auto p = pauli_protocol(1);
  const auto truth = haar_random_state(2, SeedSpec{94, 0});
  const std::uint64_t n = 9999;
  const auto dp = precision_profile(information_matrix(p, truth, n));
  std::vector<double> pipeline, model;
  auto rng = make_rng({94, 1});
  for (std::uint64_t t = 0; t < 500; ++t) {
    const auto est = reconstruct_pure(p, simulate_counts(p, truth, n, SeedSpec{95, t})).estimate;
    pipeline.push_back(1 - fidelity(truth, est));
  }
  for (int k = 0; k < 5000; ++k) model.push_back(sample_loss(dp, rng));
  EXPECT_GT(testing::ks_two_sample(pipeline, model).pvalue, 0.01);
}

}  // namespace
}  // namespace qtomo
