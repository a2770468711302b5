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
#include <numeric>
#include <random>

#include "qtomo/error.hpp"
#include "qtomo/fuzzy.hpp"
#include "qtomo/noise.hpp"
#include "qtomo/sampling.hpp"
#include "test_support.hpp"

namespace qtomo {
namespace {

std::uint64_t setting_total(const MeasurementProtocol& p, const CountsRecord& r, std::size_t s) {
  std::uint64_t sum = 0;
  for (auto j : p.setting_rows(s)) sum += r.counts[j];
  return sum;
}

TEST(SeedTest, SplitMixReferenceValue) {
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(SeedTest, StreamsAreDeterministicAndDistinct) {
  auto a = make_rng({7, 3});
  auto b = make_rng({7, 3});
  auto c = make_rng({7, 4});
  auto d = make_rng({8, 3});
  const auto xa = a();
  EXPECT_EQ(xa, b());
  EXPECT_NE(xa, c());
  EXPECT_NE(xa, d());
  EXPECT_NE((SeedSpec{7, 3}.derive(1)), (SeedSpec{7, 3}.derive(2)));
  EXPECT_EQ((SeedSpec{7, 3}.derive(1)), (SeedSpec{7, 3}.derive(1)));
}

TEST(HaarStateTest, SameSeedSameState) {
  const auto a = haar_random_state(5, SeedSpec{1, 2});
  const auto b = haar_random_state(5, SeedSpec{1, 2});
  const auto c = haar_random_state(5, SeedSpec{1, 3});
  EXPECT_EQ(a.amps(), b.amps());
  EXPECT_NE(a.amps(), c.amps());
  EXPECT_NEAR(a.amps().norm(), 1.0, 1e-12);
}

TEST(HaarStateTest, RejectsSmallDimension) {
  EXPECT_THROW(haar_random_state(1, SeedSpec{1, 0}), InvalidArgument);
}

TEST(HaarStateTest, QubitPopulationMean) {
  auto rng = make_rng({2, 0});
  std::vector<double> pop;
  for (int k = 0; k < 20000; ++k) pop.push_back(std::norm(haar_random_state(2, rng)[0]));
  // |c_0|^2 is uniform on [0,1] for a qubit.
  EXPECT_NEAR(testing::mean(pop), 0.5, 3 * std::sqrt(1.0 / 12.0 / 20000));
  const auto ks = testing::ks_one_sample(pop, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_GT(ks.pvalue, 0.01);
}

TEST(HaarStateTest, EightLevelPopulations) {
  const std::size_t dim = 8, n = 100000;
  auto rng = make_rng({3, 0});
  std::vector<double> sums(dim, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = haar_random_state(dim, rng);
    for (std::size_t i = 0; i < dim; ++i) sums[i] += std::norm(c[i]);
  }
  // Var |c_k|^2 = (d - 1) / (d^2 (d + 1)) for Haar states.
  const double sigma = std::sqrt((dim - 1.0) / (dim * dim * (dim + 1.0)) / n);
  for (double s : sums) EXPECT_NEAR(s / n, 1.0 / dim, 3 * sigma);
}

TEST(HaarStateTest, RotationInvariance) {
  std::mt19937_64 urng(51);
  const CMatrix v = testing::random_unitary(4, urng);
  auto rng = make_rng({4, 0});
  std::vector<double> plain, rotated;
  for (int k = 0; k < 10000; ++k) {
    plain.push_back(std::norm(haar_random_state(4, rng)[0]));
    rotated.push_back(std::norm((v * haar_random_state(4, rng).amps())(0)));
  }
  EXPECT_GT(testing::ks_two_sample(plain, rotated).pvalue, 0.01);
}

TEST(SimulateCountsTest, DeterministicOutcome) {
  const auto p = pauli_protocol(1);
  const auto r = simulate_counts(p, StateVector::basis(2, 0), 3000, SeedSpec{1, 0});
  const auto& z = p.setting_rows(0);
  EXPECT_EQ(r.counts[z[0]], 1000u);
  EXPECT_EQ(r.counts[z[1]], 0u);
  EXPECT_EQ(std::accumulate(r.counts.begin(), r.counts.end(), std::uint64_t{0}), 3000u);
}

TEST(SimulateCountsTest, BinomialMeanForPlusState) {
  const auto p = pauli_protocol(1);
  const StateVector plus(CVector::Constant(2, 1.0));
  const std::size_t n_seeds = 400;
  double sum = 0.0;
  for (std::size_t t = 0; t < n_seeds; ++t) {
    sum += double(simulate_counts(p, plus, 3000, SeedSpec{9, t}).counts[p.setting_rows(0)[0]]);
  }
  EXPECT_NEAR(sum / n_seeds, 500.0, 3 * std::sqrt(250.0 / n_seeds));
}

TEST(SimulateCountsTest, TotalsAndPerSettingShares) {
  for (const auto& p : {pauli_protocol(2), mub_protocol(5)}) {
    const auto truth = haar_random_state(p.dim(), SeedSpec{6, 0});
    const std::uint64_t n = 600 * p.n_settings();
    const auto r = simulate_counts(p, truth, n, SeedSpec{6, 1});
    EXPECT_EQ(r.n_total, n);
    EXPECT_EQ(std::accumulate(r.counts.begin(), r.counts.end(), std::uint64_t{0}), n);
    for (std::size_t s = 0; s < p.n_settings(); ++s) EXPECT_EQ(setting_total(p, r, s), 600u);
    EXPECT_NO_THROW(r.validate(p));
  }
}

TEST(SimulateCountsTest, ReproducibleAndSeedSensitive) {
  const auto p = mub_protocol(3);
  const auto truth = haar_random_state(3, SeedSpec{8, 0});
  const auto a = simulate_counts(p, truth, 4000, SeedSpec{8, 1});
  const auto b = simulate_counts(p, truth, 4000, SeedSpec{8, 1});
  const auto c = simulate_counts(p, truth, 4000, SeedSpec{8, 2});
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, c.counts);
  ASSERT_TRUE(a.seed.has_value());
  EXPECT_EQ(*a.seed, (SeedSpec{8, 1}));
}

TEST(SimulateCountsTest, RejectsIndivisibleOrEmptySamples) {
  const auto p = pauli_protocol(1);
  EXPECT_THROW(simulate_counts(p, StateVector::basis(2, 0), 1000, SeedSpec{}), InvalidArgument);
  EXPECT_THROW(simulate_counts(p, StateVector::basis(2, 0), 0, SeedSpec{}), InvalidArgument);
  EXPECT_THROW(simulate_counts(p, StateVector::basis(3, 0), 3000, SeedSpec{}), DimensionError);
}

TEST(SimulateCountsTest, ZeroProbabilityLastRowStaysEmpty) {
  const auto p = pauli_protocol(2);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto r = simulate_counts(p, StateVector::basis(4, 0), 9000, SeedSpec{10, t});
    EXPECT_EQ(r.counts[p.setting_rows(0)[3]], 0u);
    EXPECT_EQ(r.counts[p.setting_rows(0)[0]], 1000u);
  }
}

TEST(SimulateNoisyCountsTest, IdentityChannelMatchesNoiseless) {
  const auto p = pauli_protocol(1);
  const auto truth = haar_random_state(2, SeedSpec{11, 0});
  const auto a = simulate_noisy_counts(p, truth, KrausChannel::identity(2), 3000, SeedSpec{11, 1});
  const auto b = simulate_counts(p, truth, 3000, SeedSpec{11, 1});
  EXPECT_EQ(a.counts, b.counts);
}

TEST(SimulateNoisyCountsTest, StateLevelPathIsChannelThenSample) {
  const auto p = mub_protocol(3);
  const auto truth = haar_random_state(3, SeedSpec{12, 0});
  const auto ch = dephasing_channel(3, {0.3});
  const auto a = simulate_noisy_counts(p, truth, ch, 4000, SeedSpec{12, 1});
  const auto b = simulate_counts(p, apply_channel(ch, density_from_pure(truth)), 4000, SeedSpec{12, 1});
  EXPECT_EQ(a.counts, b.counts);
}

TEST(SimulateNoisyCountsTest, CalibrationFlipRate) {
  const auto p = pauli_protocol(1);
  const NoiseModel noise{std::nullopt, readout_channel({0.0156, 0.0830})};
  const std::size_t n_seeds = 400;
  double sum = 0.0;
  for (std::size_t t = 0; t < n_seeds; ++t) {
    const auto r = simulate_noisy_counts(p, StateVector::basis(2, 0), noise, 3072, SeedSpec{13, t});
    sum += double(r.counts[p.setting_rows(0)[1]]);
  }
  const double expect = 1024 * 0.0156;
  EXPECT_NEAR(sum / n_seeds, expect, 3 * std::sqrt(expect * (1 - 0.0156) / n_seeds));
}

TEST(SimulateNoisyCountsTest, ExpectedCountsFollowFuzzyProbabilities) {
  const auto p = pauli_protocol(2);
  NoiseSpec spec;
  spec.readout = {{0.0156, 0.0830}};
  const NoiseModel noise = spec.to_model(4);
  const auto truth = haar_random_state(4, SeedSpec{14, 0});
  const RVector lam = probabilities(fuzzy_protocol(p, noise), truth);
  const std::uint64_t n = 9 * 500;
  const std::size_t n_seeds = 300;
  RVector sums = RVector::Zero(p.size());
  for (std::size_t t = 0; t < n_seeds; ++t) {
    const auto r = simulate_noisy_counts(p, truth, noise, n, SeedSpec{14, t + 1});
    for (std::size_t j = 0; j < p.size(); ++j) sums(j) += double(r.counts[j]);
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double expect = double(n) * lam(j);
    const double sigma = std::sqrt(expect * (1 - 9 * lam(j)) / n_seeds) + 1e-9;
    EXPECT_NEAR(sums(j) / n_seeds, expect, 4.5 * sigma) << "row " << j;
  }
}

TEST(CountsRecordTest, ValidateCatchesInconsistency) {
  const auto p = pauli_protocol(1);
  CountsRecord r{"pauli-2", 30, {10, 0, 5, 5, 3, 7}, std::nullopt};
  EXPECT_NO_THROW(r.validate(p));
  r.counts[0] = 11;
  EXPECT_THROW(r.validate(p), InvalidArgument);
  r.counts = {10, 0, 6, 4, 3, 7};
  r.n_total = 30;
  EXPECT_NO_THROW(r.validate(p));
  r.counts = {12, 0, 4, 4, 3, 7};
  EXPECT_THROW(r.validate(p), InvalidArgument);
  r.counts = {10, 0, 5, 5, 10};
  EXPECT_THROW(r.validate(p), InvalidArgument);
}

}  // namespace
}  // namespace qtomo
