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

#include "qtomo/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qtomo/error.hpp"

namespace qtomo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeedSpec SeedSpec::derive(std::uint64_t tag) const {
  return {splitmix64(master_seed ^ splitmix64(tag ^ 0x5851f42d4c957f2dULL)), trial_index};
}

Rng make_rng(const SeedSpec& seed) {
  const std::uint64_t mixed = splitmix64(seed.master_seed ^ splitmix64(seed.trial_index));
  std::seed_seq seq{static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
  return Rng(seq);
}

void CountsRecord::validate(const MeasurementProtocol& p) const {
  if (counts.size() != p.size()) {
    throw InvalidArgument("counts: expected " + std::to_string(p.size()) + " rows, got " +
                          std::to_string(counts.size()));
  }
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total != n_total) throw InvalidArgument("counts: row counts do not sum to n_total");
  if (n_total % p.n_settings() != 0) {
    throw InvalidArgument("counts: n_total is not divisible by the number of settings");
  }
  const std::uint64_t shots = n_total / p.n_settings();
  for (std::size_t s = 0; s < p.n_settings(); ++s) {
    std::uint64_t sum = 0;
    for (auto j : p.setting_rows(s)) sum += counts[j];
    if (sum != shots) {
      throw InvalidArgument("counts: setting " + std::to_string(s) + " has " +
                            std::to_string(sum) + " shots, expected " + std::to_string(shots));
    }
  }
}

StateVector haar_random_state(std::size_t dim, Rng& rng) {
  if (dim < 2) throw InvalidArgument("haar_random_state: dimension must be at least 2");
  std::normal_distribution<double> normal;
  CVector amps(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    amps(i) = Complex(re, im);
  }
  return StateVector(std::move(amps));
}

StateVector haar_random_state(std::size_t dim, const SeedSpec& seed) {
  Rng rng = make_rng(seed);
  return haar_random_state(dim, rng);
}

CountsRecord draw_counts(const MeasurementProtocol& p, const RVector& lambda,
                         std::uint64_t n_total, const SeedSpec& seed) {
  if (static_cast<std::size_t>(lambda.size()) != p.size()) {
    throw DimensionError("draw_counts: probability vector length differs from protocol size");
  }
  if (n_total == 0 || n_total % p.n_settings() != 0) {
    throw InvalidArgument("n_total=" + std::to_string(n_total) +
                          " is not a positive multiple of the " +
                          std::to_string(p.n_settings()) + " settings");
  }
  const std::uint64_t shots = n_total / p.n_settings();
  Rng rng = make_rng(seed);
  CountsRecord rec;
  rec.n_total = n_total;
  rec.counts.assign(p.size(), 0);
  rec.seed = seed;
  for (std::size_t s = 0; s < p.n_settings(); ++s) {
    const auto& idx = p.setting_rows(s);
    std::vector<double> probs;
    probs.reserve(idx.size());
    for (auto j : idx) probs.push_back(std::clamp(lambda(static_cast<Eigen::Index>(j)), 0.0, 1.0));
    double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (!(mass > 0.0)) throw NumericalError("draw_counts: setting has zero probability mass");
    std::size_t last = 0;
    for (std::size_t r = 0; r < probs.size(); ++r) {
      if (probs[r] > 0.0) last = r;
    }
    // Sequential conditional binomials; the last row with mass takes the rest.
    std::uint64_t remaining = shots;
    for (std::size_t r = 0; r <= last; ++r) {
      std::uint64_t k = remaining;
      if (r < last && probs[r] > 0.0) {
        const double q = std::clamp(probs[r] / mass, 0.0, 1.0);
        k = std::binomial_distribution<std::uint64_t>(remaining, q)(rng);
      } else if (r < last) {
        k = 0;
      }
      rec.counts[idx[r]] = k;
      remaining -= k;
      mass -= probs[r];
    }
  }
  return rec;
}

CountsRecord simulate_counts(const MeasurementProtocol& p, const AnyState& truth,
                             std::uint64_t n_total, const SeedSpec& seed) {
  return draw_counts(p, probabilities(p, truth), n_total, seed);
}

CountsRecord simulate_noisy_counts(const MeasurementProtocol& p, const StateVector& truth,
                                   const KrausChannel& ch, std::uint64_t n_total,
                                   const SeedSpec& seed) {
  return simulate_counts(p, apply_channel(ch, density_from_pure(truth)), n_total, seed);
}

RVector noisy_probabilities(const MeasurementProtocol& p, const StateVector& truth,
                            const NoiseModel& noise) {
  if (!noise.readout) {
    if (!noise.decoherence) return probabilities(p, truth);
    return probabilities(p, apply_channel(*noise.decoherence, density_from_pure(truth)));
  }
  const DensityMatrix rho = density_from_pure(truth);
  RVector lambda(static_cast<Eigen::Index>(p.size()));
  for (std::size_t s = 0; s < p.n_settings(); ++s) {
    const auto u = p.setting_basis(s);
    if (!u) {
      throw InvalidArgument("noisy_probabilities: setting " + std::to_string(s) +
                            " is not a projective basis");
    }
    const DensityMatrix out = apply_channel(setting_channel(noise, *u), rho);
    const auto& idx = p.setting_rows(s);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const double weight = p.row(idx[b]).op.trace().real();
      const auto bb = static_cast<Eigen::Index>(b);
      lambda(static_cast<Eigen::Index>(idx[b])) = std::max(0.0, weight * out.mat()(bb, bb).real());
    }
  }
  return lambda;
}

CountsRecord simulate_noisy_counts(const MeasurementProtocol& p, const StateVector& truth,
                                   const NoiseModel& noise, std::uint64_t n_total,
                                   const SeedSpec& seed) {
  if (!noise.readout) {
    if (!noise.decoherence) return simulate_counts(p, truth, n_total, seed);
    return simulate_noisy_counts(p, truth, *noise.decoherence, n_total, seed);
  }
  return draw_counts(p, noisy_probabilities(p, truth, noise), n_total, seed);
}

}  // namespace qtomo
