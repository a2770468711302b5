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
#include <random>
#include <string>
#include <vector>

#include "qtomo/noise.hpp"
#include "qtomo/protocols.hpp"
#include "qtomo/quantum_core.hpp"

namespace qtomo {

/// (master_seed, trial_index) -> independent generator stream per trial.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;

  /// Sub-stream for a different purpose within the same trial.
  SeedSpec derive(std::uint64_t tag) const;

  bool operator==(const SeedSpec&) const = default;
};

std::uint64_t splitmix64(std::uint64_t x);

using Rng = std::mt19937_64;
Rng make_rng(const SeedSpec& seed);

struct CountsRecord {
  std::string protocol_id;
  std::uint64_t n_total = 0;
  std::vector<std::uint64_t> counts;
  std::optional<SeedSpec> seed;

  /// Checks sum_j k_j = n_total and equal per-setting totals against `p`.
  void validate(const MeasurementProtocol& p) const;
};

/// Normalized vector of i.i.d. standard complex Gaussians (Haar-distributed).
StateVector haar_random_state(std::size_t dim, const SeedSpec& seed);
StateVector haar_random_state(std::size_t dim, Rng& rng);

/// One multinomial draw of n_total / n_settings shots per setting.
CountsRecord simulate_counts(const MeasurementProtocol& p, const AnyState& truth,
                             std::uint64_t n_total, const SeedSpec& seed);

/// Counts for the channel output: simulate_counts on apply_channel(ch, |c><c|).
CountsRecord simulate_noisy_counts(const MeasurementProtocol& p, const StateVector& truth,
                                   const KrausChannel& ch, std::uint64_t n_total,
                                   const SeedSpec& seed);

/// Counts with decoherence before and readout errors after each setting's
/// basis change. Without readout noise this is the state-level overload.
CountsRecord simulate_noisy_counts(const MeasurementProtocol& p, const StateVector& truth,
                                   const NoiseModel& noise, std::uint64_t n_total,
                                   const SeedSpec& seed);

/// Per-row outcome probabilities under `noise`, computed by propagating the
/// state through each setting's channel (independent of the fuzzy operators).
RVector noisy_probabilities(const MeasurementProtocol& p, const StateVector& truth,
                            const NoiseModel& noise);

/// Multinomial draw per setting from row probabilities `lambda`.
CountsRecord draw_counts(const MeasurementProtocol& p, const RVector& lambda,
                         std::uint64_t n_total, const SeedSpec& seed);

}  // namespace qtomo
