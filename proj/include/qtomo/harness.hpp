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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtomo/mle.hpp"
#include "qtomo/noise.hpp"
#include "qtomo/protocols.hpp"
#include "qtomo/quantum_core.hpp"

namespace qtomo {

enum class ExperimentKind { kCompare, kSweep, kQuditDephasing };
enum class ProtocolKind { kPauli, kMub };

std::string to_string(ExperimentKind kind);
std::string to_string(ProtocolKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);
ProtocolKind parse_protocol_kind(const std::string& name);

struct NamedState {
  std::string id;
  StateVector state;
};

/// The four single-qubit states of the superconducting-qubit comparison:
/// [1;-i], [1;i], [1;1], [1;-1] (normalized).
std::vector<NamedState> table1_states();

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kCompare;
  std::vector<std::size_t> dims{2};
  ProtocolKind protocol = ProtocolKind::kPauli;
  NoiseSpec noise;
  std::vector<double> noise_levels{0.0, 0.03, 0.1};  ///< symmetric readout levels for sweeps
  std::uint64_t n_total = 3072;
  std::size_t n_trials = 100;
  std::size_t n_haar_states = 200;
  std::uint64_t master_seed = 1;
  std::string output_path = "results";
  std::vector<NamedState> states;  ///< compare: explicit states; empty means the default set
  ReconstructionOptions reconstruction;

  /// Throws InvalidArgument on non-positive counts or unsupported dimensions.
  void validate() const;
};

/// Defaults for each experiment at desk scale.
ExperimentConfig default_config(ExperimentKind kind);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::string state_id;
  std::string model;  ///< "standard" or "fuzzy"
  std::size_t dim = 0;
  double fidelity = 0.0;
  double loss = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<double> theory_loss;  ///< sum_j d_j for the fuzzy protocol at the true state

  bool operator==(const TrialRecord&) const = default;
};

struct SweepRecord {
  std::size_t dim = 0;
  double noise = 0.0;
  std::string state_id;
  double loss_function = 0.0;  ///< L = n <1 - F> from the precision profile

  bool operator==(const SweepRecord&) const = default;
};

/// Loss statistics over one (state group, model) cell.
struct LossAggregate {
  std::string group;
  std::string model;
  std::size_t count = 0;
  double min_loss = 0.0;
  double max_loss = 0.0;
  double mean_loss = 0.0;
  double median_loss = 0.0;
  double loss_function = 0.0;  ///< n * mean_loss
  double mean_fidelity = 0.0;
  double median_fidelity = 0.0;
  std::size_t failures = 0;

  bool operator==(const LossAggregate&) const = default;
};

struct SupremacyAggregate {
  std::string group;
  double standard_mean_loss = 0.0;
  double fuzzy_mean_loss = 0.0;
  double supremacy = 0.0;  ///< standard_mean_loss / fuzzy_mean_loss
  double median_trial_supremacy = 0.0;
  std::optional<double> mean_theory_loss;

  bool operator==(const SupremacyAggregate&) const = default;
};

struct SweepAggregate {
  std::size_t dim = 0;
  double noise = 0.0;
  std::size_t count = 0;
  double min_l = 0.0;
  double mean_l = 0.0;
  double max_l = 0.0;
  double ratio_to_noiseless = 0.0;  ///< mean_l / mean_l at noise 0 for the same dim (0 if absent)

  bool operator==(const SweepAggregate&) const = default;
};

struct ExperimentResult {
  ExperimentKind experiment = ExperimentKind::kCompare;
  std::uint64_t master_seed = 0;
  std::uint64_t n_effective = 0;  ///< shots actually simulated (multiple of the setting count)
  std::string config_json;        ///< canonical dump of the config that produced the result
  std::string timestamp;          ///< excluded from reproducibility comparisons

  std::vector<TrialRecord> trials;
  std::vector<SweepRecord> sweep;

  std::vector<LossAggregate> losses;
  std::vector<SupremacyAggregate> supremacy;
  std::vector<SweepAggregate> sweep_summary;
};

/// Largest multiple of n_settings not exceeding n_total.
std::uint64_t usable_sample_size(std::uint64_t n_total, std::size_t n_settings);

MeasurementProtocol build_protocol(ProtocolKind kind, std::size_t dim);

/// Recomputes every aggregate from the per-trial / per-state records.
void recompute_aggregates(ExperimentResult& res);

/// Table-1-style standard-vs-fuzzy comparison on fixed states.
/// Throws NumericalError when more than 10% of reconstructions fail to converge.
ExperimentResult run_compare(const ExperimentConfig& cfg);

/// Noise-penalty sweep: L statistics over Haar states per (dim, readout level).
ExperimentResult run_sweep(const ExperimentConfig& cfg);

/// Qudit under phase relaxation: Haar states, both models, plus the theory loss.
ExperimentResult run_qudit_dephasing(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class OutputFormat { kBoth, kJson, kCsv };

/// Writes <dir>/<experiment>.json plus trial, summary and (for sweeps) plot CSVs.
/// Returns the written paths. Throws IoError with the offending path.
std::vector<std::filesystem::path> emit_results(const ExperimentResult& res,
                                                const std::filesystem::path& dir,
                                                OutputFormat format = OutputFormat::kBoth);

/// Reads a result JSON and verifies its stored aggregates against the records.
ExperimentResult load_results(const std::filesystem::path& json_path);

}  // namespace qtomo
