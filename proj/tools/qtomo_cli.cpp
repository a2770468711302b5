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

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "qtomo/error.hpp"
#include "qtomo/fuzzy.hpp"
#include "qtomo/harness.hpp"
#include "qtomo/infotheory.hpp"
#include "qtomo/json_io.hpp"
#include "qtomo/mle.hpp"
#include "qtomo/sampling.hpp"

namespace {

using namespace qtomo;
namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kConfigError = 1, kNumericalError = 2, kIoError = 3 };

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> shots;
  std::string format = "both";
};

struct ToolOptions {
  std::string protocol;
  std::string state;
  std::string counts;
  std::string noise;
  std::string truth;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "experiment config JSON");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--trials", o.trials, "trials per state");
  cmd->add_option("--shots", o.shots, "total sample size n");
  cmd->add_option("--format", o.format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
}

ExperimentConfig load_config(const CommonOptions& o, ExperimentKind kind) {
  ExperimentConfig cfg = default_config(kind);
  if (!o.config.empty()) {
    Json j = read_json_file(o.config);
    if (!j.contains("experiment")) j["experiment"] = to_string(kind);
    cfg = config_from_json(j);
    if (cfg.experiment != kind) {
      throw InvalidArgument("config describes a " + to_string(cfg.experiment) +
                            " experiment, not " + to_string(kind));
    }
  }
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.trials) cfg.n_trials = *o.trials;
  if (o.shots) cfg.n_total = *o.shots;
  if (!o.out.empty()) cfg.output_path = o.out;
  cfg.validate();
  return cfg;
}

OutputFormat output_format(const std::string& name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  return OutputFormat::kBoth;
}

fs::path out_dir(const CommonOptions& o) { return o.out.empty() ? fs::path(".") : fs::path(o.out); }

void write_json(const fs::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
  std::cout << path.string() << "\n";
}

std::optional<NoiseModel> noise_for(const std::string& path, std::size_t dim) {
  if (path.empty()) return std::nullopt;
  Json j = read_json_file(path);
  if (j.contains("noise")) j = j.at("noise");
  return noise_from_json(j).to_model(dim);
}

MeasurementProtocol maybe_fuzzy(const MeasurementProtocol& p, const std::optional<NoiseModel>& noise) {
  return noise ? fuzzy_protocol(p, *noise) : p;
}

int run_experiment_cmd(const CommonOptions& o, ExperimentKind kind) {
  const ExperimentConfig cfg = load_config(o, kind);
  const ExperimentResult res = run_experiment(cfg);
  const fs::path dir = o.out.empty() ? fs::path(cfg.output_path) : fs::path(o.out);
  for (const auto& p : emit_results(res, dir, output_format(o.format))) std::cout << p.string() << "\n";
  for (const auto& s : res.supremacy) {
    std::cerr << s.group << ": standard " << s.standard_mean_loss << ", fuzzy " << s.fuzzy_mean_loss
              << ", supremacy " << s.supremacy << "\n";
  }
  for (const auto& a : res.sweep_summary) {
    std::cerr << "dim " << a.dim << " noise " << a.noise << ": mean L " << a.mean_l << " (x"
              << a.ratio_to_noiseless << ")\n";
  }
  return kOk;
}

// Simulates counts for one state; the protocol and truth are written next to the counts.
int run_simulate(const CommonOptions& o, const ToolOptions& t) {
  const ExperimentConfig cfg = load_config(o, ExperimentKind::kCompare);
  const std::size_t dim = cfg.dims.front();
  const MeasurementProtocol p = t.protocol.empty() ? build_protocol(cfg.protocol, dim)
                                                   : protocol_from_json(read_json_file(t.protocol));
  const SeedSpec seed{cfg.master_seed, 0};
  const StateVector truth = t.state.empty() ? haar_random_state(p.dim(), seed.derive(1))
                                            : state_from_json(read_json_file(t.state));
  const std::uint64_t n = usable_sample_size(cfg.n_total, p.n_settings());
  if (n == 0) throw InvalidArgument("--shots smaller than the number of settings");
  const NoiseModel noise = cfg.noise.empty() ? NoiseModel{} : cfg.noise.to_model(p.dim());
  CountsRecord counts = noise.empty() ? simulate_counts(p, truth, n, seed.derive(2))
                                      : simulate_noisy_counts(p, truth, noise, n, seed.derive(2));
  counts.protocol_id = t.protocol.empty() ? to_string(cfg.protocol) + "-" + std::to_string(dim)
                                          : fs::path(t.protocol).stem().string();
  const fs::path dir = out_dir(o);
  fs::create_directories(dir);
  write_json(dir / "protocol.json", protocol_to_json(p));
  write_json(dir / "state.json", state_to_json(truth));
  write_json(dir / "counts.json", counts_to_json(counts));
  return kOk;
}

int run_reconstruct(const CommonOptions& o, const ToolOptions& t) {
  if (t.protocol.empty() || t.counts.empty()) {
    throw InvalidArgument("reconstruct needs --protocol and --counts");
  }
  const MeasurementProtocol ideal = protocol_from_json(read_json_file(t.protocol));
  const CountsRecord counts = counts_from_json(read_json_file(t.counts));
  const MeasurementProtocol p = maybe_fuzzy(ideal, noise_for(t.noise, ideal.dim()));
  ReconstructionOptions opts;
  if (!o.config.empty()) opts = config_from_json(read_json_file(o.config)).reconstruction;
  const ReconstructionResult r = reconstruct_pure(p, counts, opts);
  std::optional<StateVector> truth;
  if (!t.truth.empty()) truth = state_from_json(read_json_file(t.truth));
  const fs::path dir = out_dir(o);
  fs::create_directories(dir);
  write_json(dir / "reconstruction.json", reconstruction_to_json(r, truth));
  if (!r.converged) throw NumericalError("reconstruction did not converge");
  return kOk;
}

int run_theory(const CommonOptions& o, const ToolOptions& t) {
  if (t.protocol.empty() || t.state.empty() || !o.shots) {
    throw InvalidArgument("theory needs --protocol, --state and --shots");
  }
  const MeasurementProtocol ideal = protocol_from_json(read_json_file(t.protocol));
  const MeasurementProtocol p = maybe_fuzzy(ideal, noise_for(t.noise, ideal.dim()));
  const StateVector state = state_from_json(read_json_file(t.state));
  const PrecisionProfile dp = precision_profile(information_matrix(p, state, *o.shots));
  const fs::path dir = out_dir(o);
  fs::create_directories(dir);
  write_json(dir / "theory.json", theory_to_json(dp, *o.shots));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pure-state tomography with fuzzy measurement models"};
  app.require_subcommand(1);
  CommonOptions common;
  ToolOptions tool;

  auto* simulate = app.add_subcommand("simulate", "simulate measurement counts for one state");
  auto* reconstruct = app.add_subcommand("reconstruct", "maximum-likelihood reconstruction");
  auto* theory = app.add_subcommand("theory", "precision profile and expected loss");
  auto* compare = app.add_subcommand("compare", "standard versus fuzzy reconstruction");
  auto* sweep = app.add_subcommand("sweep", "loss function over dimension and readout noise");
  auto* qudit = app.add_subcommand("qudit", "qudit tomography under dephasing");
  for (auto* cmd : {simulate, reconstruct, theory, compare, sweep, qudit}) add_common(cmd, common);
  for (auto* cmd : {simulate, reconstruct, theory}) {
    cmd->add_option("--protocol", tool.protocol, "protocol JSON");
  }
  for (auto* cmd : {simulate, theory}) {
    cmd->add_option("--state", tool.state, "state JSON");
  }
  for (auto* cmd : {reconstruct, theory}) {
    cmd->add_option("--noise", tool.noise, "noise block JSON");
  }
  reconstruct->add_option("--counts", tool.counts, "counts JSON");
  reconstruct->add_option("--truth", tool.truth, "true state JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate->parsed()) return run_simulate(common, tool);
    if (reconstruct->parsed()) return run_reconstruct(common, tool);
    if (theory->parsed()) return run_theory(common, tool);
    if (compare->parsed()) return run_experiment_cmd(common, ExperimentKind::kCompare);
    if (sweep->parsed()) return run_experiment_cmd(common, ExperimentKind::kSweep);
    return run_experiment_cmd(common, ExperimentKind::kQuditDephasing);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
