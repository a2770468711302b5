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

#include "qtomo/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "qtomo/error.hpp"
#include "qtomo/fuzzy.hpp"
#include "qtomo/infotheory.hpp"
#include "qtomo/json_io.hpp"
#include "qtomo/sampling.hpp"

namespace qtomo {

namespace {

constexpr std::uint64_t kStateTag = 0x5354415445ULL;
constexpr std::uint64_t kCountsTag = 0x434f554e5453ULL;
constexpr double kMaxFailureFraction = 0.10;
constexpr double kAggregateTol = 1e-12;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool is_supported_dim(ProtocolKind kind, std::size_t dim) {
  if (dim < 2 || dim > kDefaultMaxProtocolDim) return false;
  if (std::has_single_bit(dim)) return true;
  if (kind == ProtocolKind::kPauli) return false;
  for (std::size_t f = 2; f * f <= dim; ++f) {
    if (dim % f == 0) return false;
  }
  return true;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string group_of(const ExperimentResult& res, const TrialRecord& t) {
  return res.experiment == ExperimentKind::kCompare ? t.state_id : std::string("all");
}

struct TrialPair {
  const TrialRecord* standard = nullptr;
  const TrialRecord* fuzzy = nullptr;
};

void check_failures(const ExperimentResult& res) {
  std::size_t failed = 0;
  for (const auto& t : res.trials) failed += t.converged ? 0 : 1;
  if (!res.trials.empty() &&
      static_cast<double>(failed) > kMaxFailureFraction * static_cast<double>(res.trials.size())) {
    throw NumericalError(std::to_string(failed) + " of " + std::to_string(res.trials.size()) +
                         " reconstructions did not converge");
  }
}

void stamp(ExperimentResult& res, const ExperimentConfig& cfg) {
  res.experiment = cfg.experiment;
  res.master_seed = cfg.master_seed;
  res.config_json = config_to_json(cfg).dump();
  res.timestamp = utc_timestamp();
}

// Simulates one trial of `truth` under `noise`, reconstructs with both models.
void run_trial(const MeasurementProtocol& ideal, const MeasurementProtocol& fuzzy,
               const NoiseModel& noise, const StateVector& truth, const std::string& state_id,
               std::uint64_t trial, std::uint64_t n, const ExperimentConfig& cfg,
               std::optional<double> theory_loss, ExperimentResult& res) {
  const SeedSpec seed{cfg.master_seed, trial};
  const CountsRecord counts = simulate_noisy_counts(ideal, truth, noise, n, seed.derive(kCountsTag));
  const ReconstructionResult standard = reconstruct_pure(ideal, counts, cfg.reconstruction);
  const ReconstructionResult fz = reconstruct_pure(fuzzy, counts, cfg.reconstruction);
  for (const auto* r : {&standard, &fz}) {
    const double f = fidelity(truth, r->estimate);
    res.trials.push_back({trial, state_id, r == &standard ? "standard" : "fuzzy", truth.dim(), f,
                          1.0 - f, r->iterations, r->converged, theory_loss});
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCompare: return "compare";
    case ExperimentKind::kSweep: return "sweep";
    case ExperimentKind::kQuditDephasing: return "qudit_dephasing";
  }
  return "unknown";
}

std::string to_string(ProtocolKind kind) {
  return kind == ProtocolKind::kPauli ? "pauli" : "mub";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "compare") return ExperimentKind::kCompare;
  if (name == "sweep") return ExperimentKind::kSweep;
  if (name == "qudit_dephasing" || name == "qudit") return ExperimentKind::kQuditDephasing;
  throw InvalidArgument("unknown experiment \"" + name + "\"");
}

ProtocolKind parse_protocol_kind(const std::string& name) {
  if (name == "pauli") return ProtocolKind::kPauli;
  if (name == "mub") return ProtocolKind::kMub;
  throw InvalidArgument("unknown protocol \"" + name + "\"");
}

std::vector<NamedState> table1_states() {
  auto make = [](Complex b) { return StateVector((CVector(2) << 1.0, b).finished()); };
  return {{"[1;-i]", make(-kI)}, {"[1;i]", make(kI)}, {"[1;1]", make(1.0)}, {"[1;-1]", make(-1.0)}};
}

void ExperimentConfig::validate() const {
  if (dims.empty()) throw InvalidArgument("config: dims must not be empty");
  for (auto d : dims) {
    if (!is_supported_dim(protocol, d)) {
      throw InvalidArgument("config: dimension " + std::to_string(d) + " unsupported by the " +
                            to_string(protocol) + " protocol");
    }
  }
  if (n_total == 0 || n_trials == 0 || n_haar_states == 0) {
    throw InvalidArgument("config: n_total, n_trials and n_haar_states must be positive");
  }
  for (double p : noise_levels) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("config: noise levels must lie in [0, 1]");
  }
  if (experiment == ExperimentKind::kCompare && noise.empty()) {
    throw InvalidArgument("config: compare needs a noise block");
  }
  if (experiment == ExperimentKind::kSweep && protocol != ProtocolKind::kPauli) {
    throw InvalidArgument("config: sweep uses the pauli protocol");
  }
  for (const auto& s : states) {
    if (std::find(dims.begin(), dims.end(), s.state.dim()) == dims.end()) {
      throw InvalidArgument("config: state " + s.id + " does not match any configured dim");
    }
  }
  reconstruction.validate();
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::kCompare:
      cfg.dims = {2};
      cfg.noise.readout = {{0.0156, 0.0830}};
      cfg.n_total = 3072;
      cfg.n_trials = 100;
      break;
    case ExperimentKind::kSweep:
      cfg.dims = {2, 4, 8, 16};
      cfg.n_total = 10000;
      cfg.n_haar_states = 200;
      break;
    case ExperimentKind::kQuditDephasing:
      cfg.dims = {8};
      cfg.protocol = ProtocolKind::kMub;
      cfg.noise.dephasing = DephasingStrength{0.05};
      cfg.n_total = 10000;
      cfg.n_trials = 20;
      break;
  }
  return cfg;
}

std::uint64_t usable_sample_size(std::uint64_t n_total, std::size_t n_settings) {
  return n_settings == 0 ? 0 : (n_total / n_settings) * n_settings;
}

MeasurementProtocol build_protocol(ProtocolKind kind, std::size_t dim) {
  if (kind == ProtocolKind::kMub) return mub_protocol(dim);
  if (!std::has_single_bit(dim)) {
    throw InvalidArgument("pauli protocol needs a power-of-2 dimension, got " + std::to_string(dim));
  }
  return pauli_protocol(static_cast<std::size_t>(std::countr_zero(dim)));
}

void recompute_aggregates(ExperimentResult& res) {
  res.losses.clear();
  res.supremacy.clear();
  res.sweep_summary.clear();

  // Groups in first-appearance order keep the output deterministic.
  std::vector<std::string> groups;
  std::map<std::pair<std::string, std::string>, std::vector<const TrialRecord*>> cells;
  std::map<std::string, std::map<std::pair<std::uint64_t, std::string>, TrialPair>> pairs;
  for (const auto& t : res.trials) {
    const std::string g = group_of(res, t);
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    cells[{g, t.model}].push_back(&t);
    auto& pair = pairs[g][{t.trial, t.state_id}];
    (t.model == "standard" ? pair.standard : pair.fuzzy) = &t;
  }
  const double n = static_cast<double>(res.n_effective);
  for (const auto& g : groups) {
    for (const char* model : {"standard", "fuzzy"}) {
      auto it = cells.find({g, model});
      if (it == cells.end()) continue;
      std::vector<double> loss, fid;
      LossAggregate a;
      a.group = g;
      a.model = model;
      for (const auto* t : it->second) {
        loss.push_back(t->loss);
        fid.push_back(t->fidelity);
        a.failures += t->converged ? 0 : 1;
      }
      a.count = loss.size();
      a.min_loss = *std::min_element(loss.begin(), loss.end());
      a.max_loss = *std::max_element(loss.begin(), loss.end());
      a.mean_loss = mean(loss);
      a.median_loss = median(loss);
      a.loss_function = n * a.mean_loss;
      a.mean_fidelity = mean(fid);
      a.median_fidelity = median(fid);
      res.losses.push_back(a);
    }
    std::vector<double> ratios, std_loss, fz_loss, theory;
    for (const auto& [key, pair] : pairs[g]) {
      if (!pair.standard || !pair.fuzzy) continue;
      std_loss.push_back(pair.standard->loss);
      fz_loss.push_back(pair.fuzzy->loss);
      ratios.push_back(pair.standard->loss /
                       std::max(pair.fuzzy->loss, std::numeric_limits<double>::min()));
      if (pair.fuzzy->theory_loss) theory.push_back(*pair.fuzzy->theory_loss);
    }
    if (std_loss.empty()) continue;
    SupremacyAggregate s;
    s.group = g;
    s.standard_mean_loss = mean(std_loss);
    s.fuzzy_mean_loss = mean(fz_loss);
    s.supremacy = s.standard_mean_loss / std::max(s.fuzzy_mean_loss, std::numeric_limits<double>::min());
    s.median_trial_supremacy = median(ratios);
    if (!theory.empty()) s.mean_theory_loss = mean(theory);
    res.supremacy.push_back(s);
  }

  std::vector<std::pair<std::size_t, double>> cells_order;
  std::map<std::pair<std::size_t, double>, std::vector<double>> sweep_cells;
  for (const auto& s : res.sweep) {
    const auto key = std::make_pair(s.dim, s.noise);
    if (!sweep_cells.count(key)) cells_order.push_back(key);
    sweep_cells[key].push_back(s.loss_function);
  }
  for (const auto& key : cells_order) {
    const auto& v = sweep_cells[key];
    SweepAggregate a;
    a.dim = key.first;
    a.noise = key.second;
    a.count = v.size();
    a.min_l = *std::min_element(v.begin(), v.end());
    a.max_l = *std::max_element(v.begin(), v.end());
    a.mean_l = mean(v);
    auto base = sweep_cells.find({key.first, 0.0});
    a.ratio_to_noiseless = base != sweep_cells.end() ? a.mean_l / mean(base->second) : 0.0;
    res.sweep_summary.push_back(a);
  }
}

ExperimentResult run_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  stamp(res, cfg);
  std::uint64_t trial_index = 0;
  for (auto dim : cfg.dims) {
    const MeasurementProtocol ideal = build_protocol(cfg.protocol, dim);
    const NoiseModel noise = cfg.noise.to_model(dim);
    const MeasurementProtocol fuzzy = fuzzy_protocol(ideal, noise);
    const std::uint64_t n = usable_sample_size(cfg.n_total, ideal.n_settings());
    if (n == 0) throw InvalidArgument("config: n_total smaller than the number of settings");
    res.n_effective = n;

    std::vector<NamedState> states;
    for (const auto& s : cfg.states) {
      if (s.state.dim() == dim) states.push_back(s);
    }
    if (states.empty() && dim == 2) states = table1_states();
    if (states.empty()) {
      for (std::size_t k = 0; k < cfg.n_haar_states; ++k) {
        states.push_back({"d" + std::to_string(dim) + "-haar" + std::to_string(k),
                          haar_random_state(dim, SeedSpec{cfg.master_seed, k}.derive(kStateTag ^ dim))});
      }
    }
    for (const auto& s : states) {
      for (std::size_t t = 0; t < cfg.n_trials; ++t) {
        run_trial(ideal, fuzzy, noise, s.state, s.id, trial_index++, n, cfg, std::nullopt, res);
      }
    }
  }
  recompute_aggregates(res);
  check_failures(res);
  return res;
}

ExperimentResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  stamp(res, cfg);
  for (auto dim : cfg.dims) {
    const MeasurementProtocol ideal = build_protocol(ProtocolKind::kPauli, dim);
    const std::uint64_t n = usable_sample_size(cfg.n_total, ideal.n_settings());
    if (n == 0) throw InvalidArgument("config: n_total smaller than the number of settings");
    res.n_effective = n;
    std::vector<StateVector> states;
    for (std::size_t k = 0; k < cfg.n_haar_states; ++k) {
      states.push_back(haar_random_state(dim, SeedSpec{cfg.master_seed, k}.derive(kStateTag ^ dim)));
    }
    for (double p : cfg.noise_levels) {
      NoiseSpec spec = cfg.noise;
      spec.readout = {ReadoutErrorRates::symmetric(p)};
      const MeasurementProtocol fuzzy = fuzzy_protocol(ideal, spec.to_model(dim));
      for (std::size_t k = 0; k < states.size(); ++k) {
        const PrecisionProfile dp = precision_profile(information_matrix(fuzzy, states[k], n));
        res.sweep.push_back({dim, p, "haar" + std::to_string(k), loss_function(dp, n)});
      }
    }
  }
  recompute_aggregates(res);
  return res;
}

ExperimentResult run_qudit_dephasing(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  stamp(res, cfg);
  std::uint64_t trial_index = 0;
  for (auto dim : cfg.dims) {
    const MeasurementProtocol ideal = build_protocol(cfg.protocol, dim);
    const NoiseModel noise = cfg.noise.to_model(dim);
    const MeasurementProtocol fuzzy = fuzzy_protocol(ideal, noise);
    const std::uint64_t n = usable_sample_size(cfg.n_total, ideal.n_settings());
    if (n == 0) throw InvalidArgument("config: n_total smaller than the number of settings");
    res.n_effective = n;
    for (std::size_t t = 0; t < cfg.n_trials; ++t, ++trial_index) {
      const StateVector truth =
          haar_random_state(dim, SeedSpec{cfg.master_seed, trial_index}.derive(kStateTag));
      const PrecisionProfile dp = precision_profile(information_matrix(fuzzy, truth, n));
      run_trial(ideal, fuzzy, noise, truth, "d" + std::to_string(dim) + "-haar" + std::to_string(t),
                trial_index, n, cfg, expected_loss(dp).mean, res);
    }
  }
  recompute_aggregates(res);
  check_failures(res);
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::kCompare: return run_compare(cfg);
    case ExperimentKind::kSweep: return run_sweep(cfg);
    case ExperimentKind::kQuditDephasing: return run_qudit_dephasing(cfg);
  }
  throw InvalidArgument("unknown experiment");
}

namespace {

std::string num(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string trials_csv(const ExperimentResult& res) {
  std::ostringstream out;
  if (res.experiment == ExperimentKind::kSweep) {
    out << "dim,noise,state_id,L\n";
    for (const auto& s : res.sweep) {
      out << s.dim << ',' << num(s.noise) << ',' << s.state_id << ',' << num(s.loss_function) << '\n';
    }
    return out.str();
  }
  out << "trial,state_id,model,dim,fidelity,loss,iterations,converged,theory_loss\n";
  for (const auto& t : res.trials) {
    out << t.trial << ",\"" << t.state_id << "\"," << t.model << ',' << t.dim << ','
        << num(t.fidelity) << ',' << num(t.loss) << ',' << t.iterations << ','
        << (t.converged ? 1 : 0) << ',' << (t.theory_loss ? num(*t.theory_loss) : "") << '\n';
  }
  return out.str();
}

std::string summary_csv(const ExperimentResult& res) {
  std::ostringstream out;
  if (res.experiment == ExperimentKind::kSweep) {
    out << "dim,noise,min_L,mean_L,max_L,ratio_to_noiseless\n";
    for (const auto& a : res.sweep_summary) {
      out << a.dim << ',' << num(a.noise) << ',' << num(a.min_l) << ',' << num(a.mean_l) << ','
          << num(a.max_l) << ',' << num(a.ratio_to_noiseless) << '\n';
    }
    return out.str();
  }
  out << "state,model,count,min_loss,mean_loss,max_loss,L,mean_fidelity,median_fidelity,supremacy\n";
  for (const auto& a : res.losses) {
    double sup = 0.0;
    for (const auto& s : res.supremacy) {
      if (s.group == a.group) sup = s.supremacy;
    }
    out << '"' << a.group << "\"," << a.model << ',' << a.count << ',' << num(a.min_loss) << ','
        << num(a.mean_loss) << ',' << num(a.max_loss) << ',' << num(a.loss_function) << ','
        << num(a.mean_fidelity) << ',' << num(a.median_fidelity) << ',' << num(sup) << '\n';
  }
  return out.str();
}

std::string plot_csv(const ExperimentResult& res) {
  std::ostringstream out;
  out << "noise,x,y_min,y_mean,y_max\n";
  std::vector<double> levels;
  for (const auto& a : res.sweep_summary) {
    if (std::find(levels.begin(), levels.end(), a.noise) == levels.end()) levels.push_back(a.noise);
  }
  for (double p : levels) {
    for (const auto& a : res.sweep_summary) {
      if (a.noise != p) continue;
      out << num(p) << ',' << a.dim << ',' << num(a.min_l) << ',' << num(a.mean_l) << ','
          << num(a.max_l) << '\n';
    }
  }
  return out.str();
}

bool close(double a, double b) {
  return std::abs(a - b) <= kAggregateTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

bool close(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || close(*a, *b);
}

void verify_aggregates(const ExperimentResult& stored) {
  ExperimentResult fresh = stored;
  recompute_aggregates(fresh);
  bool ok = fresh.losses.size() == stored.losses.size() &&
            fresh.supremacy.size() == stored.supremacy.size() &&
            fresh.sweep_summary.size() == stored.sweep_summary.size();
  for (std::size_t i = 0; ok && i < fresh.losses.size(); ++i) {
    const auto& a = fresh.losses[i];
    const auto& b = stored.losses[i];
    ok = a.group == b.group && a.model == b.model && a.count == b.count &&
         a.failures == b.failures && close(a.min_loss, b.min_loss) &&
         close(a.max_loss, b.max_loss) && close(a.mean_loss, b.mean_loss) &&
         close(a.median_loss, b.median_loss) && close(a.loss_function, b.loss_function) &&
         close(a.mean_fidelity, b.mean_fidelity) && close(a.median_fidelity, b.median_fidelity);
  }
  for (std::size_t i = 0; ok && i < fresh.supremacy.size(); ++i) {
    const auto& a = fresh.supremacy[i];
    const auto& b = stored.supremacy[i];
    ok = a.group == b.group && close(a.standard_mean_loss, b.standard_mean_loss) &&
         close(a.fuzzy_mean_loss, b.fuzzy_mean_loss) && close(a.supremacy, b.supremacy) &&
         close(a.median_trial_supremacy, b.median_trial_supremacy) &&
         close(a.mean_theory_loss, b.mean_theory_loss);
  }
  for (std::size_t i = 0; ok && i < fresh.sweep_summary.size(); ++i) {
    const auto& a = fresh.sweep_summary[i];
    const auto& b = stored.sweep_summary[i];
    ok = a.dim == b.dim && a.count == b.count && close(a.noise, b.noise) &&
         close(a.min_l, b.min_l) && close(a.mean_l, b.mean_l) && close(a.max_l, b.max_l) &&
         close(a.ratio_to_noiseless, b.ratio_to_noiseless);
  }
  if (!ok) throw InvalidArgument("result: stored aggregates do not match the per-trial records");
}

}  // namespace

std::vector<std::filesystem::path> emit_results(const ExperimentResult& res,
                                                const std::filesystem::path& dir,
                                                OutputFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::string stem = to_string(res.experiment);
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const auto path = dir / name;
    write_text_file(path, text);
    written.push_back(path);
  };
  if (format != OutputFormat::kCsv) put(stem + ".json", result_to_json(res).dump(2) + "\n");
  if (format != OutputFormat::kJson) {
    put(stem + "_trials.csv", trials_csv(res));
    put(stem + "_summary.csv", summary_csv(res));
    if (res.experiment == ExperimentKind::kSweep) put(stem + "_plot.csv", plot_csv(res));
  }
  return written;
}

ExperimentResult load_results(const std::filesystem::path& json_path) {
  ExperimentResult res = result_from_json(read_json_file(json_path));
  verify_aggregates(res);
  return res;
}

}  // namespace qtomo
