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

#include "qtomo/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qtomo/error.hpp"

namespace qtomo {

namespace {

Json vector_to_json(const CVector& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

CVector vector_from_json(const Json& j) {
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>()
                                   : std::vector<double>(re.size(), 0.0);
  if (re.size() != im.size()) throw InvalidArgument("complex vector: re/im length differ");
  CVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
  return v;
}

Json real_matrix_to_json(const RMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

RMatrix real_matrix_from_json(const Json& j, std::size_t dim) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.size() != dim) throw InvalidArgument("matrix: expected " + std::to_string(dim) + " rows");
  RMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    if (rows[r].size() != dim) throw InvalidArgument("matrix: ragged row");
    for (std::size_t c = 0; c < dim; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

Json rvector_to_json(const RVector& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw InvalidArgument(std::string(where) + ": unknown key \"" + key + "\"");
    }
  }
}

// Runs `fn`, translating JSON library errors into InvalidArgument with context.
template <typename T = std::uint64_t>
T unsigned_of(const Json& v) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw InvalidArgument("expected a non-negative integer, got " + v.dump());
  }
  return v.get<T>();
}

std::vector<std::size_t> unsigned_list(const Json& v) {
  if (!v.is_array()) throw InvalidArgument("expected a list of non-negative integers, got " + v.dump());
  std::vector<std::size_t> out;
  for (const auto& e : v) out.push_back(unsigned_of<std::size_t>(e));
  return out;
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string(what) + ": " + e.what());
  }
}

Json opt_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from_json(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

Json protocol_to_json(const MeasurementProtocol& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows()) {
    Json row{{"setting", r.setting}};
    if (r.projector) {
      row["projector"] = vector_to_json(*r.projector);
    } else {
      row["re"] = real_matrix_to_json(r.op.real());
      row["im"] = real_matrix_to_json(r.op.imag());
    }
    rows.push_back(std::move(row));
  }
  return {{"dim", p.dim()}, {"n_settings", p.n_settings()}, {"rows", rows}};
}

MeasurementProtocol protocol_from_json(const Json& j) {
  return guarded("protocol", [&] {
    const auto dim = unsigned_of<std::size_t>(j.at("dim"));
    const auto n_settings = unsigned_of<std::size_t>(j.at("n_settings"));
    std::vector<ProtocolRow> rows;
    for (const auto& jr : j.at("rows")) {
      ProtocolRow row;
      row.setting = unsigned_of<std::size_t>(jr.at("setting"));
      if (jr.contains("projector")) {
        row.projector = vector_from_json(jr.at("projector"));
        if (static_cast<std::size_t>(row.projector->size()) != dim) {
          throw DimensionError("protocol: projector length differs from dim");
        }
        row.op = *row.projector * row.projector->adjoint();
      }
      if (jr.contains("re")) {
        CMatrix op = real_matrix_from_json(jr.at("re"), dim).cast<Complex>();
        if (jr.contains("im")) op += kI * real_matrix_from_json(jr.at("im"), dim).cast<Complex>();
        row.op = std::move(op);
      }
      if (row.op.size() == 0) throw InvalidArgument("protocol: row needs a projector or re/im matrices");
      rows.push_back(std::move(row));
    }
    return MeasurementProtocol::renormalized(dim, n_settings, std::move(rows));
  });
}

Json state_to_json(const StateVector& c) { return vector_to_json(c.amps()); }

StateVector state_from_json(const Json& j) {
  return guarded("state", [&] { return StateVector(vector_from_json(j)); });
}

Json counts_to_json(const CountsRecord& rec) {
  Json j{{"protocol", rec.protocol_id}, {"n_total", rec.n_total}, {"counts", rec.counts}};
  if (rec.seed) j["seed"] = {{"master", rec.seed->master_seed}, {"trial", rec.seed->trial_index}};
  return j;
}

CountsRecord counts_from_json(const Json& j) {
  return guarded("counts", [&] {
    CountsRecord rec;
    rec.protocol_id = j.value("protocol", std::string{});
    rec.n_total = unsigned_of<std::uint64_t>(j.at("n_total"));
    if (!j.at("counts").is_array()) throw InvalidArgument("counts: \"counts\" must be a list");
    for (const auto& k : j.at("counts")) rec.counts.push_back(unsigned_of(k));
    if (j.contains("seed")) {
      rec.seed = SeedSpec{unsigned_of<std::uint64_t>(j.at("seed").at("master")),
                          unsigned_of<std::uint64_t>(j.at("seed").at("trial"))};
    }
    return rec;
  });
}

Json noise_to_json(const NoiseSpec& noise) {
  Json j = Json::object();
  if (noise.readout.size() == 1) {
    j["readout"] = {{"p10", noise.readout[0].p10}, {"p01", noise.readout[0].p01}};
  } else if (!noise.readout.empty()) {
    Json list = Json::array();
    for (const auto& r : noise.readout) list.push_back({{"p10", r.p10}, {"p01", r.p01}});
    j["readout"] = list;
  }
  if (noise.dephasing) j["dephasing"] = {{"g", noise.dephasing->g}};
  return j;
}

NoiseSpec noise_from_json(const Json& j) {
  return guarded("noise", [&] {
    reject_unknown_keys(j, {"readout", "dephasing"}, "noise");
    NoiseSpec spec;
    if (j.contains("readout")) {
      const auto& r = j.at("readout");
      auto one = [](const Json& e) {
        ReadoutErrorRates rates{e.at("p10").get<double>(), e.at("p01").get<double>()};
        rates.validate();
        return rates;
      };
      if (r.is_array()) {
        for (const auto& e : r) spec.readout.push_back(one(e));
        if (spec.readout.empty()) throw InvalidArgument("noise: empty readout list");
      } else {
        spec.readout.push_back(one(r));
      }
    }
    if (j.contains("dephasing")) {
      DephasingStrength g{j.at("dephasing").at("g").get<double>()};
      g.validate();
      spec.dephasing = g;
    }
    return spec;
  });
}

Json reconstruction_to_json(const ReconstructionResult& r, const std::optional<StateVector>& truth) {
  Json j{{"estimate", state_to_json(r.estimate)},
         {"log_likelihood", r.log_likelihood},
         {"iterations", r.iterations},
         {"converged", r.converged},
         {"residual", r.residual}};
  if (truth) {
    const double f = fidelity(*truth, r.estimate);
    j["fidelity"] = f;
    j["loss"] = 1.0 - f;
  }
  return j;
}

Json theory_to_json(const PrecisionProfile& dp, std::uint64_t n) {
  const LossMoments m = expected_loss(dp);
  return {{"n", n},
          {"d", rvector_to_json(dp.d)},
          {"mean_loss", m.mean},
          {"var_loss", m.variance},
          {"L", loss_function(dp, n)},
          {"spectrum", rvector_to_json(dp.spectrum)},
          {"norm_overlap", dp.norm_overlap}};
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json states = Json::array();
  for (const auto& s : cfg.states) {
    Json e = state_to_json(s.state);
    e["id"] = s.id;
    states.push_back(std::move(e));
  }
  const auto& o = cfg.reconstruction;
  return {{"experiment", to_string(cfg.experiment)},
          {"dims", cfg.dims},
          {"protocol", to_string(cfg.protocol)},
          {"noise", noise_to_json(cfg.noise)},
          {"noise_levels", cfg.noise_levels},
          {"n_total", cfg.n_total},
          {"n_trials", cfg.n_trials},
          {"n_haar_states", cfg.n_haar_states},
          {"master_seed", cfg.master_seed},
          {"output_path", cfg.output_path},
          {"states", states},
          {"reconstruction",
           {{"tol", o.tol}, {"max_iters", o.max_iters}, {"damping", o.damping},
            {"n_restarts", o.n_restarts}}}};
}

ExperimentConfig config_from_json(const Json& j) {
  return guarded("config", [&] {
    reject_unknown_keys(j,
                        {"experiment", "dims", "n_qubits", "protocol", "noise", "noise_levels",
                         "n_total", "n_trials", "n_haar_states", "master_seed", "output_path",
                         "states", "reconstruction"},
                        "config");
    ExperimentConfig cfg = default_config(parse_experiment_kind(j.at("experiment").get<std::string>()));
    if (j.contains("dims")) cfg.dims = unsigned_list(j.at("dims"));
    if (j.contains("n_qubits")) {
      cfg.dims.clear();
      for (auto q : unsigned_list(j.at("n_qubits"))) {
        if (q == 0 || q > 4) throw InvalidArgument("config: n_qubits entries must lie in 1..4");
        cfg.dims.push_back(std::size_t{1} << q);
      }
    }
    if (j.contains("protocol")) cfg.protocol = parse_protocol_kind(j.at("protocol").get<std::string>());
    if (j.contains("noise")) cfg.noise = noise_from_json(j.at("noise"));
    if (j.contains("noise_levels")) cfg.noise_levels = j.at("noise_levels").get<std::vector<double>>();
    if (j.contains("n_total")) cfg.n_total = unsigned_of<std::uint64_t>(j.at("n_total"));
    if (j.contains("n_trials")) cfg.n_trials = unsigned_of<std::size_t>(j.at("n_trials"));
    if (j.contains("n_haar_states")) cfg.n_haar_states = unsigned_of<std::size_t>(j.at("n_haar_states"));
    if (j.contains("master_seed")) cfg.master_seed = unsigned_of<std::uint64_t>(j.at("master_seed"));
    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("states")) {
      cfg.states.clear();
      std::size_t k = 0;
      for (const auto& e : j.at("states")) {
        cfg.states.push_back({e.value("id", "state" + std::to_string(k)), state_from_json(e)});
        ++k;
      }
    }
    if (j.contains("reconstruction")) {
      const auto& o = j.at("reconstruction");
      reject_unknown_keys(o, {"tol", "max_iters", "damping", "n_restarts"}, "reconstruction");
      auto& r = cfg.reconstruction;
      r.tol = o.value("tol", r.tol);
      if (o.contains("max_iters")) r.max_iters = unsigned_of<std::size_t>(o.at("max_iters"));
      r.damping = o.value("damping", r.damping);
      if (o.contains("n_restarts")) r.n_restarts = unsigned_of<std::size_t>(o.at("n_restarts"));
    }
    cfg.validate();
    return cfg;
  });
}

Json result_to_json(const ExperimentResult& res) {
  Json trials = Json::array();
  for (const auto& t : res.trials) {
    trials.push_back({{"trial", t.trial}, {"state_id", t.state_id}, {"model", t.model},
                      {"dim", t.dim}, {"fidelity", t.fidelity}, {"loss", t.loss},
                      {"iterations", t.iterations}, {"converged", t.converged},
                      {"theory_loss", opt_to_json(t.theory_loss)}});
  }
  Json sweep = Json::array();
  for (const auto& s : res.sweep) {
    sweep.push_back({{"dim", s.dim}, {"noise", s.noise}, {"state_id", s.state_id},
                     {"L", s.loss_function}});
  }
  Json losses = Json::array();
  for (const auto& a : res.losses) {
    losses.push_back({{"group", a.group}, {"model", a.model}, {"count", a.count},
                      {"min_loss", a.min_loss}, {"max_loss", a.max_loss},
                      {"mean_loss", a.mean_loss}, {"median_loss", a.median_loss},
                      {"L", a.loss_function}, {"mean_fidelity", a.mean_fidelity},
                      {"median_fidelity", a.median_fidelity}, {"failures", a.failures}});
  }
  Json supremacy = Json::array();
  for (const auto& a : res.supremacy) {
    supremacy.push_back({{"group", a.group}, {"standard_mean_loss", a.standard_mean_loss},
                         {"fuzzy_mean_loss", a.fuzzy_mean_loss}, {"supremacy", a.supremacy},
                         {"median_trial_supremacy", a.median_trial_supremacy},
                         {"mean_theory_loss", opt_to_json(a.mean_theory_loss)}});
  }
  Json sweep_summary = Json::array();
  for (const auto& a : res.sweep_summary) {
    sweep_summary.push_back({{"dim", a.dim}, {"noise", a.noise}, {"count", a.count},
                             {"min_L", a.min_l}, {"mean_L", a.mean_l}, {"max_L", a.max_l},
                             {"ratio_to_noiseless", a.ratio_to_noiseless}});
  }
  return {{"experiment", to_string(res.experiment)},
          {"master_seed", res.master_seed},
          {"n_effective", res.n_effective},
          {"config", Json::parse(res.config_json.empty() ? "{}" : res.config_json)},
          {"timestamp", res.timestamp},
          {"trials", trials},
          {"sweep", sweep},
          {"aggregates",
           {{"losses", losses}, {"supremacy", supremacy}, {"sweep", sweep_summary}}}};
}

ExperimentResult result_from_json(const Json& j) {
  return guarded("result", [&] {
    ExperimentResult res;
    res.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
    res.master_seed = unsigned_of<std::uint64_t>(j.at("master_seed"));
    res.n_effective = unsigned_of<std::uint64_t>(j.at("n_effective"));
    res.config_json = j.at("config").dump();
    res.timestamp = j.value("timestamp", std::string{});
    for (const auto& t : j.at("trials")) {
      res.trials.push_back({unsigned_of<std::uint64_t>(t.at("trial")), t.at("state_id").get<std::string>(),
                            t.at("model").get<std::string>(), unsigned_of<std::size_t>(t.at("dim")),
                            t.at("fidelity").get<double>(), t.at("loss").get<double>(),
                            unsigned_of<std::size_t>(t.at("iterations")), t.at("converged").get<bool>(),
                            opt_from_json(t, "theory_loss")});
    }
    for (const auto& s : j.at("sweep")) {
      res.sweep.push_back({unsigned_of<std::size_t>(s.at("dim")), s.at("noise").get<double>(),
                           s.at("state_id").get<std::string>(), s.at("L").get<double>()});
    }
    const auto& agg = j.at("aggregates");
    for (const auto& a : agg.at("losses")) {
      res.losses.push_back({a.at("group").get<std::string>(), a.at("model").get<std::string>(),
                            unsigned_of<std::size_t>(a.at("count")), a.at("min_loss").get<double>(),
                            a.at("max_loss").get<double>(), a.at("mean_loss").get<double>(),
                            a.at("median_loss").get<double>(), a.at("L").get<double>(),
                            a.at("mean_fidelity").get<double>(),
                            a.at("median_fidelity").get<double>(),
                            unsigned_of<std::size_t>(a.at("failures"))});
    }
    for (const auto& a : agg.at("supremacy")) {
      res.supremacy.push_back({a.at("group").get<std::string>(),
                               a.at("standard_mean_loss").get<double>(),
                               a.at("fuzzy_mean_loss").get<double>(),
                               a.at("supremacy").get<double>(),
                               a.at("median_trial_supremacy").get<double>(),
                               opt_from_json(a, "mean_theory_loss")});
    }
    for (const auto& a : agg.at("sweep")) {
      res.sweep_summary.push_back({unsigned_of<std::size_t>(a.at("dim")), a.at("noise").get<double>(),
                                   unsigned_of<std::size_t>(a.at("count")), a.at("min_L").get<double>(),
                                   a.at("mean_L").get<double>(), a.at("max_L").get<double>(),
                                   a.at("ratio_to_noiseless").get<double>()});
    }
    return res;
  });
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace qtomo
