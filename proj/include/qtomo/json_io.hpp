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

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qtomo/harness.hpp"
#include "qtomo/infotheory.hpp"
#include "qtomo/mle.hpp"
#include "qtomo/noise.hpp"
#include "qtomo/protocols.hpp"
#include "qtomo/sampling.hpp"

namespace qtomo {

using Json = nlohmann::json;

// Protocol: {"dim", "n_settings", "rows": [{"setting", "projector": {"re", "im"}}
//            | {"setting", "re": [[..]], "im": [[..]]}]}. Imported operators are
//            renormalized so that they decompose unity.
Json protocol_to_json(const MeasurementProtocol& p);
MeasurementProtocol protocol_from_json(const Json& j);

// State: {"re": [..], "im": [..]}
Json state_to_json(const StateVector& c);
StateVector state_from_json(const Json& j);

// Counts: {"protocol", "n_total", "counts", "seed": {"master", "trial"}}
Json counts_to_json(const CountsRecord& rec);
CountsRecord counts_from_json(const Json& j);

// Noise block: {"readout": {"p10", "p01"} | [{"p10", "p01"}, ..], "dephasing": {"g"}}
Json noise_to_json(const NoiseSpec& noise);
NoiseSpec noise_from_json(const Json& j);

Json reconstruction_to_json(const ReconstructionResult& r,
                            const std::optional<StateVector>& truth = std::nullopt);

// {"d", "mean_loss", "var_loss", "L", "spectrum"}
Json theory_to_json(const PrecisionProfile& dp, std::uint64_t n);

/// Unknown keys are rejected so that typos surface as config errors.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& cfg);

Json result_to_json(const ExperimentResult& res);
ExperimentResult result_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qtomo
