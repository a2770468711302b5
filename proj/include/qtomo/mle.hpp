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

#include <cstddef>
#include <utility>

#include "qtomo/noise.hpp"
#include "qtomo/protocols.hpp"
#include "qtomo/quantum_core.hpp"
#include "qtomo/sampling.hpp"

namespace qtomo {

struct ReconstructionOptions {
  double tol = 1e-10;          ///< threshold on state change and on the likelihood-equation residual
  std::size_t max_iters = 10000;
  double damping = 0.5;        ///< alpha in c <- (1 - alpha) c + alpha R(c) c
  std::size_t n_restarts = 3;  ///< extra perturbed starts tried when a run stalls

  void validate() const;
};

struct ReconstructionResult {
  StateVector estimate;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;  ///< ||R(c)c - c|| at the estimate
};

/// sum_j k_j ln(c^+ Lambda_j c). Rows with k_j = 0 contribute nothing; a row
/// with k_j > 0 and a non-positive probability gives -infinity.
double log_likelihood(const MeasurementProtocol& p, const CountsRecord& counts,
                      const StateVector& c);

/// R(c) c with R(c) = sum_j (k_j / n) / lambda_j(c) Lambda_j.
CVector likelihood_operator_apply(const MeasurementProtocol& p, const CountsRecord& counts,
                                  const StateVector& c);

/// Pure-state maximum likelihood via the damped fixed-point iteration
/// c <- normalize((1 - alpha) c + alpha R(c) c). Non-convergence is reported
/// through `converged`, never thrown. The estimate's largest amplitude is real positive.
ReconstructionResult reconstruct_pure(const MeasurementProtocol& p, const CountsRecord& counts,
                                      const ReconstructionOptions& opts = {});

struct ModelComparison {
  ReconstructionResult standard;
  ReconstructionResult fuzzy;
};

/// Same counts reconstructed with the ideal operators and with the fuzzy ones.
ModelComparison reconstruct_standard_vs_fuzzy(const MeasurementProtocol& p,
                                              const NoiseModel& noise,
                                              const CountsRecord& counts,
                                              const ReconstructionOptions& opts = {});
ModelComparison reconstruct_standard_vs_fuzzy(const MeasurementProtocol& p,
                                              const KrausChannel& ch,
                                              const CountsRecord& counts,
                                              const ReconstructionOptions& opts = {});

/// Global phase making the largest-magnitude amplitude real positive.
CVector fix_gauge(CVector c);

}  // namespace qtomo
