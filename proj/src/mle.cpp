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

#include "qtomo/mle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qtomo/error.hpp"
#include "qtomo/fuzzy.hpp"

namespace qtomo {

namespace {

constexpr double kLambdaFloor = 1e-15;
constexpr double kMonotoneSlack = 1e-9;
constexpr double kMinDamping = 1e-8;
constexpr std::uint64_t kRestartSeed = 0x7265737461727473ULL;

// Likelihood pieces at one iterate: v_j = Lambda_j c, lambda_j = <c|v_j>.
class Evaluator {
 public:
  Evaluator(const MeasurementProtocol& p, const CountsRecord& counts) : p_(p) {
    const double n = static_cast<double>(counts.n_total);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (counts.counts[j] > 0) {
        active_.push_back(j);
        freq_.push_back(static_cast<double>(counts.counts[j]) / n);
        weight_.push_back(static_cast<double>(counts.counts[j]));
      }
    }
    v_.resize(active_.size());
    lambda_.resize(active_.size());
  }

  // Returns the log-likelihood at c and caches v_j, lambda_j.
  double evaluate(const CVector& c) {
    double ll = 0.0;
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const auto& row = p_.row(active_[a]);
      if (row.projector) {
        const Complex amp = row.projector->dot(c);
        v_[a] = *row.projector * amp;
        lambda_[a] = std::norm(amp);
      } else {
        v_[a] = row.op * c;
        lambda_[a] = c.dot(v_[a]).real();
      }
      if (lambda_[a] <= 0.0) {
        ll = -std::numeric_limits<double>::infinity();
      } else if (std::isfinite(ll)) {
        ll += weight_[a] * std::log(lambda_[a]);
      }
    }
    return ll;
  }

  // R(c) c from the cached evaluation.
  CVector apply_r(Eigen::Index dim) const {
    CVector rc = CVector::Zero(dim);
    for (std::size_t a = 0; a < active_.size(); ++a) {
      rc += (freq_[a] / std::max(lambda_[a], kLambdaFloor)) * v_[a];
    }
    return rc;
  }

 private:
  const MeasurementProtocol& p_;
  std::vector<std::size_t> active_;
  std::vector<double> freq_;
  std::vector<double> weight_;
  std::vector<CVector> v_;
  std::vector<double> lambda_;
};

// Distance between two unit vectors after aligning the global phase of `b` to `a`.
double aligned_distance(const CVector& a, const CVector& b) {
  const Complex overlap = b.dot(a);
  const double mag = std::abs(overlap);
  const Complex phase = mag > 0.0 ? overlap / mag : Complex(1.0);
  return (a - phase * b).norm();
}

struct Run {
  CVector c;
  double ll = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

Run iterate(Evaluator& ev, CVector c, const ReconstructionOptions& opts) {
  const Eigen::Index dim = c.size();
  Run run;
  double alpha = opts.damping;
  double ll = ev.evaluate(c);
  double change = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (; it < opts.max_iters; ++it) {
    const CVector rc = ev.apply_r(dim);
    residual = (rc - c).norm();
    if (change < opts.tol && residual < opts.tol) {
      run.converged = true;
      break;
    }
    CVector next;
    double next_ll = 0.0;
    bool accepted = false;
    while (alpha >= kMinDamping) {
      next = ((1.0 - alpha) * c + alpha * rc).normalized();
      next_ll = ev.evaluate(next);
      if (next_ll >= ll - kMonotoneSlack * std::max(1.0, std::abs(ll)) || !std::isfinite(ll)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      ev.evaluate(c);
      break;
    }
    change = aligned_distance(c, next);
    c = std::move(next);
    ll = next_ll;
  }
  if (!run.converged) {
    // Residual reflects the final iterate.
    residual = (ev.apply_r(dim) - c).norm();
    run.converged = change < opts.tol && residual < opts.tol;
  }
  run.c = fix_gauge(std::move(c));
  run.ll = ll;
  run.iterations = it;
  run.residual = residual;
  return run;
}

CVector linear_start(const MeasurementProtocol& p, const CountsRecord& counts) {
  const auto n = static_cast<Eigen::Index>(p.dim());
  CMatrix m = CMatrix::Zero(n, n);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (counts.counts[j] == 0) continue;
    m += (static_cast<double>(counts.counts[j]) / static_cast<double>(counts.n_total)) * p.row(j).op;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  return es.eigenvectors().col(n - 1);
}

}  // namespace

void ReconstructionOptions::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("ReconstructionOptions: tol must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw InvalidArgument("ReconstructionOptions: damping must lie in (0, 1]");
  }
  if (max_iters == 0) throw InvalidArgument("ReconstructionOptions: max_iters must be positive");
}

CVector fix_gauge(CVector c) {
  Eigen::Index arg = 0;
  c.cwiseAbs().maxCoeff(&arg);
  const double mag = std::abs(c(arg));
  if (mag > 0.0) c *= std::conj(c(arg)) / mag;
  c(arg) = Complex(c(arg).real(), 0.0);
  return c;
}

double log_likelihood(const MeasurementProtocol& p, const CountsRecord& counts,
                      const StateVector& c) {
  if (c.dim() != p.dim()) throw DimensionError("log_likelihood: state and protocol dimension differ");
  if (counts.counts.size() != p.size()) {
    throw DimensionError("log_likelihood: counts and protocol size differ");
  }
  double ll = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const auto k = counts.counts[j];
    if (k == 0) continue;
    const double lambda = c.amps().dot(p.row(j).op * c.amps()).real();
    if (lambda <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += static_cast<double>(k) * std::log(lambda);
  }
  return ll;
}

CVector likelihood_operator_apply(const MeasurementProtocol& p, const CountsRecord& counts,
                                  const StateVector& c) {
  if (c.dim() != p.dim()) throw DimensionError("likelihood_operator_apply: dimension mismatch");
  counts.validate(p);
  Evaluator ev(p, counts);
  ev.evaluate(c.amps());
  return ev.apply_r(c.amps().size());
}

ReconstructionResult reconstruct_pure(const MeasurementProtocol& p, const CountsRecord& counts,
                                      const ReconstructionOptions& opts) {
  opts.validate();
  counts.validate(p);
  Evaluator ev(p, counts);

  const CVector start = linear_start(p, counts);
  Run best = iterate(ev, start, opts);
  std::size_t total_iters = best.iterations;

  if (!best.converged) {
    std::mt19937_64 rng(kRestartSeed);
    std::normal_distribution<double> normal;
    bool have_converged = false;
    for (std::size_t r = 0; r < opts.n_restarts; ++r) {
      CVector noise(start.size());
      for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = Complex(normal(rng), normal(rng));
      const CVector perturbed = (start + 0.1 * noise.normalized()).normalized();
      Run run = iterate(ev, perturbed, opts);
      total_iters += run.iterations;
      const bool better = run.converged ? (!have_converged || run.ll > best.ll)
                                        : (!have_converged && run.ll > best.ll);
      if (better) {
        best = std::move(run);
        have_converged = best.converged;
      }
    }
  }
  return {StateVector(best.c), best.ll, total_iters, best.converged, best.residual};
}

ModelComparison reconstruct_standard_vs_fuzzy(const MeasurementProtocol& p,
                                              const NoiseModel& noise,
                                              const CountsRecord& counts,
                                              const ReconstructionOptions& opts) {
  return {reconstruct_pure(p, counts, opts),
          reconstruct_pure(fuzzy_protocol(p, noise), counts, opts)};
}

ModelComparison reconstruct_standard_vs_fuzzy(const MeasurementProtocol& p,
                                              const KrausChannel& ch,
                                              const CountsRecord& counts,
                                              const ReconstructionOptions& opts) {
  return {reconstruct_pure(p, counts, opts), reconstruct_pure(fuzzy_protocol(p, ch), counts, opts)};
}

}  // namespace qtomo
