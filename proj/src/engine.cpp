// Copyright 2026 The vqex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vqex/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vqex/kernels.hpp"

namespace vqex {

CostKind CostKind::folded_spectrum(double lambda) {
  if (!std::isfinite(lambda)) {
    throw std::invalid_argument("folded-spectrum shift must be finite");
  }
  return {Type::kFoldedSpectrum, lambda};
}

double CostKind::from_moments(double energy, double h_squared) const {
  const double value = type == Type::kVariance
                           ? h_squared - energy * energy
                           : h_squared - 2.0 * lambda * energy + lambda * lambda;
  return value > 0.0 ? value : 0.0;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Moments {
  double energy;
  double h_squared;
};

Moments state_moments(const QubitState& state, const OperatorSum& h) {
  const double energy = expectation(state, h);
  const double h_norm = apply_operator_sum(state, h).norm();
  return {energy, h_norm * h_norm};
}

double f_metric(double energy, double h_norm) {
  if (h_norm <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 - std::abs(energy) / h_norm;
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// Trial-local evaluation machinery over amplitude type T. Holds scratch
// buffers, so one instance must not be shared between threads.
template <class T>
class TrialKernel {
 public:
  TrialKernel(const OperatorSum& h, const OperatorPool& pool,
              const QubitState& psi0)
      : h_(h), dim_(psi0.dim()) {
    dirs_.reserve(pool.size());
    for (const auto& op : pool.operators) {
      dirs_.push_back(
          kernels::make_phased_flip<T>(op, std::complex<double>(0.0, 1.0)));
    }
    psi0_.resize(dim_);
    for (std::size_t b = 0; b < dim_; ++b) {
      psi0_[b] = kernels::narrow<T>(psi0[b]);
    }
    scratch_.resize(dim_);
    h_scratch_.resize(dim_);
  }

  const std::vector<T>& initial() const { return psi0_; }

  Moments moments(std::span<const T> psi) {
    h_.apply(psi, h_scratch_);
    double e = 0.0;
    double h2 = 0.0;
    for (std::size_t b = 0; b < dim_; ++b) {
      e += kernels::real_part(kernels::conj(psi[b]) * h_scratch_[b]);
      h2 += kernels::abs2(h_scratch_[b]);
    }
    return {e, h2};
  }

  void prepare(std::span<const std::size_t> ids, std::span<const double> thetas,
               std::vector<T>& out) const {
    out = psi0_;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      kernels::rotate_inplace<T>(out, dirs_[ids[k]], std::cos(thetas[k]),
                                 std::sin(thetas[k]));
    }
  }

  double ansatz_cost(std::span<const std::size_t> ids,
                     std::span<const double> thetas, const CostKind& kind) {
    prepare(ids, thetas, scratch_);
    const Moments m = moments(scratch_);
    return kind.from_moments(m.energy, m.h_squared);
  }

  // Along psi(theta) = cos(theta) psi + sin(theta) phi with phi = iO psi,
  // both moments are quadratic forms in (cos, sin); six inner products fix
  // the whole line.
  OperatorSelection select(std::span<const T> psi, const CostKind& kind,
                           const LineSearchConfig& line) {
    std::vector<T> h_psi(dim_);
    h_.apply(psi, h_psi);
    double a = 0.0;
    double d = 0.0;
    for (std::size_t b = 0; b < dim_; ++b) {
      a += kernels::real_part(kernels::conj(psi[b]) * h_psi[b]);
      d += kernels::abs2(h_psi[b]);
    }

    std::vector<T> phi(dim_);
    std::vector<T> h_phi(dim_);
    OperatorSelection best{0, 0.0, std::numeric_limits<double>::infinity(), 0};
    std::uint64_t evals = 0;
    for (std::size_t id = 0; id < dirs_.size(); ++id) {
      const auto& dir = dirs_[id];
      for (std::size_t b = 0; b < dim_; ++b) {
        phi[b] = dir.phase[b] * psi[b ^ dir.flip];
      }
      h_.apply(phi, h_phi);
      double bb = 0.0;
      double c = 0.0;
      double g = 0.0;
      double k = 0.0;
      for (std::size_t b = 0; b < dim_; ++b) {
        bb += kernels::real_part(kernels::conj(psi[b]) * h_phi[b]);
        c += kernels::real_part(kernels::conj(phi[b]) * h_phi[b]);
        g += kernels::real_part(kernels::conj(h_psi[b]) * h_phi[b]);
        k += kernels::abs2(h_phi[b]);
      }
      const auto along = [&](double theta) {
        const double cs = std::cos(theta);
        const double sn = std::sin(theta);
        const double energy = cs * cs * a + 2.0 * cs * sn * bb + sn * sn * c;
        const double h2 = cs * cs * d + 2.0 * cs * sn * g + sn * sn * k;
        return kind.from_moments(energy, h2);
      };
      const LineSearchResult r = periodic_line_minimize(along, line);
      evals += r.evaluations;
      if (r.value < best.cost_after) best = {id, r.theta, r.value, 0};
    }
    best.evaluations = evals;
    return best;
  }

 private:
  kernels::GroupedOperator<T> h_;
  std::size_t dim_;
  std::vector<kernels::PhasedFlip<T>> dirs_;
  std::vector<T> psi0_;
  std::vector<T> scratch_;
  std::vector<T> h_scratch_;
};

struct Diagnostics {
  double energy;
  double h_norm;
  double f;
  double cost;
};

template <class T>
TrialResult run_trial(const OperatorSum& h, const OperatorPool& pool,
                      const QubitState& psi0, const CostKind& kind,
                      const TrialOptions& options, const StepCallback& on_step) {
  TrialKernel<T> kernel(h, pool, psi0);
  TrialResult result;
  result.delta = options.delta;
  result.n_max = options.n_max;
  result.real_kernel = !kernels::kIsComplex<T>;

  std::vector<std::size_t> ids;
  std::vector<double> thetas;
  std::vector<T> state = kernel.initial();
  auto diagnose = [&](std::span<const T> psi) {
    const Moments m = kernel.moments(psi);
    const double h_norm = std::sqrt(m.h_squared);
    return Diagnostics{m.energy, h_norm, f_metric(m.energy, h_norm),
                       kind.from_moments(m.energy, m.h_squared)};
  };

  Diagnostics diag = diagnose(state);
  result.initial_energy = diag.energy;
  result.initial_h_norm = diag.h_norm;
  result.initial_f = diag.f;
  result.initial_cost = diag.cost;

  std::uint64_t evals = 0;
  while (true) {
    if (diag.h_norm < options.delta) {
      result.converged = true;
      result.termination = Termination::kZeroNormEigenstate;
      break;
    }
    if (diag.f < options.delta) {
      result.converged = true;
      result.termination = Termination::kCriterionMet;
      break;
    }
    if (ids.size() >= static_cast<std::size_t>(options.n_max)) {
      result.converged = false;
      result.termination = Termination::kMaxSteps;
      break;
    }

    const OperatorSelection sel = kernel.select(state, kind, options.line);
    evals += sel.evaluations;
    ids.push_back(sel.op_id);
    thetas.push_back(sel.theta);

    ObjectiveHandle objective([&](std::span<const double> x) {
      return kernel.ansatz_cost(ids, x, kind);
    });
    const SimplexResult opt =
        nelder_mead_minimize(objective, thetas, options.simplex);
    evals += opt.evaluations;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      thetas[k] = wrap_angle(opt.x[k]);
    }
    kernel.prepare(ids, thetas, state);
    diag = diagnose(state);

    StepRecord rec{sel.op_id,   sel.cost_after, diag.cost,   opt.evaluations,
                   evals,       opt.hit_max_evals, diag.energy, diag.h_norm,
                   diag.f,      thetas};
    if (on_step) on_step(static_cast<int>(ids.size()), rec);
    result.steps.push_back(std::move(rec));
  }

  result.n_c = static_cast<int>(ids.size());
  result.final_energy = diag.energy;
  result.final_h_norm = diag.h_norm;
  result.final_variance =
      std::max(diag.h_norm * diag.h_norm - diag.energy * diag.energy, 0.0);
  result.final_f = diag.f;
  result.final_cost = diag.cost;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    result.ansatz.steps.push_back({ids[k], thetas[k]});
  }
  result.total_evals = evals;
  return result;
}

bool real_kernel_applies(const OperatorSum& h, const OperatorPool& pool,
                         const QubitState& psi0) {
  if (!h.is_real()) return false;
  for (const auto& op : pool.operators) {
    if (!kernels::rotation_is_real(op)) return false;
  }
  for (const auto& a : psi0.amplitudes()) {
    if (a.imag() != 0.0) return false;
  }
  return true;
}

void check_trial_inputs(const OperatorSum& h, const OperatorPool& pool,
                        const QubitState& psi0, const TrialOptions& options) {
  options.validate();
  check_same_dimension(psi0, h.n_qubits());
  if (!psi0.normalized() ||
      std::abs(psi0.norm() - 1.0) > kNormTolerance) {
    throw NormalizationError("initial state must be normalized");
  }
  for (const auto& op : pool.operators) {
    if (op.n_qubits() != h.n_qubits()) {
      throw DimensionError("pool and Hamiltonian qubit counts differ");
    }
  }
}

}  // namespace

double cost(const QubitState& state, const OperatorSum& h,
            const CostKind& kind) {
  const Moments m = state_moments(state, h);
  return kind.from_moments(m.energy, m.h_squared);
}

std::optional<double> convergence_metric(const QubitState& state,
                                         const OperatorSum& h,
                                         double zero_norm_threshold) {
  const double energy = expectation(state, h);
  const double h_norm = apply_operator_sum(state, h).norm();
  if (h_norm < zero_norm_threshold || h_norm == 0.0) return std::nullopt;
  return std::clamp(f_metric(energy, h_norm), 0.0, 1.0);
}

QubitState prepare_state(const QubitState& psi0, const Ansatz& ansatz,
                         const OperatorPool& pool) {
  QubitState state = psi0;
  for (const auto& step : ansatz.steps) {
    state = pauli_rotation(state, pool.at(step.op_id), step.theta);
  }
  return state;
}

OperatorSelection select_operator(const QubitState& state,
                                  const OperatorPool& pool,
                                  const OperatorSum& h, const CostKind& kind,
                                  const LineSearchConfig& line) {
  check_same_dimension(state, h.n_qubits());
  if (pool.operators.empty()) {
    throw std::invalid_argument("operator pool is empty");
  }
  if (real_kernel_applies(h, pool, state)) {
    TrialKernel<double> kernel(h, pool, state);
    return kernel.select(kernel.initial(), kind, line);
  }
  TrialKernel<Amplitude> kernel(h, pool, state);
  return kernel.select(kernel.initial(), kind, line);
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kCriterionMet:
      return "criterion_met";
    case Termination::kZeroNormEigenstate:
      return "zero_norm_eigenstate";
    case Termination::kMaxSteps:
      return "max_steps";
  }
  return "unknown";
}

Termination parse_termination(std::string_view text) {
  if (text == "criterion_met") return Termination::kCriterionMet;
  if (text == "zero_norm_eigenstate") return Termination::kZeroNormEigenstate;
  if (text == "max_steps") return Termination::kMaxSteps;
  throw std::invalid_argument("unknown termination '" + std::string(text) +
                              "'");
}

void TrialOptions::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  simplex.validate();
}

TrialResult run_adaptive_trial(const OperatorSum& h, const OperatorPool& pool,
                               const QubitState& psi0, const CostKind& kind,
                               const TrialOptions& options,
                               const StepCallback& on_step) {
  check_trial_inputs(h, pool, psi0, options);
  if (real_kernel_applies(h, pool, psi0)) {
    return run_trial<double>(h, pool, psi0, kind, options, on_step);
  }
  return run_trial<Amplitude>(h, pool, psi0, kind, options, on_step);
}

TrialResult run_adaptive_trial_complex(const OperatorSum& h,
                                       const OperatorPool& pool,
                                       const QubitState& psi0,
                                       const CostKind& kind,
                                       const TrialOptions& options) {
  check_trial_inputs(h, pool, psi0, options);
  return run_trial<Amplitude>(h, pool, psi0, kind, options, {});
}

TrialResult at_threshold(const TrialResult& full, double delta) {
  if (!(delta >= full.delta)) {
    throw std::invalid_argument(
        "a trial can only be re-read at a looser threshold");
  }
  TrialResult out = full;
  out.delta = delta;
  out.steps.clear();
  out.ansatz.steps.clear();

  auto stop = [&](double h_norm, double f, std::size_t n_steps)
      -> std::optional<Termination> {
    if (h_norm < delta) return Termination::kZeroNormEigenstate;
    if (f < delta) return Termination::kCriterionMet;
    if (n_steps >= static_cast<std::size_t>(full.n_max)) {
      return Termination::kMaxSteps;
    }
    return std::nullopt;
  };

  double energy = full.initial_energy;
  double h_norm = full.initial_h_norm;
  double f = full.initial_f;
  double cost_value = full.initial_cost;
  std::optional<Termination> t = stop(h_norm, f, 0);
  std::size_t n = 0;
  while (!t && n < full.steps.size()) {
    const StepRecord& rec = full.steps[n];
    out.steps.push_back(rec);
    ++n;
    energy = rec.energy;
    h_norm = rec.h_norm;
    f = rec.f;
    cost_value = rec.reoptimized_cost;
    t = stop(h_norm, f, n);
  }
  if (!t) {
    throw std::logic_error("trial log ended before any stopping rule fired");
  }

  out.termination = *t;
  out.converged = *t != Termination::kMaxSteps;
  out.n_c = static_cast<int>(n);
  out.final_energy = energy;
  out.final_h_norm = h_norm;
  out.final_variance = std::max(h_norm * h_norm - energy * energy, 0.0);
  out.final_f = f;
  out.final_cost = cost_value;
  out.total_evals = n > 0 ? out.steps.back().cumulative_evals : 0;
  if (n > 0) {
    const auto& thetas = out.steps.back().thetas;
    for (std::size_t k = 0; k < n; ++k) {
      out.ansatz.steps.push_back({out.steps[k].op_id, thetas[k]});
    }
  }
  return out;
}

}  // namespace vqex
