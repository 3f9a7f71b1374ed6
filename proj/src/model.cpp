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

#include "vqex/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vqex/exact.hpp"
#include "vqex/optimize.hpp"

namespace vqex {

void ModelParams::validate() const {
  if (n_qubits < 3 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("model needs 3 <= N <= " +
                                std::to_string(kMaxQubits) + ", got " +
                                std::to_string(n_qubits));
  }
  if (!std::isfinite(j) || !std::isfinite(h_x) || !std::isfinite(h_z)) {
    throw std::invalid_argument("model couplings must be finite");
  }
}

OperatorSum build_mfim(const ModelParams& params) {
  params.validate();
  const int n = params.n_qubits;
  OperatorSum h(n);
  for (int i = 0; i < n; ++i) {
    h.add(params.j, PauliString::pair(n, i, 'Z', (i + 1) % n, 'Z'));
  }
  for (int i = 0; i < n; ++i) h.add(params.h_x, PauliString::single(n, i, 'X'));
  if (params.h_z != 0.0) {
    for (int i = 0; i < n; ++i) {
      h.add(params.h_z, PauliString::single(n, i, 'Z'));
    }
  }
  return h;
}

OperatorSum magnetization_operator(int n_qubits) {
  OperatorSum m(n_qubits);
  for (int i = 0; i < n_qubits; ++i) {
    m.add(1.0 / n_qubits, PauliString::single(n_qubits, i, 'Z'));
  }
  return m;
}

double magnetization_density(const QubitState& state) {
  const int n = state.n_qubits();
  double acc = 0.0;
  for (BasisIndex b = 0; b < state.dim(); ++b) {
    acc += std::norm(state[b]) * (n - 2 * std::popcount(b));
  }
  return acc / n;
}

std::string_view to_string(PoolKind kind) {
  return kind == PoolKind::kMinimal ? "minimal" : "maximal";
}

PoolKind parse_pool_kind(std::string_view text) {
  if (text == "minimal" || text == "min") return PoolKind::kMinimal;
  if (text == "maximal" || text == "max") return PoolKind::kMaximal;
  throw std::invalid_argument("unknown pool kind '" + std::string(text) + "'");
}

OperatorPool build_pool(PoolKind kind, int n_qubits,
                        const PoolOptions& options) {
  if (n_qubits < 3 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("operator pools need N >= 3");
  }
  const int n = n_qubits;
  OperatorPool pool{kind, options, {}};
  auto push = [&](const PauliString& p) {
    if (std::find(pool.operators.begin(), pool.operators.end(), p) ==
        pool.operators.end()) {
      pool.operators.push_back(p);
    }
  };

  for (int i = 0; i < n; ++i) push(PauliString::single(n, i, 'Y'));
  switch (kind) {
    case PoolKind::kMinimal:
      for (int i = 0; i < n; ++i) {
        push(PauliString::pair(n, i, 'Y', (i + 1) % n, 'Z'));
      }
      break;
    case PoolKind::kMaximal:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i != j) push(PauliString::pair(n, i, 'Y', j, 'Z'));
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i != j) {
            push(PauliString::pair(n, i, 'Y', j, 'X'));
          } else if (options.include_same_site) {
            // Y_i X_i = -i Z_i
            push(PauliString::single(n, i, 'Z'));
          }
        }
      }
      break;
  }
  return pool;
}

// Single-site factors of a real product state: <X> = sin 2a, <Z> = cos 2a,
// <Y> = 0.
double product_state_energy(const OperatorSum& h, std::span<const double> a) {
  if (a.size() != static_cast<std::size_t>(h.n_qubits())) {
    throw DimensionError("product state angle count differs from N");
  }
  double total = 0.0;
  for (const auto& term : h.terms()) {
    double v = term.coefficient;
    for (int q : term.string.support()) {
      switch (term.string.at(q)) {
        case 'X':
          v *= std::sin(2.0 * a[q]);
          break;
        case 'Z':
          v *= std::cos(2.0 * a[q]);
          break;
        default:
          v = 0.0;
          break;
      }
    }
    total += v;
  }
  return total;
}

namespace {

struct MeanFieldExtreme {
  double value;
  std::vector<double> angles;
  bool converged;
};

MeanFieldExtreme mean_field_extreme(const OperatorSum& h, double sign,
                                    ObjectiveHandle& f) {
  const int n = h.n_qubits();
  const double pi = std::numbers::pi;
  // Deterministic starts: uniform tilts and staggered (Neel-like) patterns.
  std::vector<std::vector<double>> starts;
  for (int k = 0; k < 8; ++k) {
    const double a = (k + 0.5) * pi / 8.0;
    starts.emplace_back(n, a);
    std::vector<double> staggered(n);
    for (int q = 0; q < n; ++q) staggered[q] = (q % 2 == 0) ? a : a + pi / 2;
    starts.push_back(std::move(staggered));
  }

  SimplexConfig cfg;
  cfg.initial_step = 0.2;
  cfg.f_tol = 1e-13;
  cfg.max_evals = 4000 * static_cast<std::uint64_t>(n);

  MeanFieldExtreme best{std::numeric_limits<double>::infinity(), {}, false};
  for (const auto& x0 : starts) {
    // Restart from the previous optimum until no further improvement.
    std::vector<double> x = x0;
    double fx = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int round = 0; round < 5; ++round) {
      const SimplexResult r = nelder_mead_minimize(f, x, cfg);
      converged = !r.hit_max_evals;
      const bool improved = r.value < fx - 1e-12;
      x = r.x;
      fx = r.value;
      if (!improved) break;
    }
    if (fx < best.value) best = {fx, x, converged};
  }
  best.value *= sign;
  return best;
}

}  // namespace

BandwidthEstimate estimate_bandwidth(const OperatorSum& h,
                                     BandwidthMethod method) {
  if (method == BandwidthMethod::kExactExtremes) {
    const Spectrum spec = diagonalize(h);
    return {spec.e_min(), spec.e_max(), true, 0, {}, {}};
  }
  ObjectiveHandle lower([&](std::span<const double> a) {
    return product_state_energy(h, a);
  });
  ObjectiveHandle upper([&](std::span<const double> a) {
    return -product_state_energy(h, a);
  });
  const MeanFieldExtreme lo = mean_field_extreme(h, 1.0, lower);
  const MeanFieldExtreme hi = mean_field_extreme(h, -1.0, upper);
  BandwidthEstimate out;
  out.e_min = lo.value;
  out.e_max = hi.value;
  out.optimizer_converged = lo.converged && hi.converged;
  out.evaluations = lower.evaluations() + upper.evaluations();
  out.argmin_angles = lo.angles;
  out.argmax_angles = hi.angles;
  return out;
}

}  // namespace vqex
