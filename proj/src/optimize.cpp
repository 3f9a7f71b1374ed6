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

#include "vqex/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace vqex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

}  // namespace

LineSearchResult periodic_line_minimize(const std::function<double(double)>& f,
                                        const LineSearchConfig& cfg) {
  if (cfg.grid_points < 3) {
    throw std::invalid_argument("line search grid needs at least 3 points");
  }
  std::uint64_t evals = 0;
  auto eval = [&](double t) {
    ++evals;
    return f(t);
  };

  const int g = cfg.grid_points;
  const double step = kTwoPi / g;
  int best_k = 0;
  double best_f = eval(0.0);
  for (int k = 1; k < g; ++k) {
    const double v = eval(k * step);
    if (v < best_f) {
      best_f = v;
      best_k = k;
    }
  }

  // Golden-section search on the bracket spanned by the grid neighbours.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = (best_k - 1) * step;
  double b = (best_k + 1) * step;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > cfg.angle_tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }

  LineSearchResult out{best_k * step, best_f, 0};
  if (fc < out.value) out = {c, fc, 0};
  if (fd < out.value) out = {d, fd, 0};
  out.theta = wrap_angle(out.theta);
  out.evaluations = evals;
  return out;
}

void SimplexConfig::validate() const {
  if (!(reflection > 0.0) || !(expansion > 1.0) || !(contraction > 0.0) ||
      !(contraction < 1.0) || !(shrink > 0.0) || !(shrink < 1.0)) {
    throw std::invalid_argument("invalid Nelder-Mead coefficients");
  }
  if (!(initial_step != 0.0) || !(f_tol >= 0.0)) {
    throw std::invalid_argument("invalid Nelder-Mead step or tolerance");
  }
}

std::uint64_t SimplexConfig::eval_cap(std::size_t dimension) const {
  return max_evals > 0 ? max_evals : 200 * std::max<std::size_t>(dimension, 1);
}

SimplexResult nelder_mead_minimize(ObjectiveHandle& f,
                                   std::span<const double> x0,
                                   const SimplexConfig& cfg) {
  cfg.validate();
  const std::size_t n = x0.size();
  if (n == 0) {
    throw std::invalid_argument("Nelder-Mead needs at least one parameter");
  }
  const std::uint64_t start_evals = f.evaluations();
  const std::uint64_t cap = cfg.eval_cap(n);
  auto used = [&] { return f.evaluations() - start_evals; };

  std::vector<std::vector<double>> vertex(n + 1,
                                          std::vector<double>(x0.begin(), x0.end()));
  std::vector<double> value(n + 1);
  for (std::size_t i = 0; i < n; ++i) vertex[i + 1][i] += cfg.initial_step;
  for (std::size_t i = 0; i <= n; ++i) value[i] = f(vertex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n);
  std::vector<double> trial_r(n);
  std::vector<double> trial_e(n);
  std::vector<double> trial_c(n);

  SimplexResult result;
  result.iterations = 0;
  result.hit_max_evals = false;

  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return value[a] < value[b];
    });
  };
  auto affine = [&](double t, const std::vector<double>& from,
                    std::vector<double>& out) {
    // out = centroid + t * (from - centroid)
    for (std::size_t k = 0; k < n; ++k) {
      out[k] = centroid[k] + t * (from[k] - centroid[k]);
    }
  };

  sort_vertices();
  while (true) {
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];
    if (used() >= cap) {
      result.hit_max_evals = value[worst] - value[best] >= cfg.f_tol;
      break;
    }
    if (value[worst] - value[best] < cfg.f_tol) {
      // Equal vertex values can straddle a valley (always possible in 1-D).
      // Probe the simplex centroid once before accepting convergence.
      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (const auto& v : vertex) {
        for (std::size_t k = 0; k < n; ++k) centroid[k] += v[k];
      }
      for (double& c : centroid) c /= static_cast<double>(n + 1);
      const double fm = f(centroid);
      if (!(fm < value[best] - cfg.f_tol)) break;
      vertex[worst] = centroid;
      value[worst] = fm;
      sort_vertices();
      result.best_history.push_back(value[order.front()]);
      continue;
    }
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = vertex[order[i]];
      for (std::size_t k = 0; k < n; ++k) centroid[k] += v[k];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    affine(-cfg.reflection, vertex[worst], trial_r);
    const double fr = f(trial_r);

    if (fr < value[best]) {
      affine(-cfg.reflection * cfg.expansion, vertex[worst], trial_e);
      const double fe = f(trial_e);
      if (fe < fr) {
        vertex[worst] = trial_e;
        value[worst] = fe;
      } else {
        vertex[worst] = trial_r;
        value[worst] = fr;
      }
    } else if (fr < value[second_worst]) {
      vertex[worst] = trial_r;
      value[worst] = fr;
    } else {
      bool accepted = false;
      if (fr < value[worst]) {
        // outside contraction
        affine(-cfg.reflection * cfg.contraction, vertex[worst], trial_c);
        const double fc = f(trial_c);
        if (fc <= fr) {
          vertex[worst] = trial_c;
          value[worst] = fc;
          accepted = true;
        }
      } else {
        // inside contraction
        affine(cfg.contraction, vertex[worst], trial_c);
        const double fc = f(trial_c);
        if (fc < value[worst]) {
          vertex[worst] = trial_c;
          value[worst] = fc;
          accepted = true;
        }
      }
      if (!accepted) {
        const auto& xb = vertex[best];
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < n; ++k) {
            vertex[i][k] = xb[k] + cfg.shrink * (vertex[i][k] - xb[k]);
          }
          value[i] = f(vertex[i]);
        }
      }
    }
    sort_vertices();
    result.best_history.push_back(value[order.front()]);
  }

  result.x = vertex[order.front()];
  result.value = value[order.front()];
  result.evaluations = used();
  return result;
}

}  // namespace vqex
