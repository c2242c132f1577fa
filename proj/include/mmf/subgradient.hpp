// Copyright 2026 The Authors.
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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/info_theory.hpp"
#include "mmf/markov_core.hpp"
#include "mmf/matrix.hpp"
#include "mmf/simplex.hpp"

namespace mmf {

// g_i(v) = D(P_n || Q*(v)) - D(P_i || Q*(v)); a subgradient of h at v, with
// g_n = 0 identically.
inline std::vector<double> subgradient_h(const DualObjectiveContext& ctx, const SimplexWeights& v) {
  const auto div = ctx.divergences(v);
  for (std::size_t i = 0; i < div.size(); ++i) {
    if (!div[i].is_finite()) {
      throw NumericalError("member " + std::to_string(i + 1) +
                           " has infinite divergence from the factorized average; subgradient undefined");
    }
  }
  const double last = div.back().value();
  std::vector<double> g(div.size());
  for (std::size_t i = 0; i < div.size(); ++i) g[i] = last - div[i].value();
  g.back() = 0.0;
  return g;
}

// Rigorous bound on sup_v ||g(v)||^2:
//
//   B = n (|X| max_{i, P_i(x,y) > 0} P_i(x,y) ln(P_i(x,y) / q_min(x,y)))^2,
//
// where q_min(x,y) = prod_j min_i P_i^(S_j)(x|S_j, y|S_j) lower-bounds every
// entry of every factorized average.
inline double estimate_B(const DualObjectiveContext& ctx) {
  const auto& space = ctx.family().space();
  const std::size_t nx = space.size();
  const auto& part = ctx.partition();

  std::vector<double> qmin(nx * nx, 1.0);
  for (std::size_t j = 0; j < part.size(); ++j) {
    const auto proj = ctx.projections(j);
    const std::size_t ns = proj.front().size();
    std::vector<double> bmin(proj.front().entries().begin(), proj.front().entries().end());
    for (const auto& p : proj) {
      const auto e = p.entries();
      for (std::size_t k = 0; k < ns * ns; ++k) bmin[k] = std::min(bmin[k], e[k]);
    }
    const auto r = space.restriction_map(part[j]);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < nx; ++y) qmin[x * nx + y] *= bmin[r[x] * ns + r[y]];
    }
  }

  double sup = 0.0;
  for (const auto& p : ctx.family().members()) {
    const auto e = p.entries();
    for (std::size_t k = 0; k < nx * nx; ++k) {
      if (e[k] <= 0.0) continue;
      if (qmin[k] <= 0.0) {
        throw NumericalError("B infinite; family/partition incompatible with uniform step size");
      }
      sup = std::max(sup, e[k] * std::log(e[k] / qmin[k]));
    }
  }
  const double scaled = static_cast<double>(nx) * sup;
  return static_cast<double>(ctx.n()) * scaled * scaled;
}

// Heuristic B: the largest ||g(v)||^2 over `start`, the barycentre and
// `samples` Dirichlet(1) points drawn from a fixed seed. Interior points keep
// every divergence finite.
inline double estimate_B_sampled(const DualObjectiveContext& ctx, const SimplexWeights& start,
                                 std::size_t samples = 64, std::uint64_t seed = 20260101) {
  auto norm2 = [&](const SimplexWeights& v) {
    double s = 0.0;
    for (double gi : subgradient_h(ctx, v)) s += gi * gi;
    return s;
  };
  double best = std::max(norm2(start), norm2(SimplexWeights::uniform(ctx.n())));
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    std::vector<double> e(ctx.n());
    double total = 0.0;
    for (auto& x : e) {
      double u = std::generate_canonical<double, 53>(rng);
      x = -std::log1p(-u);
      total += x;
    }
    for (auto& x : e) x /= total;
    best = std::max(best, norm2(SimplexWeights(std::move(e))));
  }
  return best;
}

enum class BoundStrategy { rigorous, sampled };

inline const char* to_string(BoundStrategy s) { return s == BoundStrategy::rigorous ? "rigorous" : "sampled"; }

inline BoundStrategy parse_bound_strategy(const std::string& s) {
  if (s == "rigorous") return BoundStrategy::rigorous;
  if (s == "sampled") return BoundStrategy::sampled;
  throw DomainError("unknown B estimate '" + s + "' (expected rigorous or sampled)");
}

struct SubgradientConfig {
  std::size_t iterations = 100;
  std::optional<double> step;   // explicit eta; otherwise sqrt(n / (B t))
  std::optional<double> bound;  // explicit B
  BoundStrategy strategy = BoundStrategy::rigorous;
  std::optional<SimplexWeights> initial;  // defaults to uniform
  std::size_t bound_samples = 64;
  std::uint64_t seed = 20260101;
};

struct SubgradientTrace {
  std::vector<SimplexWeights> weights;  // w^(0), ..., w^(t)
  std::vector<double> objective;        // h(w^(i))
  SimplexWeights average;               // (1/t) sum_{i=1}^t w^(i)
  double average_objective = 0.0;
  std::size_t argmin = 0;  // over i in 1..t
  double min_objective = 0.0;
  std::optional<double> bound;
  double step = 0.0;

  const SimplexWeights& initial() const { return weights.front(); }
  const SimplexWeights& final() const { return weights.back(); }
  const SimplexWeights& best() const { return weights[argmin]; }
};

namespace detail {

inline double resolve_bound(const DualObjectiveContext& ctx, BoundStrategy strategy, const SimplexWeights& start,
                            std::size_t samples, std::uint64_t seed) {
  return strategy == BoundStrategy::rigorous ? estimate_B(ctx) : estimate_B_sampled(ctx, start, samples, seed);
}

// eta = sqrt(n / (B t)); a zero bound means a vanishing subgradient, for
// which any step is exact.
inline double default_step(std::size_t n, double bound, std::size_t t) {
  if (!(bound > 0.0)) return 1.0;
  return std::sqrt(static_cast<double>(n) / (bound * static_cast<double>(t)));
}

inline SimplexWeights mean_of(const std::vector<SimplexWeights>& ws, std::size_t first) {
  const std::size_t n = ws.front().size();
  std::vector<double> acc(n, 0.0);
  for (std::size_t k = first; k < ws.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += ws[k][i];
  }
  const double count = static_cast<double>(ws.size() - first);
  for (auto& a : acc) a /= count;
  return SimplexWeights(std::move(acc));
}

}  // namespace detail

// `steps` iterations of w <- Proj(w - eta * grad(w)); returns the iterates
// after each step.
template <class Gradient>
std::vector<SimplexWeights> projected_subgradient_steps(Gradient&& grad, SimplexWeights w, double step,
                                                        std::size_t steps) {
  std::vector<SimplexWeights> out;
  out.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const auto g = grad(w);
    std::vector<double> v(w.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] - step * g[i];
    w = project_to_simplex(v);
    out.push_back(w);
  }
  return out;
}

// Projected subgradient descent on h over the simplex. Deterministic.
inline SubgradientTrace run_projected_subgradient(const DualObjectiveContext& ctx, const SubgradientConfig& cfg) {
  if (cfg.iterations < 1) throw DomainError("iteration count must be at least 1");
  if (cfg.step && !(*cfg.step > 0.0)) throw DomainError("step size must be positive");
  const auto start = cfg.initial.value_or(SimplexWeights::uniform(ctx.n()));
  if (start.size() != ctx.n()) throw DomainError("initial weights have the wrong length");

  SubgradientTrace tr;
  if (cfg.bound) {
    tr.bound = *cfg.bound;
  } else if (!cfg.step) {
    tr.bound = detail::resolve_bound(ctx, cfg.strategy, start, cfg.bound_samples, cfg.seed);
  }
  tr.step = cfg.step ? *cfg.step : detail::default_step(ctx.n(), *tr.bound, cfg.iterations);

  tr.weights.push_back(start);
  auto iterates = projected_subgradient_steps([&](const SimplexWeights& w) { return subgradient_h(ctx, w); },
                                              start, tr.step, cfg.iterations);
  tr.weights.insert(tr.weights.end(), iterates.begin(), iterates.end());

  tr.objective.reserve(tr.weights.size());
  for (const auto& w : tr.weights) tr.objective.push_back(ctx.h(w));

  tr.argmin = 1;
  for (std::size_t i = 2; i < tr.objective.size(); ++i) {
    if (tr.objective[i] < tr.objective[tr.argmin]) tr.argmin = i;
  }
  tr.min_objective = tr.objective[tr.argmin];
  tr.average = detail::mean_of(tr.weights, 1);
  tr.average_objective = ctx.h(tr.average);
  return tr;
}

struct EquilibriumReport {
  double dual_value = 0.0;
  std::vector<ExtendedReal> divergences;  // D(P_i || Q*(w))
  ExtendedReal max_divergence;            // r
  std::vector<double> residuals;          // w_i (r - D_i)
  double max_residual = 0.0;
  double gap = 0.0;  // r - dual_value
};

// Complementary-slackness and primal-dual diagnostics at w, with
// Q*(w) = tensor_j P-bar(w)^(S_j) as the probabilist's response.
inline EquilibriumReport equilibrium_diagnostics(const DualObjectiveContext& ctx, const SimplexWeights& w) {
  EquilibriumReport rep;
  rep.divergences = ctx.divergences(w);
  rep.dual_value = ctx.dual_value(w).value();
  rep.max_divergence = *std::max_element(rep.divergences.begin(), rep.divergences.end());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double r = 0.0;
    if (w[i] > 0.0 && rep.divergences[i] != rep.max_divergence) {
      r = w[i] * difference(rep.max_divergence, rep.divergences[i]);
    }
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, std::abs(r));
  }
  rep.gap = difference(rep.max_divergence, rep.dual_value);
  return rep;
}

}  // namespace mmf
