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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/info_theory.hpp"
#include "mmf/partition_submodular.hpp"
#include "mmf/subgradient.hpp"

namespace mmf {

// Insertion needs a distorted gain above this.
inline constexpr double kGreedyGainTolerance = 1e-12;

struct TwoLayerConfig {
  std::size_t inner_iterations = 30;  // K
  std::optional<double> step;
  std::optional<double> bound;
  BoundStrategy strategy = BoundStrategy::rigorous;
  std::size_t bound_samples = 64;
  std::uint64_t seed = 20260101;
};

struct Selection {
  std::size_t block = 0;  // 0-based j
  Coordinate coordinate = 0;
};

struct GreedyRound {
  std::size_t round = 0;                      // i + 1
  std::vector<SimplexWeights> inner;          // w_{i+1}^(1..K)
  std::vector<double> inner_objective;        // h on the induced partition
  SimplexWeights average;                     // w-bar_{i+1}
  double f_before = 0.0;                      // f(S_i, w-bar_{i+1})
  std::optional<Selection> best;              // argmax candidate, if any
  double best_gain = 0.0;                     // its distorted gain
  bool inserted = false;
  PartialTuple tuple;                         // S_{i+1}
  double f_after = 0.0;                       // f(S_{i+1}, w-bar_{i+1})
};

struct GreedyTrace {
  std::vector<GreedyRound> rounds;
  PartialTuple tuple;        // S_l
  SimplexWeights average;    // w-bar_l
  double objective = 0.0;    // f(S_l, w-bar_l)
  std::optional<double> bound;
  double step = 0.0;
};

namespace detail {

inline std::vector<SimplexWeights> inner_run(const GreedyContext& ctx, const PartialTuple& s,
                                             const SimplexWeights& start, double step, std::size_t k,
                                             std::vector<double>* objective) {
  const DualObjectiveContext inner(ctx.family(), s.induced_partition(ctx.d()));
  auto ws = projected_subgradient_steps([&](const SimplexWeights& w) { return subgradient_h(inner, w); }, start,
                                        step, k);
  if (objective) {
    for (const auto& w : ws) objective->push_back(inner.h(w));
  }
  return ws;
}

}  // namespace detail

// Two-layer subgradient-greedy: l rounds, each running K projected-subgradient
// steps on f(S_i, .) (warm-started from the previous round's last iterate)
// and then one distorted-greedy insertion
//
//   (1 - 1/l)^(l - (i+1)) Delta_{e,j} g(S_i, w-bar) - c_e(w-bar) > 0,
//
// ties broken by the first (j, e) in lexicographic order.
inline GreedyTrace run_two_layer(const GreedyContext& ctx, const TwoLayerConfig& cfg) {
  if (cfg.inner_iterations < 1) throw DomainError("inner iteration count K must be at least 1");
  if (cfg.step && !(*cfg.step > 0.0)) throw DomainError("step size must be positive");
  const std::size_t l = ctx.limit();
  const std::size_t k = cfg.inner_iterations;
  auto w = SimplexWeights::uniform(ctx.n());

  GreedyTrace tr;
  if (cfg.bound) {
    tr.bound = *cfg.bound;
  } else if (!cfg.step) {
    const DualObjectiveContext finest(ctx.family(), ctx.ground_tuple().induced_partition(ctx.d()));
    tr.bound = detail::resolve_bound(finest, cfg.strategy, w, cfg.bound_samples, cfg.seed);
  }
  tr.step = cfg.step ? *cfg.step : detail::default_step(ctx.n(), *tr.bound, k);

  auto s = ctx.empty_tuple();
  if (l == 0) {
    GreedyRound r;
    r.inner = detail::inner_run(ctx, s, w, tr.step, k, &r.inner_objective);
    r.average = detail::mean_of(r.inner, 0);
    r.f_before = r.f_after = f(ctx, s, r.average);
    r.tuple = s;
    tr.rounds.push_back(std::move(r));
  }

  for (std::size_t i = 0; i < l; ++i) {
    GreedyRound r;
    r.round = i + 1;
    r.inner = detail::inner_run(ctx, s, w, tr.step, k, &r.inner_objective);
    w = r.inner.back();
    r.average = detail::mean_of(r.inner, 0);
    const auto& wb = r.average;
    r.f_before = f(ctx, s, wb);

    const double alpha = std::pow(1.0 - 1.0 / static_cast<double>(l), static_cast<double>(l - (i + 1)));
    for (std::size_t j = 0; j < ctx.ground().size(); ++j) {
      for (auto e : ctx.ground()[j]) {
        if (s.contains(e)) continue;
        const double ce = element_cost(ctx, e, j, wb);
        const double dg = marginal_gain(ctx, s, wb, e, j) + ce;
        const double gain = alpha * dg - ce;
        if (!r.best || gain > r.best_gain) {
          r.best = Selection{j, e};
          r.best_gain = gain;
        }
      }
    }
    if (r.best && r.best_gain > kGreedyGainTolerance) {
      s = s.with(r.best->coordinate, r.best->block);
      r.inserted = true;
    }
    r.tuple = s;
    r.f_after = f(ctx, s, wb);
    tr.rounds.push_back(std::move(r));
  }

  tr.tuple = s;
  tr.average = tr.rounds.back().average;
  tr.objective = f(ctx, s, tr.average);
  return tr;
}

}  // namespace mmf
