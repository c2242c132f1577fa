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

// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "greedy_bound.hpp"
#include "mmf/experiment.hpp"
#include "mmf/simplex.hpp"
#include "mmf/subgradient.hpp"
#include "mmf/two_layer.hpp"
#include "submodular_checks.hpp"
#include "support.hpp"

namespace {

using namespace mmf;
using testing::Rng;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  if (!o.pass) ++failures;
  fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ChainFamily curie_weiss_family() { return build_family(curie_weiss_chain({}).matrix, dyadic_powers(5)); }

// Same settings as the shipped presets.
SubgradientConfig preset_subgradient(std::size_t t) {
  SubgradientConfig cfg;
  cfg.iterations = t;
  cfg.strategy = BoundStrategy::sampled;
  cfg.bound_samples = 64;
  cfg.seed = 20260101;
  return cfg;
}

Outcome curie_weiss_evaluations() {
  const DualObjectiveContext ctx(curie_weiss_family(), Partition{{1, 2}, {3, 5}, {4}});
  const double h0 = ctx.h(SimplexWeights::uniform(5));
  const double hv = ctx.h(SimplexWeights::vertex(5, 0));
  return {std::abs(h0 + 0.39) <= 0.02 && std::abs(hv + 0.48) <= 0.02,
          fmt::format("h(uniform) = {:.4f} (target -0.39 +- 0.02), h(e1) = {:.4f} (target -0.48 +- 0.02)", h0, hv)};
}

Outcome curie_weiss_subgradient() {
  const auto t0 = std::chrono::steady_clock::now();
  const DualObjectiveContext ctx(curie_weiss_family(), Partition{{1, 2}, {3, 5}, {4}});
  const auto tr = run_projected_subgradient(ctx, preset_subgradient(300));
  const double secs = seconds_since(t0);
  const auto& w = tr.final();
  return {tr.min_objective <= -0.63 && w[1] <= 0.02 && w[2] <= 0.02 && secs < 30.0,
          fmt::format("min h = {:.4f} (<= -0.63), final w2 = {:.4f}, w3 = {:.4f} (<= 0.02), {:.2f} s (< 30 s)",
                      tr.min_objective, w[1], w[2], secs)};
}

Outcome curie_weiss_two_layer() {
  const auto t0 = std::chrono::steady_clock::now();
  const GreedyContext ctx(curie_weiss_family(), Partition{{1, 2}, {3, 5}}, 4);
  TwoLayerConfig cfg;
  cfg.inner_iterations = 30;
  cfg.strategy = BoundStrategy::sampled;
  cfg.bound_samples = 64;
  cfg.seed = 20260101;
  const auto tr = run_two_layer(ctx, cfg);
  const double secs = seconds_since(t0);
  const std::vector<double> target{0.72, 0.0, 0.0, 0.0, 0.28};
  double dev = 0.0;
  for (std::size_t i = 0; i < 5; ++i) dev = std::max(dev, std::abs(tr.average[i] - target[i]));
  const bool tuple_ok = tr.tuple == PartialTuple{{2}, {3, 5}};
  return {tuple_ok && dev <= 0.1 && secs < 60.0,
          fmt::format("S = {} (want ({{2}},{{3,5}})), l-inf distance of w to target {:.4f} (<= 0.1), {:.2f} s (< 60 s)",
                      tr.tuple.to_string(), dev, secs)};
}

Outcome pythagorean_identity() {
  Rng rng(1001);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int d = 1 + k % 3;
    const std::size_t n = 1 + (k / 3) % 3;
    const auto space = ProductSpace::binary(d);
    const auto fam = testing::random_family(space, n, rng);
    const auto part = testing::random_partition(d, 3, rng);
    std::vector<StochasticMatrix> q;
    for (const auto& b : part) q.push_back(testing::random_family(space.subspace(b), 1, rng)[0]);
    worst = std::max(worst, std::abs(pythagorean_gap(fam, part, q, testing::random_weights(n, rng))));
  }
  return {worst < 1e-9, fmt::format("max |gap| = {:.3g} over 200 instances (< 1e-9)", worst)};
}

Outcome subgradient_correctness() {
  Rng rng(1002);
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;  // max ||g||^2 / B
  for (int k = 0; k < 20; ++k) {
    const int d = 2 + k % 2;
    const std::size_t n = 2 + k % 2;
    const auto fam = testing::random_family(ProductSpace::binary(d), n, rng);
    const DualObjectiveContext ctx(fam, testing::random_partition(d, 3, rng));
    const double b = estimate_B(ctx);
    auto norm2 = [](const std::vector<double>& g) {
      double s = 0.0;
      for (double x : g) s += x * x;
      return s;
    };
    const auto v = testing::random_weights(n, rng);
    const auto g = subgradient_h(ctx, v);
    const double hv = ctx.h(v);
    worst_ratio = std::max(worst_ratio, norm2(g) / b);
    for (int pair = 0; pair < 1000; ++pair) {
      const auto w = testing::random_weights(n, rng);
      double lin = hv;
      for (std::size_t i = 0; i < n; ++i) lin += g[i] * (w[i] - v[i]);
      worst_slack = std::min(worst_slack, ctx.h(w) - lin);
      worst_ratio = std::max(worst_ratio, norm2(subgradient_h(ctx, w)) / b);
    }
  }
  return {worst_slack >= -1e-9 && worst_ratio <= 1.0,
          fmt::format("min slack = {:.3g} (>= -1e-9) over 20 x 1000 pairs, max |g|^2 / B = {:.4f} (<= 1)",
                      worst_slack, worst_ratio)};
}

Outcome average_rate_bound() {
  const auto fam = testing::oracle_family();
  const DualObjectiveContext ctx(fam, testing::oracle_partition());
  const auto opt = testing::grid_minimize_two([&](const SimplexWeights& w) { return ctx.h(w); });
  const double b = estimate_B(ctx);
  int violations = 0;
  std::string parts;
  for (std::size_t t : {10u, 100u, 1000u}) {
    SubgradientConfig cfg;
    cfg.iterations = t;
    const auto tr = run_projected_subgradient(ctx, cfg);
    const double gap = tr.average_objective - opt.value;
    const double bound = std::sqrt(2.0 * b / static_cast<double>(t));
    if (gap > bound) ++violations;
    parts += fmt::format(" t={}: {:.3g} <= {:.3g};", t, gap, bound);
  }
  return {violations == 0, fmt::format("h(avg) - h(w*):{} violations = {}", parts, violations)};
}

// Checked on the rate instance (vertex optimum) and on one with an interior optimum.
Outcome duality_at_optimum() {
  bool pass = true;
  std::string detail;
  for (const auto& fam : {testing::oracle_family(), [] {
                            Rng rng(2);
                            return testing::random_family(ProductSpace::binary(2), 2, rng);
                          }()}) {
    const DualObjectiveContext ctx(fam, testing::oracle_partition());
    const auto opt = testing::grid_minimize_two([&](const SimplexWeights& w) { return ctx.h(w); });
    const auto rep = equilibrium_diagnostics(ctx, SimplexWeights({opt.first_weight, 1.0 - opt.first_weight}));
    pass = pass && rep.gap <= 1e-3 && rep.gap >= -1e-12 && rep.max_residual <= 1e-3;
    detail += fmt::format("{}w* = ({:.4f}, {:.4f}): gap = {:.3g}, max residual = {:.3g}", detail.empty() ? "" : "; ",
                          opt.first_weight, 1.0 - opt.first_weight, rep.gap, rep.max_residual);
  }
  return {pass, detail + " (<= 1e-3)"};
}

Outcome entropy_rate_submodularity() {
  Rng rng(1003);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 5; ++k) {
    const auto fam = testing::random_family(ProductSpace::binary(4), 3, rng);
    const auto w = testing::random_weights(3, rng);
    const auto pbar = average(fam, w);
    worst = std::min({worst,
                      testing::worst_submodularity_slack(4, [&](auto s) { return testing::projected_entropy(fam[0], s); }),
                      testing::worst_submodularity_slack(4, [&](auto s) { return testing::split_distance(fam[0], s); }),
                      testing::worst_submodularity_slack(4, [&](auto s) { return testing::projected_entropy(pbar, s); }),
                      testing::worst_submodularity_slack(
                          4, [&](auto s) { return testing::weighted_split_distance(fam, w, s); })});
  }
  return {worst >= -1e-9, fmt::format("min slack over all S, T at d = 4 = {:.3g} (>= -1e-9)", worst)};
}

Outcome partition_function_structure() {
  Rng rng(1004);
  double orthant = std::numeric_limits<double>::infinity();
  double monotone = std::numeric_limits<double>::infinity();
  double modular = 0.0;
  for (const auto& v : {Partition{{1, 3}, {2}, {4}}, Partition{{1}, {2}, {3}}, Partition{{1, 2}, {3, 4}}}) {
    for (int k = 0; k < 2; ++k) {
      const auto fam = testing::random_family(ProductSpace::binary(4), 3, rng);
      const auto w = testing::random_weights(3, rng);
      const GreedyContext ctx(fam, v, v.support_size());
      const auto all = testing::tuples_below(v);
      for (const auto& s : all) {
        for (std::size_t j = 0; j < v.size(); ++j) {
          for (auto e : v[j]) {
            if (s.contains(e)) continue;
            const auto se = s.with(e, j);
            monotone = std::min(monotone, g(ctx, se, w) - g(ctx, s, w));
            modular = std::max(modular, std::abs(c(ctx, se, w) - c(ctx, s, w) - element_cost(ctx, e, j, w)));
            for (const auto& t : all) {
              if (!testing::below(s, t) || t.contains(e)) continue;
              orthant = std::min(orthant, marginal_gain(ctx, s, w, e, j) - marginal_gain(ctx, t, w, e, j));
            }
          }
        }
      }
    }
  }
  return {orthant >= -1e-9 && monotone >= -1e-9 && modular <= 1e-12,
          fmt::format("orthant slack {:.3g}, min increment of g {:.3g} (>= -1e-9), cost modularity error {:.3g}",
                      orthant, monotone, modular)};
}

Outcome greedy_lower_bound() {
  Rng rng(1005);
  const std::vector<Partition> grounds{Partition{{1, 2}, {3}}, Partition{{1}, {2, 4}}, Partition{{1, 3}, {2}, {4}},
                                       Partition{{2, 3}, {4}}, Partition{{1, 2}, {3, 4}}};
  int violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10; ++k) {
    const auto& v = grounds[k % grounds.size()];
    const auto fam = testing::random_family(ProductSpace::binary(4), 2 + k % 2, rng);
    const GreedyContext ctx(fam, v, std::min<std::size_t>(2 + k % 2, v.support_size()));
    TwoLayerConfig cfg;
    cfg.inner_iterations = 20;
    const auto tr = run_two_layer(ctx, cfg);
    const auto b = testing::greedy_lower_bound(ctx, tr, cfg.inner_iterations);
    if (!(b.achieved >= b.bound)) ++violations;
    min_margin = std::min(min_margin, b.achieved - b.bound);
  }
  return {violations == 0,
          fmt::format("10 instances at d = 4, violations = {}, min f(S_l) - bound = {:.4g}", violations, min_margin)};
}

Outcome simplex_projection() {
  Rng rng(1006);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + k % 2;
    std::vector<double> v(n);
    for (auto& x : v) x = 3.0 * testing::uniform01(rng) - 1.0;
    const auto p = project_to_simplex(v);
    const auto grid = testing::grid_projection(v, 1000);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(p[i] - grid[i]));
  }
  return {worst <= 1e-3, fmt::format("max deviation from 1e-3 grid oracle = {:.3g} over 100 points", worst)};
}

}  // namespace

int main() {
  report("curie-weiss h at uniform and first vertex", curie_weiss_evaluations);
  report("curie-weiss projected subgradient run", curie_weiss_subgradient);
  report("curie-weiss two-layer run", curie_weiss_two_layer);
  report("pythagorean identity", pythagorean_identity);
  report("subgradient inequality and norm bound", subgradient_correctness);
  report("averaged iterate rate bound", average_rate_bound);
  report("duality and complementary slackness", duality_at_optimum);
  report("entropy-rate submodularity", entropy_rate_submodularity);
  report("orthant submodularity, cost modularity, monotone g", partition_function_structure);
  report("two-layer lower bound against exhaustive optimum", greedy_lower_bound);
  report("simplex projection", simplex_projection);
  fmt::print("{} of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
