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

// Random instances and brute-force oracles shared by the test suites. The
// oracles work from the definitions with explicit coordinate loops and never
// call the library routine they are used to check.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "mmf/markov_core.hpp"
#include "mmf/matrix.hpp"
#include "mmf/product_space.hpp"

namespace mmf::testing {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline Distribution random_distribution(const ProductSpace& space, Rng& rng, double floor = 0.05) {
  std::vector<double> v(space.size());
  double total = 0.0;
  for (auto& x : v) total += (x = floor + uniform01(rng));
  for (auto& x : v) x /= total;
  return Distribution(space, std::move(v));
}

// Metropolis chain for `pi` with a random symmetric proposal. Every entry is
// positive, so all projections and averages have full support.
inline StochasticMatrix random_reversible_chain(const Distribution& pi, Rng& rng) {
  const std::size_t n = pi.size();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double k = (0.05 + uniform01(rng)) / static_cast<double>(n);
      e[x * n + y] = k * std::min(1.0, pi[y] / pi[x]);
      e[y * n + x] = k * std::min(1.0, pi[x] / pi[y]);
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    double off = 0.0;
    for (std::size_t y = 0; y < n; ++y) off += y == x ? 0.0 : e[x * n + y];
    e[x * n + x] = 1.0 - off;
  }
  return StochasticMatrix(pi.space(), std::move(e), pi);
}

// n reversible chains sharing one random stationary law.
inline ChainFamily random_family(const ProductSpace& space, std::size_t n, Rng& rng) {
  const auto pi = random_distribution(space, rng);
  std::vector<StochasticMatrix> members;
  for (std::size_t i = 0; i < n; ++i) members.push_back(random_reversible_chain(pi, rng));
  return ChainFamily(std::move(members), pi);
}

inline SimplexWeights random_weights(std::size_t n, Rng& rng) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = gamma(rng) + 1e-12);
  for (auto& x : w) x /= total;
  return SimplexWeights(std::move(w));
}

// Random covering partition of {1..d} into at most `max_blocks` nonempty blocks.
inline Partition random_partition(int d, std::size_t max_blocks, Rng& rng) {
  std::vector<std::vector<Coordinate>> blocks(max_blocks);
  for (Coordinate c = 1; c <= d; ++c) blocks[rng() % max_blocks].push_back(c);
  std::vector<CoordinateSubset> out;
  for (auto& b : blocks) {
    if (!b.empty()) out.emplace_back(std::move(b));
  }
  return Partition(std::move(out));
}

// Index of x restricted to the coordinates in `mask` (bit c-1 for coordinate
// c), in mixed radix with the lowest coordinate most significant.
inline std::size_t restrict_index(const ProductSpace& space, std::size_t x, std::uint32_t mask) {
  const auto xs = space.decode(x);
  std::size_t r = 0;
  for (int c = 1; c <= space.d(); ++c) {
    if ((mask >> (c - 1)) & 1u) r = r * space.dim(c) + xs[c - 1];
  }
  return r;
}

inline std::size_t restricted_size(const ProductSpace& space, std::uint32_t mask) {
  std::size_t n = 1;
  for (int c = 1; c <= space.d(); ++c) {
    if ((mask >> (c - 1)) & 1u) n *= space.dim(c);
  }
  return n;
}

// Dense keep-in kernel from the definition:
//   P^(S)(a, b) = sum_{x: x^S = a} pi(x) sum_{y: y^S = b} P(x, y) / pi^(S)(a).
inline std::vector<double> oracle_keep_in(const StochasticMatrix& p, const Distribution& pi, std::uint32_t mask) {
  const auto& space = p.space();
  const std::size_t m = restricted_size(space, mask);
  std::vector<double> num(m * m, 0.0), den(m, 0.0);
  for (std::size_t x = 0; x < space.size(); ++x) {
    const auto a = restrict_index(space, x, mask);
    den[a] += pi[x];
    for (std::size_t y = 0; y < space.size(); ++y) num[a * m + restrict_index(space, y, mask)] += pi[x] * p(x, y);
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) num[a * m + b] /= den[a];
  }
  return num;
}

// Tensor product from per-block dense kernels: Q(x, y) = prod_j K_j(x^Sj, y^Sj).
inline std::vector<double> oracle_tensor(const ProductSpace& space, const std::vector<std::uint32_t>& masks,
                                         const std::vector<std::vector<double>>& kernels) {
  const std::size_t n = space.size();
  std::vector<double> q(n * n, 1.0);
  for (std::size_t j = 0; j < masks.size(); ++j) {
    const std::size_t m = restricted_size(space, masks[j]);
    for (std::size_t x = 0; x < n; ++x) {
      const auto a = restrict_index(space, x, masks[j]);
      for (std::size_t y = 0; y < n; ++y) q[x * n + y] *= kernels[j][a * m + restrict_index(space, y, masks[j])];
    }
  }
  return q;
}

// sum_x pi(x) sum_y M(x, y) ln(M(x, y) / L(x, y)); +inf on a support violation.
inline double oracle_kl(const std::vector<double>& m, const std::vector<double>& l, const std::vector<double>& pi) {
  const std::size_t n = pi.size();
  double s = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double a = m[x * n + y];
      if (a <= 0.0) continue;
      const double b = l[x * n + y];
      if (b <= 0.0) return std::numeric_limits<double>::infinity();
      s += pi[x] * a * std::log(a / b);
    }
  }
  return s;
}

inline std::vector<double> dense(const StochasticMatrix& p) { return {p.entries().begin(), p.entries().end()}; }
inline std::vector<double> dense(const Distribution& d) { return {d.values().begin(), d.values().end()}; }

inline std::vector<double> oracle_average(const ChainFamily& fam, const SimplexWeights& w) {
  std::vector<double> out(fam.space().size() * fam.space().size(), 0.0);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w[i] * fam[i].entries()[k];
  }
  return out;
}

// Marginal law of pi on `mask`.
inline std::vector<double> oracle_marginal(const Distribution& pi, std::uint32_t mask) {
  std::vector<double> out(restricted_size(pi.space(), mask), 0.0);
  for (std::size_t x = 0; x < pi.size(); ++x) out[restrict_index(pi.space(), x, mask)] += pi[x];
  return out;
}

// sum_i w_i D(P_i || tensor_j Pbar^(S_j)) from dense loops.
inline double oracle_dual(const ChainFamily& fam, const std::vector<std::uint32_t>& masks, const SimplexWeights& w) {
  const auto& space = fam.space();
  const auto avg = oracle_average(fam, w);
  StochasticMatrix pbar(space, avg, fam.pi());
  std::vector<std::vector<double>> kernels;
  for (auto m : masks) kernels.push_back(oracle_keep_in(pbar, fam.pi(), m));
  const auto q = oracle_tensor(space, masks, kernels);
  double s = 0.0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (w[i] > 0.0) s += w[i] * oracle_kl(dense(fam[i]), q, dense(fam.pi()));
  }
  return s;
}

// Entropy rate -sum_x pi(x) sum_y P ln P of a dense kernel.
inline double oracle_entropy_rate(const std::vector<double>& p, const std::vector<double>& pi) {
  const std::size_t n = pi.size();
  double s = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double v = p[x * n + y];
      if (v > 0.0) s -= pi[x] * v * std::log(v);
    }
  }
  return s;
}

// The n = 2, d = 2 instance used for the rate and duality checks: two
// Metropolis chains for a common random law on {0,1}^2, partition ({1},{2}).
inline ChainFamily oracle_family() {
  Rng rng(7);
  return random_family(ProductSpace::binary(2), 2, rng);
}

inline Partition oracle_partition() { return Partition{{1}, {2}}; }

struct GridOptimum {
  double first_weight = 0.0;  // w*_1
  double value = 0.0;         // h(w*)
};

// Minimizes h over w = (a, 1 - a) on the grid a = k * step.
template <class Objective>
GridOptimum grid_minimize_two(Objective&& h, double step = 1e-4) {
  GridOptimum best{0.0, std::numeric_limits<double>::infinity()};
  const auto count = static_cast<long>(std::llround(1.0 / step));
  for (long k = 0; k <= count; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(count);
    const double v = h(SimplexWeights({a, 1.0 - a}));
    if (v < best.value) best = {a, v};
  }
  return best;
}

// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Closest point to v on the simplex grid with spacing 1/res, n in {2, 3}.
inline std::vector<double> grid_projection(const std::vector<double>& v, int res) {
  std::vector<double> best;
  double bd = std::numeric_limits<double>::infinity();
  const double r = res;
  if (v.size() == 2) {
    for (int a = 0; a <= res; ++a) {
      const std::vector<double> w{a / r, (res - a) / r};
      const double dd = sq_dist(w, v);
      if (dd < bd) bd = dd, best = w;
    }
  } else {
    for (int a = 0; a <= res; ++a) {
      for (int b = 0; a + b <= res; ++b) {
        const std::vector<double> w{a / r, b / r, (res - a - b) / r};
        const double dd = sq_dist(w, v);
        if (dd < bd) bd = dd, best = w;
      }
    }
  }
  return best;
}

}  // namespace mmf::testing
