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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/matrix.hpp"
#include "mmf/product_space.hpp"

namespace mmf {

// pi^(S): sum of pi over the coordinates outside S.
inline Distribution marginal(const Distribution& pi, const CoordinateSubset& s) {
  if (s.empty()) throw DomainError("marginal over the empty subset; use the convention P^(empty) = 1");
  const auto& space = pi.space();
  auto sub = space.subspace(s);
  const auto r = space.restriction_map(s);
  std::vector<double> out(sub.size(), 0.0);
  for (std::size_t x = 0; x < space.size(); ++x) out[r[x]] += pi[x];
  return {std::move(sub), std::move(out)};
}

// Keep-S-in matrix P^(S) over X^(S), taken with respect to the stationary law
// attached to `p`:
//
//   P^(S)(u, v) = sum_{x|S=u, y|S=v} pi(x) P(x, y) / pi^(S)(u).
//
// S = {1..d} returns `p` unchanged.
inline StochasticMatrix keep_in(const StochasticMatrix& p, const CoordinateSubset& s) {
  const auto& space = p.space();
  if (s.empty()) throw DomainError("keep-S-in with S empty; use the convention P^(empty) = 1");
  space.check_subset(s);
  if (s.size() == static_cast<std::size_t>(space.d())) return p;

  const auto& pi = p.pi();
  auto sub = space.subspace(s);
  const auto r = space.restriction_map(s);
  const std::size_t n = space.size();
  const std::size_t ns = sub.size();

  std::vector<double> num(ns * ns, 0.0);
  std::vector<double> den(ns, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    const double px = pi[x];
    den[r[x]] += px;
    double* out = num.data() + r[x] * ns;
    const auto row = p.row(x);
    for (std::size_t y = 0; y < n; ++y) out[r[y]] += px * row[y];
  }
  for (std::size_t u = 0; u < ns; ++u) {
    for (std::size_t v = 0; v < ns; ++v) num[u * ns + v] /= den[u];
  }
  return {sub, std::move(num), Distribution(sub, std::move(den))};
}

// Leave-S-out matrix P^(-S); always the keep-in matrix of the complement.
inline StochasticMatrix leave_out(const StochasticMatrix& p, const CoordinateSubset& s) {
  const int d = p.space().d();
  p.space().check_subset(s);
  if (s.size() == static_cast<std::size_t>(d)) throw DomainError("leave-S-out with S = {1..d} is empty");
  if (s.empty()) return p;
  return keep_in(p, s.complement(d));
}

struct BlockFactor {
  CoordinateSubset block;
  StochasticMatrix kernel;  // over X^(block)
};

// (x)(y) -> prod_j Q_j(x|S_j, y|S_j). Blocks are matched to the global codec by
// coordinate extraction, so they need not be contiguous.
inline StochasticMatrix tensor_product(std::span<const BlockFactor> factors, const ProductSpace& space) {
  if (factors.empty()) throw DomainError("tensor product of no factors");
  std::vector<CoordinateSubset> blocks;
  for (const auto& f : factors) {
    space.check_subset(f.block);
    if (f.block.empty()) throw DomainError("tensor factor on an empty block");
    if (!(f.kernel.space() == space.subspace(f.block))) {
      throw DomainError("tensor factor for block " + f.block.to_string() + " has the wrong space");
    }
    blocks.push_back(f.block);
  }
  const Partition part(std::move(blocks));  // throws on overlap
  if (!part.covers(space.d())) throw DomainError("tensor factors do not cover every coordinate");

  if (factors.size() == 1) return factors[0].kernel;

  const std::size_t n = space.size();
  std::vector<std::vector<std::size_t>> maps;
  bool all_pi = true;
  for (const auto& f : factors) {
    maps.push_back(space.restriction_map(f.block));
    all_pi = all_pi && f.kernel.has_pi();
  }

  std::vector<double> e(n * n, 1.0);
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const auto& k = factors[j].kernel;
    const auto& r = maps[j];
    for (std::size_t x = 0; x < n; ++x) {
      const auto row = k.row(r[x]);
      double* out = e.data() + x * n;
      for (std::size_t y = 0; y < n; ++y) out[y] *= row[r[y]];
    }
  }

  std::optional<Distribution> pi;
  if (all_pi) {
    std::vector<double> pv(n, 1.0);
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const auto& pj = factors[j].kernel.pi();
      for (std::size_t x = 0; x < n; ++x) pv[x] *= pj[maps[j][x]];
    }
    pi = Distribution(space, std::move(pv));
  }
  return {space, std::move(e), std::move(pi)};
}

inline StochasticMatrix tensor_product(const std::vector<BlockFactor>& factors, const ProductSpace& space) {
  return tensor_product(std::span<const BlockFactor>(factors), space);
}

// sum_i w_i M_i for matrices over one space; `pi` is attached to the result.
inline StochasticMatrix weighted_sum(std::span<const StochasticMatrix> ms, std::span<const double> w,
                                     std::optional<Distribution> pi) {
  if (ms.size() != w.size()) {
    throw DomainError("weight vector has length " + std::to_string(w.size()) + ", expected " +
                      std::to_string(ms.size()));
  }
  const auto& space = ms.front().space();
  const std::size_t nn = space.size() * space.size();
  std::vector<double> e(nn, 0.0);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto src = ms[i].entries();
    for (std::size_t k = 0; k < nn; ++k) e[k] += w[i] * src[k];
  }
  return {space, std::move(e), std::move(pi)};
}

// P-bar(w) = sum_i w_i P_i, stationary for the family's law.
inline StochasticMatrix average(const ChainFamily& family, const SimplexWeights& w) {
  return weighted_sum(family.members(), w.values(), family.pi());
}

inline StochasticMatrix multiply(const StochasticMatrix& a, const StochasticMatrix& b) {
  if (!(a.space() == b.space())) throw DomainError("matrix product over different spaces");
  const std::size_t n = a.size();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double* out = e.data() + x * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double axk = a(x, k);
      if (axk == 0.0) continue;
      const auto brow = b.row(k);
      for (std::size_t y = 0; y < n; ++y) out[y] += axk * brow[y];
    }
  }
  std::optional<Distribution> pi;
  if (a.has_pi()) pi = a.pi();
  return {a.space(), std::move(e), std::move(pi)};
}

}  // namespace mmf
