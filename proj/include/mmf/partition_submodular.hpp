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
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/info_theory.hpp"
#include "mmf/markov_core.hpp"
#include "mmf/matrix.hpp"
#include "mmf/product_space.hpp"

namespace mmf {

// (S_1, ..., S_{m-1}) with S_j a subset of the ground block V_j. The implicit
// last block is the complement of supp(S).
class PartialTuple {
 public:
  PartialTuple() = default;
  explicit PartialTuple(std::size_t blocks) : part_(std::vector<CoordinateSubset>(blocks)) {}
  explicit PartialTuple(Partition part) : part_(std::move(part)) {}
  PartialTuple(std::initializer_list<CoordinateSubset> blocks) : part_(blocks) {}

  std::size_t size() const { return part_.size(); }
  const CoordinateSubset& operator[](std::size_t j) const { return part_[j]; }
  const Partition& blocks() const { return part_; }
  std::uint32_t support_mask() const { return part_.support_mask(); }
  std::size_t support_size() const { return part_.support_size(); }
  bool contains(Coordinate e) const { return (support_mask() >> (e - 1)) & 1u; }

  // Copy with e added to block j (0-based).
  PartialTuple with(Coordinate e, std::size_t j) const {
    std::vector<CoordinateSubset> b(part_.begin(), part_.end());
    b.at(j) = b[j].with(e);
    return PartialTuple(Partition(std::move(b)));
  }

  // (S_1, ..., S_{m-1}, -supp S) with empty blocks dropped.
  Partition induced_partition(int d) const {
    std::vector<CoordinateSubset> b;
    for (const auto& s : part_) {
      if (!s.empty()) b.push_back(s);
    }
    const auto rest = CoordinateSubset::from_mask(CoordinateSubset::full_mask(d) & ~support_mask(), d);
    if (!rest.empty()) b.push_back(rest);
    return Partition(std::move(b));
  }

  std::string to_string() const { return part_.to_string(); }
  friend bool operator==(const PartialTuple&, const PartialTuple&) = default;

 private:
  Partition part_;
};

// Family, ground tuple V = (V_1, ..., V_{m-1}) and cardinality limit l, with
// the member projections P_i^(A) precomputed for every coordinate set A the
// objective can touch.
class GreedyContext {
 public:
  GreedyContext(ChainFamily family, Partition ground, std::size_t limit)
      : family_(std::move(family)), ground_(std::move(ground)), limit_(limit) {
    d_ = family_.space().d();
    if (ground_.size() == 0) throw DomainError("ground tuple has no blocks");
    if (ground_.max_coordinate() > d_) throw DomainError("ground tuple refers to a coordinate above d");
    if (limit_ > ground_.support_size()) throw DomainError("cardinality limit exceeds |supp(V)|");

    const std::uint32_t full = CoordinateSubset::full_mask(d_);
    const std::uint32_t supp = ground_.support_mask();
    const std::uint32_t rest = full & ~supp;
    for (const auto& v : ground_) for_each_submask(v.mask(), [&](std::uint32_t m) { add_mask(m); });
    for_each_submask(supp, [&](std::uint32_t t) { add_mask(rest | t); });

    for (const auto& p : family_.members()) member_entropy_.push_back(entropy_rate(p));
  }

  const ChainFamily& family() const { return family_; }
  const Partition& ground() const { return ground_; }
  std::size_t limit() const { return limit_; }
  std::size_t n() const { return family_.size(); }
  int d() const { return d_; }
  std::uint32_t rest_mask() const { return CoordinateSubset::full_mask(d_) & ~ground_.support_mask(); }

  // H(P-bar(w)^(A)) for a precomputed coordinate set A; H of the empty set is 0.
  double projected_entropy(std::uint32_t mask, const SimplexWeights& w) const {
    if (mask == 0) return 0.0;
    const auto it = projections_.find(mask);
    if (it == projections_.end()) {
      throw DomainError("coordinate set " + CoordinateSubset::from_mask(mask, d_).to_string() +
                        " is not reachable from the ground tuple");
    }
    const auto& pa = it->second;
    return entropy_rate(weighted_sum(pa, w.values(), pa.front().pi()));
  }

  // sum_i w_i H(P_i)
  double weighted_member_entropy(const SimplexWeights& w) const {
    check(w);
    double s = 0.0;
    for (std::size_t i = 0; i < n(); ++i) s += w[i] * member_entropy_[i];
    return s;
  }

  void validate(const PartialTuple& s) const {
    if (s.size() != ground_.size()) {
      throw DomainError("tuple has " + std::to_string(s.size()) + " blocks, ground tuple has " +
                        std::to_string(ground_.size()));
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
      if ((s[j].mask() & ~ground_[j].mask()) != 0) {
        throw DomainError("block " + std::to_string(j + 1) + " " + s[j].to_string() + " is not inside V_" +
                          std::to_string(j + 1) + " = " + ground_[j].to_string());
      }
    }
  }

  void check(const SimplexWeights& w) const {
    if (w.size() != n()) throw DomainError("weight vector length does not match the family");
  }

  PartialTuple empty_tuple() const { return PartialTuple(ground_.size()); }
  PartialTuple ground_tuple() const { return PartialTuple(ground_); }

 private:
  template <class F>
  static void for_each_submask(std::uint32_t mask, F&& f) {
    for (std::uint32_t s = mask;; s = (s - 1) & mask) {
      f(s);
      if (s == 0) break;
    }
  }

  void add_mask(std::uint32_t m) {
    if (m == 0 || projections_.count(m)) return;
    const auto s = CoordinateSubset::from_mask(m, d_);
    std::vector<StochasticMatrix> v;
    for (const auto& p : family_.members()) v.push_back(keep_in(p, s));
    projections_.emplace(m, std::move(v));
  }

  ChainFamily family_;
  Partition ground_;
  std::size_t limit_;
  int d_ = 0;
  std::map<std::uint32_t, std::vector<StochasticMatrix>> projections_;
  std::vector<double> member_entropy_;
};

// f(S, w) = sum_i w_i D(P_i || (tensor_j P-bar^(S_j)) tensor P-bar^(-supp S)),
// evaluated as sum_j H(P-bar^(S_j)) + H(P-bar^(-supp S)) - sum_i w_i H(P_i).
inline double f(const GreedyContext& ctx, const PartialTuple& s, const SimplexWeights& w) {
  ctx.validate(s);
  ctx.check(w);
  double total = -ctx.weighted_member_entropy(w);
  for (const auto& b : s.blocks()) total += ctx.projected_entropy(b.mask(), w);
  total += ctx.projected_entropy(CoordinateSubset::full_mask(ctx.d()) & ~s.support_mask(), w);
  return total;
}

// Delta_{e,j} f(S): gain from adding coordinate e to block j (0-based).
inline double marginal_gain(const GreedyContext& ctx, const PartialTuple& s, const SimplexWeights& w,
                            Coordinate e, std::size_t j) {
  ctx.validate(s);
  if (j >= s.size()) throw DomainError("block index out of range");
  if (s.contains(e)) throw DomainError("coordinate " + std::to_string(e) + " is already in supp(S)");
  if (!ctx.ground()[j].contains(e)) {
    throw DomainError("coordinate " + std::to_string(e) + " is not in V_" + std::to_string(j + 1));
  }
  return f(ctx, s.with(e, j), w) - f(ctx, s, w);
}

// beta(w) = -sum_j sum_{e in V_j} [H(P-bar^(-supp V + e)) + H(P-bar^(e))], the
// largest offset keeping c nonnegative for every S inside V.
inline double beta(const GreedyContext& ctx, const SimplexWeights& w) {
  ctx.check(w);
  const std::uint32_t rest = ctx.rest_mask();
  double b = 0.0;
  for (const auto& v : ctx.ground()) {
    for (auto e : v) {
      const std::uint32_t em = 1u << (e - 1);
      b -= ctx.projected_entropy(rest | em, w) + ctx.projected_entropy(em, w);
    }
  }
  return b;
}

// Per-element weight of the modular part:
//
//   D(P-bar^(V_j) || P-bar^(V_j - e) x P-bar^(e))
//     - D(P-bar^(-supp V + e) || P-bar^(-supp V) x P-bar^(e)),
//
// written through entropy rates. Equals -Delta_{e,j} f(V - e).
inline double element_cost(const GreedyContext& ctx, Coordinate e, std::size_t j, const SimplexWeights& w) {
  ctx.check(w);
  const auto& vj = ctx.ground().blocks()[j];
  if (!vj.contains(e)) throw DomainError("coordinate " + std::to_string(e) + " is not in V_" + std::to_string(j + 1));
  const std::uint32_t em = 1u << (e - 1);
  const std::uint32_t rest = ctx.rest_mask();
  const double block_term =
      ctx.projected_entropy(vj.mask() & ~em, w) + ctx.projected_entropy(em, w) - ctx.projected_entropy(vj.mask(), w);
  const double rest_term =
      ctx.projected_entropy(rest, w) + ctx.projected_entropy(em, w) - ctx.projected_entropy(rest | em, w);
  return block_term - rest_term;
}

// c(S, w) = -beta(w) + sum_j sum_{e in S_j} element_cost(e, j, w). Modular and
// nonnegative.
inline double c(const GreedyContext& ctx, const PartialTuple& s, const SimplexWeights& w) {
  ctx.validate(s);
  double total = -beta(ctx, w);
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (auto e : s[j]) total += element_cost(ctx, e, j, w);
  }
  if (total < -1e-12) {
    throw NumericalError("modular cost c(S, w) = " + std::to_string(total) + " is negative; beta is inconsistent");
  }
  return total;
}

// g = f + c, monotone non-decreasing and (m-1)-submodular.
inline double g(const GreedyContext& ctx, const PartialTuple& s, const SimplexWeights& w) {
  return f(ctx, s, w) + c(ctx, s, w);
}

// C = max over S below V of c(S, w). Element costs can be negative, so the
// maximum keeps only the positive ones; it equals c(V, w) when none is.
inline double cost_upper_bound(const GreedyContext& ctx, const SimplexWeights& w) {
  double total = -beta(ctx, w);
  for (std::size_t j = 0; j < ctx.ground().size(); ++j) {
    for (auto e : ctx.ground()[j]) total += std::max(0.0, element_cost(ctx, e, j, w));
  }
  return total;
}

}  // namespace mmf
