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
#include <limits>
#include <string>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/markov_core.hpp"
#include "mmf/matrix.hpp"
#include "mmf/product_space.hpp"

namespace mmf {

// A nonnegative-or-finite real extended with +infinity. Infinite values only
// come from KL support violations.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtendedReal infinity() { return ExtendedReal(std::numeric_limits<double>::infinity()); }

  constexpr bool is_finite() const { return value_ != std::numeric_limits<double>::infinity(); }
  constexpr double value() const { return value_; }

  // w * x with the convention 0 * inf = 0.
  constexpr ExtendedReal scaled(double w) const {
    if (w == 0.0) return ExtendedReal(0.0);
    return is_finite() ? ExtendedReal(w * value_) : infinity();
  }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (!a.is_finite() || !b.is_finite()) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }

  // a - b; infinity minus infinity is reported, never silently produced.
  friend double difference(ExtendedReal a, ExtendedReal b) {
    if (!a.is_finite() && !b.is_finite()) throw IndeterminateError("infinity minus infinity");
    return a.value_ - b.value_;
  }

  friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) { return a.value_ <=> b.value_; }
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

namespace detail {

inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

inline void require_same_space(const StochasticMatrix& a, const StochasticMatrix& b, const Distribution& pi) {
  if (!(a.space() == b.space()) || !(a.space() == pi.space())) {
    throw DomainError("divergence between objects on different spaces");
  }
}

}  // namespace detail

// H(pi) = -sum pi ln pi, in nats.
inline double shannon_entropy(const Distribution& pi) {
  double s = 0.0;
  for (double p : pi.values()) s -= detail::xlogx(p);
  return s;
}

// H(P) = -sum_x pi(x) sum_y P(x,y) ln P(x,y) with the attached stationary law.
inline double entropy_rate(const StochasticMatrix& p) {
  const auto& pi = p.pi();
  double s = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    double row = 0.0;
    for (double v : p.row(x)) row += detail::xlogx(v);
    s -= pi[x] * row;
  }
  return s;
}

// D^pi(M || L) = sum_x pi(x) sum_y M(x,y) ln(M(x,y)/L(x,y)), +inf when M puts
// mass where L does not.
inline ExtendedReal kl_divergence(const StochasticMatrix& m, const StochasticMatrix& l, const Distribution& pi) {
  detail::require_same_space(m, l, pi);
  double s = 0.0;
  for (std::size_t x = 0; x < m.size(); ++x) {
    const auto mr = m.row(x);
    const auto lr = l.row(x);
    double row = 0.0;
    for (std::size_t y = 0; y < mr.size(); ++y) {
      if (mr[y] <= 0.0) continue;
      if (lr[y] <= 0.0) return ExtendedReal::infinity();
      row += mr[y] * std::log(mr[y] / lr[y]);
    }
    s += pi[x] * row;
  }
  return s;
}

// (1/2) sum_{x,y} pi(x) |P(x,y) - Q(x,y)|
inline double tv_distance(const StochasticMatrix& p, const StochasticMatrix& q, const Distribution& pi) {
  detail::require_same_space(p, q, pi);
  double s = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const auto pr = p.row(x);
    const auto qr = q.row(x);
    double row = 0.0;
    for (std::size_t y = 0; y < pr.size(); ++y) row += std::abs(pr[y] - qr[y]);
    s += pi[x] * row;
  }
  return 0.5 * s;
}

// Family + full-cover partition with every member's block projections
// P_i^(S_j) computed once. All queries are const and thread-safe.
class DualObjectiveContext {
 public:
  DualObjectiveContext(ChainFamily family, Partition partition)
      : family_(std::move(family)), partition_(std::move(partition)) {
    const int d = family_.space().d();
    if (partition_.size() == 0) throw DomainError("partition has no blocks");
    if (partition_.max_coordinate() > d) throw DomainError("partition refers to a coordinate above d");
    for (const auto& b : partition_) {
      if (b.empty()) throw DomainError("dual objective partition has an empty block");
    }
    if (!partition_.covers(d)) throw DomainError("dual objective partition must cover every coordinate");
    projections_.resize(partition_.size());
    for (std::size_t j = 0; j < partition_.size(); ++j) {
      for (const auto& p : family_.members()) projections_[j].push_back(keep_in(p, partition_[j]));
    }
  }

  const ChainFamily& family() const { return family_; }
  const Partition& partition() const { return partition_; }
  std::size_t n() const { return family_.size(); }

  // P_i^(S_j) for every member i.
  std::span<const StochasticMatrix> projections(std::size_t block) const { return projections_.at(block); }

  // P-bar(w)^(S_j), using the commutation with averaging.
  StochasticMatrix block_average(std::size_t block, const SimplexWeights& w) const {
    check(w);
    const auto& pj = projections_.at(block);
    return weighted_sum(pj, w.values(), pj.front().pi());
  }

  // Q*(w) = tensor_j P-bar(w)^(S_j).
  StochasticMatrix factorized_average(const SimplexWeights& w) const {
    std::vector<BlockFactor> factors;
    for (std::size_t j = 0; j < partition_.size(); ++j) factors.push_back({partition_[j], block_average(j, w)});
    return tensor_product(factors, family_.space());
  }

  // D^pi(P_i || Q*(w)) for every member, including zero-weight ones.
  std::vector<ExtendedReal> divergences(const SimplexWeights& w) const {
    const auto q = factorized_average(w);
    std::vector<ExtendedReal> out;
    out.reserve(n());
    for (const auto& p : family_.members()) out.push_back(kl_divergence(p, q, family_.pi()));
    return out;
  }

  // sum_i w_i D^pi(P_i || Q*(w)); zero-weight members contribute nothing.
  ExtendedReal dual_value(const SimplexWeights& w) const {
    const auto q = factorized_average(w);
    ExtendedReal total = 0.0;
    for (std::size_t i = 0; i < n(); ++i) {
      if (w[i] == 0.0) continue;
      total = total + kl_divergence(family_[i], q, family_.pi()).scaled(w[i]);
    }
    return total;
  }

  // h(w) = -dual_value(w); convex on the simplex.
  double h(const SimplexWeights& w) const {
    const auto v = dual_value(w);
    if (!v.is_finite()) throw NumericalError("dual value is infinite at the requested weights");
    return -v.value();
  }

 private:
  void check(const SimplexWeights& w) const {
    if (w.size() != n()) {
      throw DomainError("weight vector has length " + std::to_string(w.size()) + ", family has " +
                        std::to_string(n()) + " members");
    }
  }

  ChainFamily family_;
  Partition partition_;
  std::vector<std::vector<StochasticMatrix>> projections_;
};

inline StochasticMatrix factorized_average(const DualObjectiveContext& ctx, const SimplexWeights& w) {
  return ctx.factorized_average(w);
}
inline ExtendedReal dual_value(const DualObjectiveContext& ctx, const SimplexWeights& w) {
  return ctx.dual_value(w);
}
inline double h(const DualObjectiveContext& ctx, const SimplexWeights& w) { return ctx.h(w); }

// Left side minus right side of
//
//   sum_i w_i D(P_i || tensor_j Q_j)
//     = sum_i w_i D(P_i || tensor_j P-bar^(S_j)) + sum_j D^{pi^(S_j)}(P-bar^(S_j) || Q_j).
//
// `q_factors[j]` is the kernel on X^(S_j). Returns +-inf when exactly one side
// is infinite.
inline double pythagorean_gap(const ChainFamily& family, const Partition& partition,
                              std::span<const StochasticMatrix> q_factors, const SimplexWeights& w) {
  if (q_factors.size() != partition.size()) throw DomainError("one Q factor per block is required");
  const DualObjectiveContext ctx(family, partition);

  std::vector<BlockFactor> qf;
  for (std::size_t j = 0; j < partition.size(); ++j) qf.push_back({partition[j], q_factors[j]});
  const auto q = tensor_product(qf, family.space());

  ExtendedReal lhs = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    lhs = lhs + kl_divergence(family[i], q, family.pi()).scaled(w[i]);
  }
  ExtendedReal rhs = ctx.dual_value(w);
  for (std::size_t j = 0; j < partition.size(); ++j) {
    const auto pbar = ctx.block_average(j, w);
    rhs = rhs + kl_divergence(pbar, q_factors[j], pbar.pi());
  }
  return difference(lhs, rhs);
}

}  // namespace mmf
