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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/product_space.hpp"

namespace mmf {

inline constexpr double kDistributionTolerance = 1e-12;
inline constexpr double kStochasticTolerance = 1e-10;
inline constexpr double kStationarityTolerance = 1e-10;
inline constexpr double kSimplexTolerance = 1e-9;

// Probability mass with full support on a ProductSpace.
class Distribution {
 public:
  Distribution() = default;
  Distribution(ProductSpace space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.size()) throw DomainError("distribution length does not match space");
    double total = 0.0;
    for (std::size_t x = 0; x < values_.size(); ++x) {
      if (!(values_[x] > 0.0) || !std::isfinite(values_[x])) {
        throw DomainError("distribution entry " + std::to_string(x) + " is not strictly positive");
      }
      total += values_[x];
    }
    if (std::abs(total - 1.0) > kDistributionTolerance) {
      throw DomainError("distribution sums to " + std::to_string(total));
    }
  }

  static Distribution uniform(ProductSpace space) {
    std::vector<double> v(space.size(), 1.0 / static_cast<double>(space.size()));
    return {std::move(space), std::move(v)};
  }

  const ProductSpace& space() const { return space_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t x) const { return values_[x]; }
  std::span<const double> values() const { return values_; }

 private:
  ProductSpace space_;
  std::vector<double> values_;
};

// Dense row-major transition matrix over a ProductSpace, optionally carrying
// its stationary law. Immutable once constructed.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;

  StochasticMatrix(ProductSpace space, std::vector<double> entries,
                   std::optional<Distribution> pi = std::nullopt)
      : space_(std::move(space)), entries_(std::move(entries)), pi_(std::move(pi)) {
    const std::size_t n = space_.size();
    if (entries_.size() != n * n) throw DomainError("matrix entry count does not match space");
    for (std::size_t x = 0; x < n; ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        const double v = entries_[x * n + y];
        if (!(v >= 0.0) || !std::isfinite(v)) {
          throw DomainError("entry (" + std::to_string(x) + "," + std::to_string(y) + ") is negative");
        }
        row += v;
      }
      if (std::abs(row - 1.0) > kStochasticTolerance) {
        throw DomainError("row " + std::to_string(x) + " sums to " + std::to_string(row));
      }
    }
    if (pi_) {
      if (!(pi_->space() == space_)) throw DomainError("stationary law lives on a different space");
      const double r = stationarity_residual(*pi_);
      if (r > kStationarityTolerance) {
        throw DomainError("matrix is not stationary for the attached law (residual " + std::to_string(r) +
                          ")");
      }
    }
  }

  static StochasticMatrix identity(ProductSpace space, std::optional<Distribution> pi = std::nullopt) {
    const std::size_t n = space.size();
    std::vector<double> e(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x) e[x * n + x] = 1.0;
    return {std::move(space), std::move(e), std::move(pi)};
  }

  const ProductSpace& space() const { return space_; }
  std::size_t size() const { return space_.size(); }
  double operator()(std::size_t x, std::size_t y) const { return entries_[x * size() + y]; }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(entries_).subspan(x * size(), size());
  }
  std::span<const double> entries() const { return entries_; }

  bool has_pi() const { return pi_.has_value(); }
  const Distribution& pi() const {
    if (!pi_) throw DomainError("matrix has no attached stationary law");
    return *pi_;
  }

  // ||pi P - pi||_inf
  double stationarity_residual(const Distribution& pi) const {
    const std::size_t n = size();
    std::vector<double> out(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) out[y] += pi[x] * entries_[x * n + y];
    }
    double r = 0.0;
    for (std::size_t y = 0; y < n; ++y) r = std::max(r, std::abs(out[y] - pi[y]));
    return r;
  }

 private:
  ProductSpace space_;
  std::vector<double> entries_;
  std::optional<Distribution> pi_;
};

// Ordered family {P_1, ..., P_n} of transition matrices sharing one
// stationary law.
class ChainFamily {
 public:
  ChainFamily(std::vector<StochasticMatrix> members, Distribution pi)
      : members_(std::move(members)), pi_(std::move(pi)) {
    if (members_.empty()) throw DomainError("chain family must have at least one member");
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (!(members_[i].space() == pi_.space())) {
        throw DomainError("family member " + std::to_string(i + 1) + " lives on a different space");
      }
      const double r = members_[i].stationarity_residual(pi_);
      if (r > kStationarityTolerance) {
        throw DomainError("family member " + std::to_string(i + 1) + " is not stationary (residual " +
                          std::to_string(r) + ")");
      }
      members_[i] = StochasticMatrix(
          members_[i].space(),
          std::vector<double>(members_[i].entries().begin(), members_[i].entries().end()), pi_);
    }
  }

  std::size_t size() const { return members_.size(); }
  const StochasticMatrix& operator[](std::size_t i) const { return members_[i]; }
  std::span<const StochasticMatrix> members() const { return members_; }
  const Distribution& pi() const { return pi_; }
  const ProductSpace& space() const { return pi_.space(); }

 private:
  std::vector<StochasticMatrix> members_;
  Distribution pi_;
};

// A point of the probability simplex S_n.
class SimplexWeights {
 public:
  SimplexWeights() = default;
  explicit SimplexWeights(std::vector<double> w, double tolerance = kSimplexTolerance) : w_(std::move(w)) {
    if (w_.empty()) throw DomainError("weight vector is empty");
    double total = 0.0;
    for (double v : w_) {
      if (!std::isfinite(v) || v < -tolerance) throw DomainError("weights must be nonnegative");
      total += v;
    }
    if (std::abs(total - 1.0) > tolerance) {
      throw DomainError("weights sum to " + std::to_string(total) + ", not 1");
    }
    for (double& v : w_) v = std::max(v, 0.0);
  }

  static SimplexWeights uniform(std::size_t n) { return SimplexWeights(std::vector<double>(n, 1.0 / n)); }
  static SimplexWeights vertex(std::size_t n, std::size_t i) {
    std::vector<double> w(n, 0.0);
    w.at(i) = 1.0;
    return SimplexWeights(std::move(w));
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }
  auto begin() const { return w_.begin(); }
  auto end() const { return w_.end(); }

  friend bool operator==(const SimplexWeights&, const SimplexWeights&) = default;

 private:
  std::vector<double> w_;
};

}  // namespace mmf
