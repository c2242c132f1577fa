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
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mmf/errors.hpp"

namespace mmf {

// Coordinates are 1-based throughout the public API: coordinate 1 is the
// most significant digit of a flat state index.
using Coordinate = int;

// A sorted set of distinct coordinates. The range check against d happens
// where the subset meets a ProductSpace.
class CoordinateSubset {
 public:
  CoordinateSubset() = default;
  CoordinateSubset(std::initializer_list<Coordinate> coords)
      : CoordinateSubset(std::vector<Coordinate>(coords)) {}
  explicit CoordinateSubset(std::vector<Coordinate> coords) : coords_(std::move(coords)) {
    std::sort(coords_.begin(), coords_.end());
    if (std::adjacent_find(coords_.begin(), coords_.end()) != coords_.end()) {
      throw DomainError("coordinate subset has duplicate entries");
    }
    if (!coords_.empty() && coords_.front() < 1) {
      throw DomainError("coordinates are 1-based");
    }
  }

  // Subset of {1..d} whose bit (c-1) is set in `mask`.
  static CoordinateSubset from_mask(std::uint32_t mask, int d) {
    std::vector<Coordinate> c;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) c.push_back(i + 1);
    }
    return CoordinateSubset(std::move(c));
  }

  static CoordinateSubset full(int d) { return from_mask(full_mask(d), d); }
  static std::uint32_t full_mask(int d) { return d >= 32 ? ~0u : (1u << d) - 1u; }

  std::uint32_t mask() const {
    std::uint32_t m = 0;
    for (auto c : coords_) m |= 1u << (c - 1);
    return m;
  }

  bool empty() const { return coords_.empty(); }
  std::size_t size() const { return coords_.size(); }
  bool contains(Coordinate c) const { return std::binary_search(coords_.begin(), coords_.end(), c); }
  Coordinate max() const { return coords_.empty() ? 0 : coords_.back(); }
  std::span<const Coordinate> coords() const { return coords_; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  CoordinateSubset complement(int d) const { return from_mask(full_mask(d) & ~mask(), d); }
  CoordinateSubset with(Coordinate c) const {
    auto v = coords_;
    v.push_back(c);
    return CoordinateSubset(std::move(v));
  }
  CoordinateSubset without(Coordinate c) const {
    auto v = coords_;
    v.erase(std::remove(v.begin(), v.end(), c), v.end());
    return CoordinateSubset(std::move(v));
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(coords_[i]);
    }
    return s + "}";
  }

  friend bool operator==(const CoordinateSubset&, const CoordinateSubset&) = default;

 private:
  std::vector<Coordinate> coords_;
};

// Ordered tuple of pairwise-disjoint coordinate subsets. The support may be a
// proper subset of {1..d}; empty blocks are allowed.
class Partition {
 public:
  Partition() = default;
  Partition(std::initializer_list<CoordinateSubset> blocks)
      : Partition(std::vector<CoordinateSubset>(blocks)) {}
  explicit Partition(std::vector<CoordinateSubset> blocks) : blocks_(std::move(blocks)) {
    std::uint32_t seen = 0;
    for (const auto& b : blocks_) {
      if (seen & b.mask()) throw DomainError("partition blocks overlap");
      seen |= b.mask();
    }
  }

  std::size_t size() const { return blocks_.size(); }
  const CoordinateSubset& operator[](std::size_t j) const { return blocks_[j]; }
  std::span<const CoordinateSubset> blocks() const { return blocks_; }
  auto begin() const { return blocks_.begin(); }
  auto end() const { return blocks_.end(); }

  std::uint32_t support_mask() const {
    std::uint32_t m = 0;
    for (const auto& b : blocks_) m |= b.mask();
    return m;
  }
  CoordinateSubset support(int d) const { return CoordinateSubset::from_mask(support_mask(), d); }
  std::size_t support_size() const {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.size();
    return n;
  }
  bool covers(int d) const { return support_mask() == CoordinateSubset::full_mask(d); }
  Coordinate max_coordinate() const {
    Coordinate m = 0;
    for (const auto& b : blocks_) m = std::max(m, b.max());
    return m;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      if (j) s += ",";
      s += blocks_[j].to_string();
    }
    return s + ")";
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CoordinateSubset> blocks_;
};

// Finite product space X = X^(1) x ... x X^(d) with a lexicographic
// mixed-radix codec, coordinate 1 most significant.
class ProductSpace {
 public:
  ProductSpace() = default;
  explicit ProductSpace(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DomainError("product space needs at least one coordinate");
    if (dims_.size() > 30) throw DomainError("at most 30 coordinates are supported");
    strides_.assign(dims_.size(), 1);
    size_ = 1;
    for (std::size_t i = dims_.size(); i-- > 0;) {
      if (dims_[i] < 2) throw DomainError("every coordinate needs at least 2 values");
      strides_[i] = size_;
      size_ *= dims_[i];
    }
  }

  static ProductSpace binary(int d) { return ProductSpace(std::vector<std::size_t>(d, 2)); }

  int d() const { return static_cast<int>(dims_.size()); }
  std::size_t size() const { return size_; }
  std::span<const std::size_t> dims() const { return dims_; }
  std::size_t dim(Coordinate c) const { return dims_.at(c - 1); }

  std::size_t encode(std::span<const std::size_t> coords) const {
    if (coords.size() != dims_.size()) throw DomainError("coordinate tuple has wrong length");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (coords[i] >= dims_[i]) {
        throw DomainError("coordinate " + std::to_string(i + 1) + " value " +
                          std::to_string(coords[i]) + " out of range");
      }
      idx += coords[i] * strides_[i];
    }
    return idx;
  }
  std::size_t encode(std::initializer_list<std::size_t> coords) const {
    return encode(std::span<const std::size_t>(coords.begin(), coords.size()));
  }

  std::vector<std::size_t> decode(std::size_t index) const {
    if (index >= size_) throw DomainError("flat index out of range");
    std::vector<std::size_t> c(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) c[i] = (index / strides_[i]) % dims_[i];
    return c;
  }

  // Value of coordinate c (1-based) in the state with flat index `index`.
  std::size_t value(std::size_t index, Coordinate c) const {
    return (index / strides_[c - 1]) % dims_[c - 1];
  }

  void check_subset(const CoordinateSubset& s) const {
    if (s.max() > d()) {
      throw DomainError("subset " + s.to_string() + " exceeds d = " + std::to_string(d()));
    }
  }

  // X^(S) with the coordinates of S in increasing order.
  ProductSpace subspace(const CoordinateSubset& s) const {
    check_subset(s);
    if (s.empty()) throw DomainError("subspace of the empty subset");
    std::vector<std::size_t> d;
    for (auto c : s) d.push_back(dims_[c - 1]);
    return ProductSpace(std::move(d));
  }

  // For every flat index of X, the flat index of its restriction to S in
  // subspace(s).
  std::vector<std::size_t> restriction_map(const CoordinateSubset& s) const {
    check_subset(s);
    std::vector<std::size_t> out(size_, 0);
    for (std::size_t x = 0; x < size_; ++x) {
      std::size_t r = 0;
      for (auto c : s) r = r * dims_[c - 1] + value(x, c);
      out[x] = r;
    }
    return out;
  }

  friend bool operator==(const ProductSpace& a, const ProductSpace& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

}  // namespace mmf
