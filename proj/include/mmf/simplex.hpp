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
#include <functional>
#include <span>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/matrix.hpp"

namespace mmf {

// Euclidean projection onto the probability simplex by sorting and
// thresholding: w_i = max(v_i - tau, 0) with tau chosen so the result sums
// to one.
inline SimplexWeights project_to_simplex(std::span<const double> v) {
  if (v.empty()) throw DomainError("cannot project an empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw DomainError("simplex projection of a non-finite vector");
  }
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());

  double running = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    running += u[k];
    const double t = (running - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }

  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::max(v[i] - tau, 0.0);
  return SimplexWeights(std::move(w));
}

inline SimplexWeights project_to_simplex(const std::vector<double>& v) {
  return project_to_simplex(std::span<const double>(v));
}

}  // namespace mmf
