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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmf/errors.hpp"
#include "mmf/markov_core.hpp"
#include "mmf/matrix.hpp"
#include "mmf/product_space.hpp"

namespace mmf {

struct CurieWeissParams {
  int d = 5;
  double temperature = 10.0;
  double field = 1.0;
  std::size_t max_states = std::size_t{1} << 12;
};

struct ModelChain {
  StochasticMatrix matrix;  // carries `pi`
  Distribution pi;
};

// H(x) = -sum_i sum_j 2^{-|j-i|} x^i x^j - h sum_i x^i over spins in {-1,+1};
// bit 0 of a coordinate encodes -1. Self-terms i = j are kept.
inline double curie_weiss_hamiltonian(const ProductSpace& space, std::size_t x, double field) {
  const int d = space.d();
  std::vector<double> s(d);
  for (int i = 0; i < d; ++i) s[i] = space.value(x, i + 1) == 0 ? -1.0 : 1.0;
  double e = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) e -= std::ldexp(1.0, -std::abs(j - i)) * s[i] * s[j];
  }
  for (int i = 0; i < d; ++i) e -= field * s[i];
  return e;
}

// Glauber dynamics with a uniform single-spin-flip proposal and Metropolis
// acceptance exp(-(H(y) - H(x))_+ / T), targeting the Gibbs law exp(-H/T)/Z.
inline ModelChain curie_weiss_chain(const CurieWeissParams& p) {
  if (p.d < 1) throw DomainError("Curie-Weiss model needs d >= 1");
  if (!(p.temperature > 0.0)) throw DomainError("temperature must be positive");
  if (p.d >= 31 || (std::size_t{1} << p.d) > p.max_states) {
    throw DomainError("2^d = 2^" + std::to_string(p.d) + " states exceeds the cap of " +
                      std::to_string(p.max_states));
  }
  const auto space = ProductSpace::binary(p.d);
  const std::size_t n = space.size();

  std::vector<double> energy(n);
  double max_abs = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    energy[x] = curie_weiss_hamiltonian(space, x, p.field);
    max_abs = std::max(max_abs, std::abs(energy[x]));
  }
  if (max_abs / p.temperature > 700.0) throw NumericalError("temperature too low for direct exponentiation");

  // log-sum-exp for Z
  double top = -std::numeric_limits<double>::infinity();
  for (double e : energy) top = std::max(top, -e / p.temperature);
  double z = 0.0;
  for (double e : energy) z += std::exp(-e / p.temperature - top);
  std::vector<double> pi(n);
  for (std::size_t x = 0; x < n; ++x) pi[x] = std::exp(-energy[x] / p.temperature - top) / z;
  Distribution law(space, std::move(pi));

  const double propose = 1.0 / static_cast<double>(p.d);
  std::vector<double> e(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double off = 0.0;
    for (int c = 1; c <= p.d; ++c) {
      // flipping coordinate c toggles one mixed-radix digit
      const std::size_t stride = std::size_t{1} << (p.d - c);
      const std::size_t y = x ^ stride;
      const double v = propose * std::exp(-std::max(energy[y] - energy[x], 0.0) / p.temperature);
      e[x * n + y] = v;
      off += v;
    }
    e[x * n + x] = 1.0 - off;
  }

  for (std::size_t x = 0; x < n; ++x) {
    for (int c = 1; c <= p.d; ++c) {
      const std::size_t y = x ^ (std::size_t{1} << (p.d - c));
      if (std::abs(law[x] * e[x * n + y] - law[y] * e[y * n + x]) > 1e-10) {
        throw NumericalError("Glauber kernel is not reversible for the Gibbs law");
      }
    }
  }
  StochasticMatrix m(space, std::move(e), law);
  return {std::move(m), std::move(law)};
}

// One member of a family built from a base kernel: P^k or a I + (1 - a) P.
struct Transform {
  enum class Kind { power, lazy };
  Kind kind = Kind::power;
  int power = 1;
  double laziness = 0.0;

  static Transform pow(int k) { return {Kind::power, k, 0.0}; }
  static Transform lazy(double a) { return {Kind::lazy, 1, a}; }

  // "power:k" or "lazy:a"
  static Transform parse(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw DomainError("transform '" + s + "' is not of the form kind:value");
    const auto kind = s.substr(0, colon);
    const auto arg = s.substr(colon + 1);
    try {
      std::size_t used = 0;
      if (kind == "power") {
        const int k = std::stoi(arg, &used);
        if (used != arg.size()) throw DomainError("bad power");
        return pow(k);
      }
      if (kind == "lazy") {
        const double a = std::stod(arg, &used);
        if (used != arg.size()) throw DomainError("bad laziness");
        return lazy(a);
      }
    } catch (const std::logic_error&) {
      throw DomainError("transform '" + s + "' has a malformed argument");
    }
    throw DomainError("unknown transform kind '" + kind + "'");
  }

  std::string to_string() const {
    return kind == Kind::power ? "power:" + std::to_string(power) : "lazy:" + std::to_string(laziness);
  }
};

using FamilySpec = std::vector<Transform>;

inline FamilySpec dyadic_powers(int count) {
  FamilySpec s;
  for (int i = 0; i < count; ++i) s.push_back(Transform::pow(1 << i));
  return s;
}

// P^k by repeated squaring; P^(2^m) is exactly m squarings.
inline StochasticMatrix matrix_power(const StochasticMatrix& p, int k) {
  if (k < 1) throw DomainError("matrix power must be at least 1");
  std::optional<StochasticMatrix> result;
  StochasticMatrix base = p;
  while (true) {
    if (k & 1) result = result ? multiply(*result, base) : base;
    k >>= 1;
    if (!k) break;
    base = multiply(base, base);
  }
  return *result;
}

inline ChainFamily build_family(const StochasticMatrix& p, const FamilySpec& spec) {
  if (spec.empty()) throw DomainError("family spec is empty");
  const auto& pi = p.pi();
  std::vector<StochasticMatrix> members;
  std::map<int, StochasticMatrix> powers;
  for (const auto& t : spec) {
    if (t.kind == Transform::Kind::power) {
      auto it = powers.find(t.power);
      if (it == powers.end()) it = powers.emplace(t.power, matrix_power(p, t.power)).first;
      members.push_back(it->second);
    } else {
      if (!(t.laziness >= 0.0 && t.laziness < 1.0)) throw DomainError("laziness must lie in [0, 1)");
      const auto id = StochasticMatrix::identity(p.space(), pi);
      const std::vector<StochasticMatrix> pair{id, p};
      const std::vector<double> w{t.laziness, 1.0 - t.laziness};
      members.push_back(weighted_sum(pair, w, pi));
    }
  }
  return ChainFamily(std::move(members), pi);
}

}  // namespace mmf
