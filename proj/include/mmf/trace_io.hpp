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
#include <string>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "mmf/matrix.hpp"
#include "mmf/subgradient.hpp"
#include "mmf/two_layer.hpp"

namespace mmf {

// Trace files. Numbers use 17 significant digits so reruns can be compared
// byte for byte.
//
// Subgradient CSV: header "iter,h,w1,...,wn", one row per iterate including
// the starting point (iter 0).
//
// Greedy CSV: header "round,f,selection,gain,inserted,w1,...,wn", one row per
// outer round. `f` is f(S_i, w-bar_i) after the round, `selection` the best
// candidate as "j:e" (1-based block) or "none", `weights` the round average.

namespace detail {

inline std::string num(double v) { return fmt::format("{:.17g}", v); }

inline std::string weight_header(std::size_t n) {
  std::string out;
  for (std::size_t i = 1; i <= n; ++i) out += ",w" + std::to_string(i);
  return out;
}

inline std::string weight_cells(const SimplexWeights& w) {
  std::string out;
  for (double v : w) out += "," + num(v);
  return out;
}

inline nlohmann::ordered_json weights_json(const SimplexWeights& w) { return std::vector<double>(w.begin(), w.end()); }

inline std::string selection_label(const std::optional<Selection>& s) {
  return s ? std::to_string(s->block + 1) + ":" + std::to_string(s->coordinate) : "none";
}

}  // namespace detail

inline std::string subgradient_trace_csv(const SubgradientTrace& tr) {
  const std::size_t n = tr.initial().size();
  std::string out = "iter,h" + detail::weight_header(n) + "\n";
  for (std::size_t i = 0; i < tr.weights.size(); ++i) {
    out += std::to_string(i) + "," + detail::num(tr.objective[i]) + detail::weight_cells(tr.weights[i]) + "\n";
  }
  return out;
}

inline std::string greedy_trace_csv(const GreedyTrace& tr) {
  const std::size_t n = tr.average.size();
  std::string out = "round,f,selection,gain,inserted" + detail::weight_header(n) + "\n";
  for (const auto& r : tr.rounds) {
    out += std::to_string(r.round) + "," + detail::num(r.f_after) + "," + detail::selection_label(r.best) + "," +
           (r.best ? detail::num(r.best_gain) : std::string("nan")) + "," + (r.inserted ? "1" : "0") +
           detail::weight_cells(r.average) + "\n";
  }
  return out;
}

// `config` is echoed verbatim under "config".
inline nlohmann::ordered_json subgradient_trace_json(const SubgradientTrace& tr, const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j;
  j["config"] = config;
  j["bound"] = tr.bound ? nlohmann::ordered_json(*tr.bound) : nlohmann::ordered_json(nullptr);
  j["step"] = tr.step;
  j["argmin"] = tr.argmin;
  j["min_objective"] = tr.min_objective;
  j["average"] = detail::weights_json(tr.average);
  j["average_objective"] = tr.average_objective;
  j["final"] = detail::weights_json(tr.final());
  auto& its = j["iterations"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < tr.weights.size(); ++i) {
    its.push_back({{"iter", i}, {"h", tr.objective[i]}, {"w", detail::weights_json(tr.weights[i])}});
  }
  return j;
}

inline nlohmann::ordered_json greedy_trace_json(const GreedyTrace& tr, const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j;
  j["config"] = config;
  j["bound"] = tr.bound ? nlohmann::ordered_json(*tr.bound) : nlohmann::ordered_json(nullptr);
  j["step"] = tr.step;
  j["tuple"] = tr.tuple.to_string();
  j["average"] = detail::weights_json(tr.average);
  j["objective"] = tr.objective;
  auto& rounds = j["rounds"] = nlohmann::ordered_json::array();
  for (const auto& r : tr.rounds) {
    nlohmann::ordered_json jr;
    jr["round"] = r.round;
    jr["selection"] = detail::selection_label(r.best);
    jr["gain"] = r.best ? nlohmann::ordered_json(r.best_gain) : nlohmann::ordered_json(nullptr);
    jr["inserted"] = r.inserted;
    jr["tuple"] = r.tuple.to_string();
    jr["f_before"] = r.f_before;
    jr["f_after"] = r.f_after;
    jr["average"] = detail::weights_json(r.average);
    auto& inner = jr["inner"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < r.inner.size(); ++k) {
      inner.push_back({{"h", r.inner_objective[k]}, {"w", detail::weights_json(r.inner[k])}});
    }
    rounds.push_back(std::move(jr));
  }
  return j;
}

}  // namespace mmf
