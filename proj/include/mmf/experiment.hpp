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
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "mmf/chain_io.hpp"
#include "mmf/errors.hpp"
#include "mmf/info_theory.hpp"
#include "mmf/models.hpp"
#include "mmf/partition_submodular.hpp"
#include "mmf/subgradient.hpp"
#include "mmf/trace_io.hpp"
#include "mmf/two_layer.hpp"

namespace mmf {

// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIo = 2, kExitNumerical = 3 };

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Config files: a TOML subset. Supported: [section] headers, `key = value`
// lines, # comments, and values that are double-quoted strings, numbers,
// true/false, or single-line arrays of those. The result is a JSON object
// {section: {key: value}}; keys before any header land in section "".

namespace detail {

class TomlLine {
 public:
  TomlLine(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  nlohmann::ordered_json value() {
    skip_ws();
    if (at_end()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return string();
    if (c == '[') return array();
    if (s_.substr(pos_, 4) == "true") return pos_ += 4, true;
    if (s_.substr(pos_, 5) == "false") return pos_ += 5, false;
    return number();
  }

  void expect_end() {
    skip_ws();
    if (!at_end() && s_[pos_] != '#') fail("unexpected text after value");
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + what);
  }

  nlohmann::ordered_json string() {
    ++pos_;
    std::string out;
    while (!at_end() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        if (++pos_ >= s_.size()) break;
        const char e = s_[pos_];
        out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
      } else {
        out += s_[pos_];
      }
      ++pos_;
    }
    if (at_end()) fail("unterminated string");
    ++pos_;
    return out;
  }

  nlohmann::ordered_json array() {
    ++pos_;
    auto out = nlohmann::ordered_json::array();
    skip_ws();
    if (!at_end() && s_[pos_] == ']') return ++pos_, out;
    while (true) {
      out.push_back(value());
      skip_ws();
      if (at_end()) fail("unterminated array");
      if (s_[pos_] == ']') return ++pos_, out;
      if (s_[pos_] != ',') fail("expected ',' or ']' in array");
      ++pos_;
      skip_ws();
      if (!at_end() && s_[pos_] == ']') return ++pos_, out;  // trailing comma
    }
  }

  nlohmann::ordered_json number() {
    const std::size_t start = pos_;
    while (!at_end() && std::string_view("+-.0123456789eE_").find(s_[pos_]) != std::string_view::npos) ++pos_;
    std::string tok;
    for (char c : s_.substr(start, pos_ - start)) {
      if (c != '_') tok += c;
    }
    if (tok.empty()) fail("expected a value");
    if (tok.front() == '+') tok.erase(0, 1);
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    if (tok.find_first_of(".eE") == std::string::npos) {
      std::int64_t i = 0;
      const auto [p, ec] = std::from_chars(b, e, i);
      if (ec == std::errc() && p == e) return i;
    }
    double v = 0.0;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail("malformed number '" + tok + "'");
    return v;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline nlohmann::ordered_json parse_config_text(const std::string& text) {
  auto root = nlohmann::ordered_json::object();
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto s = detail::trim(raw);
    if (s.empty() || s.front() == '#') continue;
    if (s.front() == '[') {
      const auto close = s.find(']');
      if (close == std::string_view::npos) throw ConfigError("config line " + std::to_string(line) + ": bad header");
      section = std::string(detail::trim(s.substr(1, close - 1)));
      if (section.empty()) throw ConfigError("config line " + std::to_string(line) + ": empty section name");
      root[section] = nlohmann::ordered_json::object();
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(line) + ": expected key = value");
    const std::string key(detail::trim(s.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line) + ": empty key");
    detail::TomlLine parser(s.substr(eq + 1), line);
    auto v = parser.value();
    parser.expect_end();
    auto& table = root[section];
    if (table.contains(key)) throw ConfigError("config line " + std::to_string(line) + ": duplicate key '" + key + "'");
    table[key] = std::move(v);
  }
  return root;
}

inline nlohmann::ordered_json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChainFileError(ChainFileError::Code::io, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// "1,2|3,5|4" -> ({1,2},{3,5},{4}). Empty blocks are allowed in ground sets
// written as "1,2||4".
inline std::vector<CoordinateSubset> parse_blocks(const std::string& text) {
  std::vector<CoordinateSubset> blocks;
  for (auto part : detail::split(text, '|')) {
    std::vector<Coordinate> coords;
    part = detail::trim(part);
    if (!part.empty()) {
      for (auto tok : detail::split(part, ',')) {
        tok = detail::trim(tok);
        int c = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), c);
        if (ec != std::errc() || p != tok.data() + tok.size()) {
          throw ConfigError("bad coordinate '" + std::string(tok) + "' in '" + text + "'");
        }
        coords.push_back(c);
      }
    }
    try {
      blocks.emplace_back(std::move(coords));
    } catch (const DomainError& e) {
      throw ConfigError("bad block in '" + text + "': " + e.what());
    }
  }
  return blocks;
}

inline std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (auto tok : detail::split(text, ',')) {
    try {
      out.push_back(detail::parse_double(tok));
    } catch (const ChainFileError&) {
      throw ConfigError("bad number '" + std::string(detail::trim(tok)) + "' in '" + text + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ExperimentConfig {
  // model
  std::string model = "curie-weiss";
  CurieWeissParams curie_weiss;
  std::optional<std::filesystem::path> chain_path;
  // family
  std::vector<std::string> transforms;  // empty: five dyadic powers, or every matrix of a file
  std::optional<std::string> base;      // file model: matrix the transforms apply to
  std::vector<std::string> matrices;    // file model without transforms: subset of matrices
  // partitions
  std::optional<std::string> partition;  // "1,2|3,5|4"
  std::optional<std::string> ground;     // two-layer ground tuple V
  // algorithm
  std::optional<std::string> kind;  // subgradient | two-layer | evaluate
  std::size_t iterations = 100;
  std::size_t inner_iterations = 30;
  std::optional<std::size_t> limit;
  std::optional<double> step;
  std::optional<double> bound;
  BoundStrategy strategy = BoundStrategy::rigorous;
  std::size_t bound_samples = 64;
  std::uint64_t seed = 20260101;
  std::optional<std::vector<double>> initial;
  std::optional<std::vector<double>> weights;  // evaluate
  // output
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> json;

  nlohmann::ordered_json source;  // the merged config tree, echoed in JSON traces
};

namespace detail {

inline const nlohmann::ordered_json* lookup(const nlohmann::ordered_json& root, const char* section, const char* key) {
  if (!root.contains(section) || !root.at(section).is_object()) return nullptr;
  const auto& t = root.at(section);
  return t.contains(key) ? &t.at(key) : nullptr;
}

inline std::string where(const char* section, const char* key) { return std::string(section) + "." + key; }

inline std::optional<std::string> get_string(const nlohmann::ordered_json& r, const char* s, const char* k) {
  const auto* v = lookup(r, s, k);
  if (!v) return std::nullopt;
  if (!v->is_string()) throw ConfigError(where(s, k) + " must be a string");
  return v->get<std::string>();
}

inline std::optional<double> get_double(const nlohmann::ordered_json& r, const char* s, const char* k) {
  const auto* v = lookup(r, s, k);
  if (!v) return std::nullopt;
  if (!v->is_number()) throw ConfigError(where(s, k) + " must be a number");
  return v->get<double>();
}

inline std::optional<std::int64_t> get_int(const nlohmann::ordered_json& r, const char* s, const char* k) {
  const auto* v = lookup(r, s, k);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) throw ConfigError(where(s, k) + " must be an integer");
  return v->get<std::int64_t>();
}

inline std::optional<std::size_t> get_count(const nlohmann::ordered_json& r, const char* s, const char* k) {
  const auto v = get_int(r, s, k);
  if (!v) return std::nullopt;
  if (*v < 0) throw ConfigError(where(s, k) + " must be nonnegative");
  return static_cast<std::size_t>(*v);
}

inline std::vector<std::string> get_strings(const nlohmann::ordered_json& r, const char* s, const char* k) {
  const auto* v = lookup(r, s, k);
  if (!v) return {};
  if (v->is_string()) {
    std::vector<std::string> out;
    for (auto t : split(v->get<std::string>(), ',')) out.emplace_back(trim(t));
    return out;
  }
  if (!v->is_array()) throw ConfigError(where(s, k) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : *v) {
    if (!e.is_string()) throw ConfigError(where(s, k) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::optional<std::vector<double>> get_numbers(const nlohmann::ordered_json& r, const char* s, const char* k) {
  const auto* v = lookup(r, s, k);
  if (!v) return std::nullopt;
  if (v->is_string()) return parse_number_list(v->get<std::string>());
  if (!v->is_array()) throw ConfigError(where(s, k) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number()) throw ConfigError(where(s, k) + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace detail

// Builds a validated config from a {section: {key: value}} tree.
inline ExperimentConfig config_from_tree(const nlohmann::ordered_json& root) {
  using namespace detail;
  static const std::map<std::string, std::vector<std::string>> known = {
      {"model", {"name", "d", "temperature", "field", "max_states", "path"}},
      {"family", {"transforms", "base", "matrices"}},
      {"partition", {"blocks", "ground"}},
      {"algorithm",
       {"kind", "iterations", "inner_iterations", "limit", "step", "bound", "b_estimate", "bound_samples", "seed",
        "initial", "weights"}},
      {"output", {"csv", "json"}},
  };
  for (const auto& [section, table] : root.items()) {
    const auto it = known.find(section);
    if (it == known.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, v] : table.items()) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw ConfigError("unknown config key " + section + "." + key);
      }
    }
  }

  ExperimentConfig c;
  c.source = root;
  if (auto v = get_string(root, "model", "name")) c.model = *v;
  if (c.model != "curie-weiss" && c.model != "file") {
    throw ConfigError("model.name must be \"curie-weiss\" or \"file\", got \"" + c.model + "\"");
  }
  if (auto v = get_int(root, "model", "d")) {
    if (*v < 1) throw ConfigError("model.d must be at least 1");
    c.curie_weiss.d = static_cast<int>(*v);
  }
  if (auto v = get_double(root, "model", "temperature")) {
    if (!(*v > 0.0)) throw ConfigError("model.temperature must be positive");
    c.curie_weiss.temperature = *v;
  }
  if (auto v = get_double(root, "model", "field")) c.curie_weiss.field = *v;
  if (auto v = get_count(root, "model", "max_states")) c.curie_weiss.max_states = *v;
  if (auto v = get_string(root, "model", "path")) c.chain_path = *v;
  if (c.model == "file" && !c.chain_path) throw ConfigError("model \"file\" needs model.path");

  c.transforms = get_strings(root, "family", "transforms");
  c.base = get_string(root, "family", "base");
  c.matrices = get_strings(root, "family", "matrices");
  if (c.model == "curie-weiss" && (c.base || !c.matrices.empty())) {
    throw ConfigError("family.base and family.matrices only apply to the file model");
  }

  c.partition = get_string(root, "partition", "blocks");
  c.ground = get_string(root, "partition", "ground");

  c.kind = get_string(root, "algorithm", "kind");
  if (c.kind && *c.kind != "subgradient" && *c.kind != "two-layer" && *c.kind != "evaluate") {
    throw ConfigError("algorithm.kind must be subgradient, two-layer or evaluate");
  }
  if (auto v = get_count(root, "algorithm", "iterations")) c.iterations = *v;
  if (auto v = get_count(root, "algorithm", "inner_iterations")) c.inner_iterations = *v;
  if (auto v = get_count(root, "algorithm", "limit")) c.limit = *v;
  c.step = get_double(root, "algorithm", "step");
  c.bound = get_double(root, "algorithm", "bound");
  if (c.step && !(*c.step > 0.0)) throw ConfigError("algorithm.step must be positive");
  if (c.bound && !(*c.bound >= 0.0)) throw ConfigError("algorithm.bound must be nonnegative");
  if (auto v = get_string(root, "algorithm", "b_estimate")) {
    try {
      c.strategy = parse_bound_strategy(*v);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto v = get_count(root, "algorithm", "bound_samples")) c.bound_samples = *v;
  if (auto v = get_int(root, "algorithm", "seed")) c.seed = static_cast<std::uint64_t>(*v);
  c.initial = get_numbers(root, "algorithm", "initial");
  c.weights = get_numbers(root, "algorithm", "weights");
  if (c.iterations < 1) throw ConfigError("algorithm.iterations must be at least 1");
  if (c.inner_iterations < 1) throw ConfigError("algorithm.inner_iterations must be at least 1");

  if (auto v = get_string(root, "output", "csv")) c.csv = *v;
  if (auto v = get_string(root, "output", "json")) c.json = *v;
  return c;
}

inline ExperimentConfig parse_config(const std::string& text) { return config_from_tree(parse_config_text(text)); }

// ---------------------------------------------------------------------------

struct Experiment {
  ChainFamily family;
  std::vector<std::string> labels;  // one per member
};

inline Experiment build_experiment(const ExperimentConfig& c) {
  std::vector<Transform> spec;
  try {
    for (const auto& t : c.transforms) spec.push_back(Transform::parse(t));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("family.transforms: ") + e.what());
  }

  auto from_base = [&](const StochasticMatrix& p, const std::string& name) {
    const auto s = spec.empty() ? dyadic_powers(5) : spec;
    std::vector<std::string> labels;
    for (const auto& t : s) labels.push_back(name + "|" + t.to_string());
    try {
      return Experiment{build_family(p, s), std::move(labels)};
    } catch (const DomainError& e) {
      throw ConfigError(std::string("family: ") + e.what());
    }
  };

  if (c.model == "curie-weiss") {
    ModelChain m = [&] {
      try {
        return curie_weiss_chain(c.curie_weiss);
      } catch (const DomainError& e) {
        throw ConfigError(std::string("model: ") + e.what());
      }
    }();
    return from_base(m.matrix, "P");
  }

  const auto file = load_chain_file(*c.chain_path);
  if (!spec.empty()) {
    const std::string base = c.base.value_or(file.matrices.front().name);
    try {
      return from_base(file.find(base), base);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  std::vector<StochasticMatrix> members;
  std::vector<std::string> labels;
  if (c.matrices.empty()) {
    for (const auto& m : file.matrices) {
      members.push_back(m.matrix);
      labels.push_back(m.name);
    }
  } else {
    for (const auto& name : c.matrices) {
      try {
        members.push_back(file.find(name));
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      labels.push_back(name);
    }
  }
  return {ChainFamily(std::move(members), file.pi), std::move(labels)};
}

namespace detail {

inline Partition require_partition(const std::optional<std::string>& text, const ProductSpace& space,
                                   const char* key) {
  if (!text) throw ConfigError(std::string("partition.") + key + " is required");
  try {
    Partition p(parse_blocks(*text));
    if (p.max_coordinate() > space.d()) {
      throw ConfigError(std::string("partition.") + key + " uses a coordinate beyond d = " +
                        std::to_string(space.d()));
    }
    return p;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("partition.") + key + ": " + e.what());
  }
}

inline SimplexWeights require_weights(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw ConfigError(std::string(what) + " has " + std::to_string(v.size()) + " entries, family has " +
                      std::to_string(n) + " members");
  }
  try {
    return SimplexWeights(v, kSimplexTolerance);
  } catch (const DomainError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

inline std::string fixed2(double v) {
  auto s = fmt::format("{:.2f}", v);
  return s == "-0.00" ? "0.00" : s;
}

inline std::string weights2(const SimplexWeights& w) {
  std::string out = "(";
  for (std::size_t i = 0; i < w.size(); ++i) out += (i ? ", " : "") + fixed2(w[i]);
  return out + ")";
}

inline void write_outputs(const ExperimentConfig& c, const std::string& csv, const nlohmann::ordered_json& json) {
  if (c.csv) write_text(*c.csv, csv);
  if (c.json) write_text(*c.json, json.dump(2) + "\n");
}

inline std::string show(const ExtendedReal& x) { return x.is_finite() ? fmt::format("{:.6f}", x.value()) : "inf"; }

}  // namespace detail

// Prints the run summary: argmin iterate, running average, start, the first
// vertex and the final iterate, each with its h value.
inline int cmd_run_subgradient(const ExperimentConfig& c, std::ostream& out) {
  const auto ex = build_experiment(c);
  const auto part = detail::require_partition(c.partition, ex.family.space(), "blocks");
  std::optional<DualObjectiveContext> ctx;
  try {
    ctx.emplace(ex.family, part);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("partition.blocks: ") + e.what());
  }
  SubgradientConfig sc;
  sc.iterations = c.iterations;
  sc.step = c.step;
  sc.bound = c.bound;
  sc.strategy = c.strategy;
  sc.bound_samples = c.bound_samples;
  sc.seed = c.seed;
  if (c.initial) sc.initial = detail::require_weights(*c.initial, ctx->n(), "algorithm.initial");

  const auto tr = run_projected_subgradient(*ctx, sc);
  detail::write_outputs(c, subgradient_trace_csv(tr), subgradient_trace_json(tr, c.source));

  const auto vertex = SimplexWeights::vertex(ctx->n(), 0);
  const auto h_vertex = ctx->dual_value(vertex);
  out << "members: ";
  for (std::size_t i = 0; i < ex.labels.size(); ++i) out << (i ? ", " : "") << ex.labels[i];
  out << "\npartition: " << part.to_string() << "\n";
  out << "B = " << (tr.bound ? fmt::format("{:.6g}", *tr.bound) : std::string("n/a"))
      << ", step = " << fmt::format("{:.6g}", tr.step) << ", t = " << c.iterations << "\n";
  out << fmt::format("{:<12} {:>8}  {}\n", "point", "h(w)", "w");
  auto row = [&](const char* name, const std::string& h, const SimplexWeights& w) {
    out << fmt::format("{:<12} {:>8}  {}\n", name, h, detail::weights2(w));
  };
  row("argmin", detail::fixed2(tr.min_objective), tr.best());
  row("average", detail::fixed2(tr.average_objective), tr.average);
  row("initial", detail::fixed2(tr.objective.front()), tr.initial());
  row("vertex1", h_vertex.is_finite() ? detail::fixed2(-h_vertex.value()) : "-inf", vertex);
  row("final", detail::fixed2(tr.objective.back()), tr.final());
  return kExitOk;
}

inline int cmd_run_two_layer(const ExperimentConfig& c, std::ostream& out) {
  const auto ex = build_experiment(c);
  const auto ground = detail::require_partition(c.ground, ex.family.space(), "ground");
  const std::size_t l = c.limit.value_or(ground.support_size());
  std::optional<GreedyContext> ctx;
  try {
    ctx.emplace(ex.family, ground, l);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("two-layer setup: ") + e.what());
  }
  TwoLayerConfig tc;
  tc.inner_iterations = c.inner_iterations;
  tc.step = c.step;
  tc.bound = c.bound;
  tc.strategy = c.strategy;
  tc.bound_samples = c.bound_samples;
  tc.seed = c.seed;

  const auto tr = run_two_layer(*ctx, tc);
  detail::write_outputs(c, greedy_trace_csv(tr), greedy_trace_json(tr, c.source));

  out << "ground: " << ground.to_string() << ", l = " << l << ", K = " << c.inner_iterations << "\n";
  out << "B = " << (tr.bound ? fmt::format("{:.6g}", *tr.bound) : std::string("n/a"))
      << ", step = " << fmt::format("{:.6g}", tr.step) << "\n";
  for (const auto& r : tr.rounds) {
    out << fmt::format("round {}: best {} gain {} {} -> S = {}, f = {}, w = {}\n", r.round,
                       detail::selection_label(r.best), r.best ? fmt::format("{:.4f}", r.best_gain) : "n/a",
                       r.inserted ? "inserted" : "skipped", r.tuple.to_string(), fmt::format("{:.4f}", r.f_after),
                       detail::weights2(r.average));
  }
  out << "final S = " << tr.tuple.to_string() << ", w = " << detail::weights2(tr.average)
      << ", f = " << detail::fixed2(tr.objective) << "\n";
  return kExitOk;
}

inline int cmd_evaluate(const ExperimentConfig& c, std::ostream& out) {
  const auto ex = build_experiment(c);
  const auto part = detail::require_partition(c.partition, ex.family.space(), "blocks");
  std::optional<DualObjectiveContext> ctx;
  try {
    ctx.emplace(ex.family, part);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("partition.blocks: ") + e.what());
  }
  if (!c.weights) throw ConfigError("evaluate needs algorithm.weights");
  const auto w = detail::require_weights(*c.weights, ctx->n(), "algorithm.weights");
  const auto rep = equilibrium_diagnostics(*ctx, w);
  out << "w = " << detail::weights2(w) << "\n";
  out << "h(w) = " << fmt::format("{:.6f}", -rep.dual_value) << " (" << detail::fixed2(-rep.dual_value) << ")\n";
  for (std::size_t i = 0; i < ctx->n(); ++i) {
    out << fmt::format("member {} {}: D = {}, residual = {:.3g}\n", i + 1, ex.labels[i],
                       detail::show(rep.divergences[i]), rep.residuals[i]);
  }
  out << "max D = " << detail::show(rep.max_divergence) << ", max residual = " << fmt::format("{:.3g}", rep.max_residual)
      << ", gap = " << (std::isfinite(rep.gap) ? fmt::format("{:.6g}", rep.gap) : "inf") << "\n";
  return kExitOk;
}

// Loads a chain file and reports the checks it passed.
inline int cmd_validate(const std::filesystem::path& path, std::ostream& out) {
  const auto file = load_chain_file(path);
  out << "dims = (";
  for (std::size_t i = 0; i < file.space.dims().size(); ++i) out << (i ? ", " : "") << file.space.dims()[i];
  out << "), states = " << file.space.size() << "\n";
  for (const auto& m : file.matrices) {
    double worst_row = 0.0;
    for (std::size_t x = 0; x < m.matrix.size(); ++x) {
      double s = 0.0;
      for (std::size_t y = 0; y < m.matrix.size(); ++y) s += m.matrix(x, y);
      worst_row = std::max(worst_row, std::abs(s - 1.0));
    }
    out << fmt::format("{}: row-sum error {:.3g}, stationarity residual {:.3g}, entropy rate {:.6f}\n", m.name,
                       worst_row, m.matrix.stationarity_residual(file.pi), entropy_rate(m.matrix));
  }
  return kExitOk;
}

// Maps an exception from any command to its exit code, printing the message.
inline int exit_code_for(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const ChainFileError*>(&e)) return kExitIo;
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  if (dynamic_cast<const DomainError*>(&e)) return kExitConfig;
  return kExitNumerical;
}

}  // namespace mmf
