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

// mmfact: command-line front end for the factorizable-approximation library.
//
//   mmfact run-subgradient --config presets/cw5_subgradient.toml
//   mmfact run-two-layer   --config presets/cw5_two_layer.toml
//   mmfact evaluate        --config presets/cw5_subgradient.toml --weights 1,0,0,0,0
//   mmfact validate        --path chain.json
//
// Flags override the matching config keys. Exit codes: 0 success, 1 invalid
// configuration, 2 file input/output, 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mmf/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> model, path, transforms, base, matrices, partition, ground, b_estimate, initial, weights,
      csv, json;
  std::optional<int> d;
  std::optional<double> temperature, field, step, bound;
  std::optional<std::size_t> iterations, inner, limit, samples;
  std::optional<std::uint64_t> seed;
};

void add_model_options(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config, "TOML config file");
  app->add_option("--model", o.model, "curie-weiss or file");
  app->add_option("--d", o.d, "Curie-Weiss coordinate count");
  app->add_option("--T", o.temperature, "Curie-Weiss temperature");
  app->add_option("--h-field", o.field, "Curie-Weiss external field");
  app->add_option("--path", o.path, "chain file for the file model");
  app->add_option("--family", o.transforms, "comma-separated transforms, e.g. power:1,power:2,lazy:0.5");
  app->add_option("--base", o.base, "file model: matrix the transforms apply to");
  app->add_option("--matrices", o.matrices, "file model: comma-separated member names");
  app->add_option("--b-estimate", o.b_estimate, "rigorous or sampled");
  app->add_option("--bound", o.bound, "explicit B");
  app->add_option("--bound-samples", o.samples, "points used by the sampled B estimate");
  app->add_option("--step", o.step, "explicit step size");
  app->add_option("--seed", o.seed, "seed for the sampled B estimate");
}

void add_output_options(CLI::App* app, Overrides& o) {
  app->add_option("--csv", o.csv, "write the trace as CSV");
  app->add_option("--json", o.json, "write the trace as JSON");
}

template <class T>
void put(nlohmann::ordered_json& tree, const char* section, const char* key, const std::optional<T>& v) {
  if (v) tree[section][key] = *v;
}

void put_list(nlohmann::ordered_json& tree, const char* section, const char* key,
              const std::optional<std::string>& v) {
  if (v) tree[section][key] = *v;  // comma-separated strings are accepted for list keys
}

mmf::ExperimentConfig resolve(const Overrides& o, const char* kind) {
  auto tree = o.config.empty() ? nlohmann::ordered_json::object() : mmf::load_config_file(o.config);
  put(tree, "model", "name", o.model);
  put(tree, "model", "d", o.d);
  put(tree, "model", "temperature", o.temperature);
  put(tree, "model", "field", o.field);
  put(tree, "model", "path", o.path);
  if (o.path && !o.model) tree["model"]["name"] = "file";
  put_list(tree, "family", "transforms", o.transforms);
  put(tree, "family", "base", o.base);
  put_list(tree, "family", "matrices", o.matrices);
  put(tree, "partition", "blocks", o.partition);
  put(tree, "partition", "ground", o.ground);
  put(tree, "algorithm", "iterations", o.iterations);
  put(tree, "algorithm", "inner_iterations", o.inner);
  put(tree, "algorithm", "limit", o.limit);
  put(tree, "algorithm", "step", o.step);
  put(tree, "algorithm", "bound", o.bound);
  put(tree, "algorithm", "b_estimate", o.b_estimate);
  put(tree, "algorithm", "bound_samples", o.samples);
  put(tree, "algorithm", "seed", o.seed);
  put_list(tree, "algorithm", "initial", o.initial);
  put_list(tree, "algorithm", "weights", o.weights);
  put(tree, "output", "csv", o.csv);
  put(tree, "output", "json", o.json);
  auto cfg = mmf::config_from_tree(tree);
  if (cfg.kind && *cfg.kind != kind && std::string(kind) != "evaluate") {
    throw mmf::ConfigError("config is for algorithm \"" + *cfg.kind + "\", not \"" + kind + "\"");
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax factorizable approximation of Markov chain families"};
  app.require_subcommand(1);
  Overrides o;
  std::string validate_path;

  auto* sub = app.add_subcommand("run-subgradient", "projected subgradient descent on h over the simplex");
  add_model_options(sub, o);
  sub->add_option("--partition", o.partition, "coordinate partition, e.g. 1,2|3,5|4");
  sub->add_option("-t,--iterations", o.iterations, "number of iterations t");
  sub->add_option("--initial", o.initial, "comma-separated starting weights (default uniform)");
  add_output_options(sub, o);

  auto* two = app.add_subcommand("run-two-layer", "joint partition and weight search by distorted greedy");
  add_model_options(two, o);
  two->add_option("--ground", o.ground, "ground tuple V, e.g. 1,2|3,5");
  two->add_option("-K,--inner-iterations", o.inner, "inner subgradient steps per round");
  two->add_option("-l,--limit", o.limit, "number of greedy rounds (default |supp V|)");
  add_output_options(two, o);

  auto* eval = app.add_subcommand("evaluate", "h(w), member divergences and slackness residuals at given w");
  add_model_options(eval, o);
  eval->add_option("--partition", o.partition, "coordinate partition, e.g. 1,2|3,5|4");
  eval->add_option("-w,--weights", o.weights, "comma-separated weights");

  auto* val = app.add_subcommand("validate", "load a chain file and check stochasticity and stationarity");
  val->add_option("path", validate_path, "chain file (.json or .csv)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mmf::kExitConfig;
  }

  try {
    if (*sub) return mmf::cmd_run_subgradient(resolve(o, "subgradient"), std::cout);
    if (*two) return mmf::cmd_run_two_layer(resolve(o, "two-layer"), std::cout);
    if (*eval) return mmf::cmd_evaluate(resolve(o, "evaluate"), std::cout);
    return mmf::cmd_validate(validate_path, std::cout);
  } catch (const std::exception& e) {
    return mmf::exit_code_for(e, std::cerr);
  }
}
