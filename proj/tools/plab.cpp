// Copyright 2026 The plab Authors.
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


// plab: command-line front end for the experiment runner.
//
//   plab run CONFIG
//   plab emx --epsilon E --delta D --dist FILE --trials N --seed S --out R.json
//   plab coarse --bits L ...
//   plab compress --mode demo|lemma1 ...
//   plab quantum discriminate --gamma G --copies D
//   plab feasible lp --task T.json --polytope P.json --epsilon E --delta D
//   plab feasible sdp --states DIR --task T.json --copies D --epsilon E --delta D
//
// Every subcommand also takes --config FILE; flags override its params.
// Exit status: 0 ok, 1 other failure, 2 usage or input error, 3 resource cap.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plab/runner.hpp"

namespace {

namespace fs = std::filesystem;
using plab::io::Json;

enum class Type { Rational, Real, Count, Text, Path, Counts, Reals, Flag };

struct Option {
  const char* key;
  Type type;
  const char* help;
};

// Parameter values collected from flags, keyed by config key.
struct Overrides {
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
};

Json split_list(const std::string& s, Type type, const std::string& key) {
  Json out = Json::array();
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      if (type == Type::Counts) {
        std::size_t used = 0;
        const auto v = std::stoull(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
      } else {
        out.push_back(plab::to_double(plab::parse_rational(item)));
      }
    } catch (const std::exception&) {
      throw plab::ValidationError("--" + key + ": bad list entry '" + item + "'");
    }
  }
  return out;
}

Json convert(const std::string& raw, Type type, const std::string& key) {
  try {
    switch (type) {
      case Type::Rational: return plab::to_string(plab::parse_rational(raw));
      case Type::Real: return plab::to_double(plab::parse_rational(raw));
      case Type::Count: {
        std::size_t used = 0;
        const auto v = std::stoull(raw, &used);
        if (used != raw.size() || raw.front() == '-') throw std::invalid_argument(raw);
        return v;
      }
      case Type::Text: return raw;
      case Type::Path: return fs::absolute(raw).lexically_normal().string();
      case Type::Counts:
      case Type::Reals: return split_list(raw, type, key);
      case Type::Flag: return raw == "true";
    }
  } catch (const plab::ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw plab::ValidationError("--" + key + ": cannot parse '" + raw + "'");
  }
  return nullptr;
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  for (auto& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

struct Command {
  CLI::App* app = nullptr;
  std::string kind;
  std::vector<Option> options;
  Overrides given;
  std::string config, out, table;
  std::optional<std::uint64_t> seed;
  Json fixed = Json::object();  // params implied by the subcommand itself
};

void add_common(Command& c) {
  c.app->add_option("--config", c.config, "JSON config file; flags override its params");
  c.app->add_option("--seed", c.seed, "random seed");
  c.app->add_option("--out", c.out, "write the report here instead of stdout");
  c.app->add_option("--table", c.table, "write the sweep as CSV here");
  for (const auto& o : c.options) {
    if (o.type == Type::Flag)
      c.app->add_flag_callback(flag_name(o.key), [&c, key = std::string(o.key)] { c.given.flags[key] = true; }, o.help);
    else
      c.app->add_option(flag_name(o.key), c.given.text[o.key], o.help);
  }
}

plab::ExperimentConfig build_config(const Command& c) {
  plab::ExperimentConfig cfg;
  if (!c.config.empty()) {
    cfg = plab::ExperimentConfig::from_file(c.config);
    if (cfg.kind != c.kind)
      throw plab::ValidationError("config kind '" + cfg.kind + "' does not match subcommand '" + c.kind + "'");
  } else {
    cfg.kind = c.kind;
  }
  for (const auto& [k, v] : c.fixed.items()) cfg.params[k] = v;
  for (const auto& o : c.options) {
    if (o.type == Type::Flag) {
      if (c.given.flags.count(o.key)) cfg.params[o.key] = true;
      continue;
    }
    const auto it = c.given.text.find(o.key);
    if (it != c.given.text.end() && !it->second.empty()) cfg.params[o.key] = convert(it->second, o.type, o.key);
  }
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.out = fs::absolute(c.out).string();
  return cfg;
}

int execute(const plab::ExperimentConfig& cfg, const std::string& table) {
  const auto report = plab::run_config(cfg);
  if (cfg.out.empty()) std::cout << report.to_json().dump(2) << "\n";
  if (!table.empty()) plab::io::write_atomic(table, plab::emit_table(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plab: learnability laboratory experiments"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](CLI::App* parent, const char* name, const char* help, std::string kind,
                  std::vector<Option> options) -> Command& {
    auto c = std::make_unique<Command>();
    c->app = parent->add_subcommand(name, help);
    c->kind = std::move(kind);
    c->options = std::move(options);
    commands.push_back(std::move(c));
    return *commands.back();
  };

  // run CONFIG
  std::string run_path, run_out, run_table;
  auto* run = app.add_subcommand("run", "run an experiment config file");
  run->add_option("config", run_path, "config file")->required();
  run->add_option("--out", run_out, "override the report path");
  run->add_option("--table", run_table, "write the sweep as CSV here");

  make(&app, "emx", "quantile learner Monte Carlo against 1-(1-eps)^d", "emx",
       {{"epsilon", Type::Rational, "accuracy"},
        {"delta", Type::Rational, "confidence"},
        {"dist", Type::Path, "distribution file"},
        {"trials", Type::Count, "episodes"},
        {"d", Type::Count, "sample size (default: sample_complexity)"},
        {"d_values", Type::Counts, "comma-separated d sweep"}});
  make(&app, "coarse", "coarse-grained learning through uniform bins", "coarse",
       {{"bits", Type::Count, "bits per uniform bin map"},
        {"map", Type::Path, "map spec file (instead of --bits)"},
        {"dist", Type::Path, "distribution over points in [0,1]"},
        {"atoms", Type::Count, "random atoms instead of --dist"},
        {"epsilon", Type::Rational, "accuracy"},
        {"delta", Type::Rational, "confidence"},
        {"trials", Type::Count, "episodes"},
        {"d", Type::Count, "sample size"},
        {"bits_values", Type::Counts, "comma-separated bits sweep"}});
  make(&app, "compress", "monotone compression demo and learner", "compress",
       {{"mode", Type::Text, "demo or lemma1"},
        {"scheme", Type::Text, "segment or learner (demo)"},
        {"d", Type::Count, "learner sample size (demo, learner scheme)"},
        {"domain_size", Type::Count, "labels y1..yN"},
        {"instances", Type::Count, "random instances to check (demo)"},
        {"epsilon", Type::Rational, "accuracy (lemma1)"},
        {"delta", Type::Rational, "confidence (lemma1)"},
        {"trials", Type::Count, "episodes (lemma1)"},
        {"n", Type::Count, "learner sample size (lemma1)"},
        {"n_values", Type::Counts, "comma-separated n sweep (lemma1)"}});
  auto* quantum = app.add_subcommand("quantum", "quantum discrimination");
  quantum->require_subcommand(1);
  auto& disc = make(quantum, "discriminate", "Helstrom discrimination of two qubit states", "quantum",
                    {{"gamma", Type::Real, "overlap |<psi|phi>|"},
                     {"copies", Type::Count, "number of copies d"},
                     {"delta", Type::Real, "target error for d_min"},
                     {"gammas", Type::Reals, "comma-separated gamma sweep"}});
  disc.fixed["task"] = "discriminate";
  auto* feasible = app.add_subcommand("feasible", "PL feasibility deciders");
  feasible->require_subcommand(1);
  make(feasible, "lp", "exact LP feasibility over a rational polytope", "feasible-lp",
       {{"task", Type::Path, "task file"},
        {"polytope", Type::Path, "polytope file"},
        {"epsilon", Type::Rational, "accuracy"},
        {"delta", Type::Rational, "confidence"}});
  make(feasible, "sdp", "SDP feasibility for quantum d-copy tasks", "feasible-sdp",
       {{"states", Type::Path, "directory of <theta>.json state files"},
        {"task", Type::Path, "task file"},
        {"copies", Type::Count, "number of copies d"},
        {"epsilon", Type::Rational, "accuracy"},
        {"delta", Type::Real, "confidence"},
        {"threshold", Type::Flag, "also bisect for the smallest feasible delta"}});
  for (auto& c : commands) add_common(*c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      auto cfg = plab::ExperimentConfig::from_file(run_path);
      if (!run_out.empty()) cfg.out = fs::absolute(run_out).string();
      return execute(cfg, run_table);
    }
    for (auto& c : commands)
      if (c->app->parsed()) return execute(build_config(*c), c->table);
  } catch (const plab::ResourceError& e) {
    std::cerr << "plab: resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "plab: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "plab: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "plab: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "plab: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
