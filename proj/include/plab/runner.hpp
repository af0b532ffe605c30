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


/// \file runner.hpp
/// Batch experiments: a config names an experiment kind and its parameters,
/// run_config dispatches it and returns a report. Reports echo the fully
/// resolved config (defaults filled in, referenced files inlined) and are
/// byte-identical for the same config and seed apart from wall_clock_s.
///
/// Config file layout:
///   {"kind": "emx", "seed": 7, "out": "report.json", "params": {...}}
/// File references inside params are resolved against the config's
/// directory.

#ifndef PLAB_RUNNER_HPP
#define PLAB_RUNNER_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "plab/coarse_grain.hpp"
#include "plab/compression.hpp"
#include "plab/emx.hpp"
#include "plab/feasibility.hpp"
#include "plab/io.hpp"
#include "plab/parallel.hpp"
#include "plab/quantum.hpp"
#include "plab/random.hpp"
#include "plab/sdp.hpp"

namespace plab {

inline constexpr const char* kVersion = "0.1.0";

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"emx", "coarse", "compress", "quantum", "feasible-lp", "feasible-sdp"};
  return kinds;
}

struct ExperimentConfig {
  std::string kind;
  io::Json params = io::Json::object();
  std::uint64_t seed = kDefaultSeed;
  /// Report path; empty means the caller handles output.
  std::string out;
  /// Directory that relative file references are resolved against.
  std::filesystem::path base_dir = ".";

  static ExperimentConfig from_json(const io::Json& j, std::filesystem::path base = ".") {
    if (!j.is_object()) throw ValidationError("config: expected an object");
    for (const auto& [key, value] : j.items())
      if (key != "kind" && key != "params" && key != "seed" && key != "out")
        throw ValidationError("config: unknown field '" + key + "'");
    ExperimentConfig c;
    c.kind = io::detail::as_string(io::detail::field(j, "kind", "config"), "config.kind");
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw ValidationError("config.params: expected an object");
      c.params = j["params"];
    }
    if (j.contains("seed")) {
      if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0) throw ValidationError("config.seed: expected a nonnegative integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) c.out = io::detail::as_string(j["out"], "config.out");
    c.base_dir = std::move(base);
    c.validate();
    return c;
  }

  static ExperimentConfig from_file(const std::filesystem::path& path) {
    return from_json(io::read_json_file(path), path.has_parent_path() ? path.parent_path() : ".");
  }

  void validate() const {
    for (const auto& k : experiment_kinds())
      if (k == kind) return;
    throw ValidationError("config.kind: unknown experiment kind '" + kind + "'");
  }
};

struct Sweep {
  std::vector<std::string> columns;
  std::vector<std::vector<io::Json>> rows;
};

struct RunReport {
  std::string kind;
  io::Json config;
  io::Json metrics = io::Json::object();
  std::optional<Sweep> sweep;
  double wall_clock_s = 0;

  /// Report JSON. Floating-point values are rounded to 12 significant digits.
  io::Json to_json(bool with_clock = true) const;
};

namespace detail {

inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline void pin_floats(io::Json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) pin_floats(v);
  }
}

/// Typed access to an experiment's params with defaults. Every value read
/// is recorded in `resolved`, which becomes the report's config echo.
class Params {
 public:
  Params(const ExperimentConfig& cfg, std::initializer_list<const char*> allowed)
      : cfg_(cfg), where_("params") {
    for (const auto& [key, value] : cfg.params.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ValidationError("params: unknown parameter '" + key + "' for kind '" + cfg.kind + "'");
    }
  }

  bool has(const char* key) const { return cfg_.params.contains(key); }

  Rational rational(const char* key, const Rational& def) {
    Rational v = has(key) ? io::rational_from_json(cfg_.params[key], path(key)) : def;
    resolved[key] = to_string(v);
    return v;
  }

  double real(const char* key, double def) {
    double v = has(key) ? io::real_from_json(cfg_.params[key], path(key)) : def;
    resolved[key] = v;
    return v;
  }

  std::size_t count(const char* key, std::size_t def) {
    std::size_t v = def;
    if (has(key)) {
      const auto& j = cfg_.params[key];
      if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ValidationError(path(key) + ": expected a nonnegative integer");
      v = j.get<std::size_t>();
    }
    resolved[key] = v;
    return v;
  }

  std::string text(const char* key, const std::string& def) {
    std::string v = has(key) ? io::detail::as_string(cfg_.params[key], path(key)) : def;
    resolved[key] = v;
    return v;
  }

  bool flag(const char* key, bool def) {
    bool v = def;
    if (has(key)) {
      if (!cfg_.params[key].is_boolean()) throw ValidationError(path(key) + ": expected true or false");
      v = cfg_.params[key].get<bool>();
    }
    resolved[key] = v;
    return v;
  }

  std::vector<std::size_t> counts(const char* key) {
    std::vector<std::size_t> out;
    if (!has(key)) return out;
    const auto& a = cfg_.params[key];
    if (!a.is_array()) throw ValidationError(path(key) + ": expected an array");
    for (const auto& v : a) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ValidationError(path(key) + ": expected nonnegative integers");
      out.push_back(v.get<std::size_t>());
    }
    if (out.empty()) throw ValidationError(path(key) + ": sweep is empty");
    resolved[key] = out;
    return out;
  }

  std::vector<double> reals(const char* key) {
    std::vector<double> out;
    if (!has(key)) return out;
    const auto& a = cfg_.params[key];
    if (!a.is_array()) throw ValidationError(path(key) + ": expected an array");
    for (const auto& v : a) out.push_back(io::real_from_json(v, path(key)));
    if (out.empty()) throw ValidationError(path(key) + ": sweep is empty");
    resolved[key] = out;
    return out;
  }

  /// An inline object, or a string naming a JSON file. The loaded content is
  /// echoed so the report stands alone.
  std::optional<io::Json> object(const char* key) {
    if (!has(key)) return std::nullopt;
    const auto& v = cfg_.params[key];
    io::Json out;
    if (v.is_object())
      out = v;
    else if (v.is_string())
      out = io::read_json_file(file(v.get<std::string>()));
    else
      throw ValidationError(path(key) + ": expected an object or a file path");
    resolved[key] = out;
    return out;
  }

  io::Json required_object(const char* key) {
    auto v = object(key);
    if (!v) throw ValidationError("params: missing required parameter '" + std::string(key) + "' for kind '" + cfg_.kind + "'");
    return *v;
  }

  std::filesystem::path file(const std::string& p) const {
    std::filesystem::path f(p);
    return f.is_absolute() ? f : cfg_.base_dir / f;
  }

  const io::Json& raw(const char* key) const { return cfg_.params[key]; }
  std::string path(const char* key) const { return where_ + "." + key; }

  io::Json resolved = io::Json::object();

 private:
  const ExperimentConfig& cfg_;
  std::string where_;
};

inline std::size_t default_d(const Rational& eps, const Rational& delta) {
  if (eps <= 0 || eps >= 1) throw ValidationError("params.epsilon: must lie in (0,1)");
  if (delta <= 0 || delta >= 1) throw ValidationError("params.delta: must lie in (0,1)");
  return sample_complexity(to_double(eps), to_double(delta));
}

// emx ----------------------------------------------------------------------

template <class Weight>
RunReport run_emx_typed(const FinSupportDist<std::string, Weight>& p, Params& prm, const ExperimentConfig& cfg) {
  const Rational eps = prm.rational("epsilon", Rational(1, 3));
  const Rational delta = prm.rational("delta", Rational(1, 3));
  const auto d = prm.count("d", default_d(eps, delta));
  const auto trials = prm.count("trials", 1000);
  const auto sweep_d = prm.counts("d_values");
  if (trials == 0) throw ValidationError("params.trials: must be >= 1");

  std::vector<std::string> order = p.support();
  if (prm.has("domain")) {
    const auto& a = prm.raw("domain");
    if (!a.is_array()) throw ValidationError("params.domain: expected an array of labels");
    order.clear();
    for (const auto& v : a) order.push_back(io::detail::as_string(v, "params.domain"));
    prm.resolved["domain"] = order;
  }
  IndexedDomain<std::string> dom;
  try {
    dom = IndexedDomain<std::string>(order);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("params.domain: ") + e.what());
  }
  for (const auto& x : p.support())
    if (!dom.contains(x)) throw ValidationError("params.domain: support label '" + x + "' missing");

  Weight w_eps;
  if constexpr (std::is_same_v<Weight, Rational>)
    w_eps = eps;
  else
    w_eps = to_double(eps);
  auto learn = [&](const SampleSeq<std::string>& s) { return quantile_learn(s, dom); };
  auto run = [&](std::size_t dd) {
    if (dd == 0) throw ValidationError("params.d: must be >= 1");
    return verify_guarantee(learn, dom, p, w_eps, to_double(delta), dd, trials, cfg.seed);
  };

  const auto r = run(d);
  RunReport rep;
  rep.metrics = {{"epsilon", r.epsilon},
                 {"delta", r.delta},
                 {"d", r.d},
                 {"trials", r.trials},
                 {"seed", r.seed},
                 {"successes", r.successes},
                 {"empirical_rate", r.empirical_rate},
                 {"ci_halfwidth", r.ci_halfwidth},
                 {"bound", r.bound},
                 {"meets_bound", r.meets_bound()},
                 {"sample_complexity", default_d(eps, delta)}};
  if (!sweep_d.empty()) {
    Sweep s{{"d", "empirical_rate", "bound"}, {}};
    for (auto dd : sweep_d) {
      const auto rr = run(dd);
      s.rows.push_back({dd, rr.empirical_rate, rr.bound});
    }
    rep.sweep = std::move(s);
  }
  return rep;
}

inline RunReport run_emx(const ExperimentConfig& cfg) {
  Params prm(cfg, {"dist", "epsilon", "delta", "d", "trials", "d_values", "domain"});
  auto dist = io::dist_from_json(prm.required_object("dist"), "params.dist");
  RunReport rep = std::visit([&](const auto& p) { return run_emx_typed(p, prm, cfg); }, dist);
  rep.config = prm.resolved;
  return rep;
}

// coarse -------------------------------------------------------------------

struct CoarseOutcome {
  std::size_t successes = 0;
  std::size_t identity_violations = 0;
};

/// Monte Carlo over coarse_learn; also checks P(pi^{-1}(F)) == (pi_#P)(F)
/// exactly for every learned F.
template <class Map>
CoarseOutcome coarse_episodes(const FinSupportDist<typename Map::input_type>& p, const Map& pi,
                              const Rational& eps, const Rational& delta, std::size_t d, std::size_t trials,
                              std::uint64_t seed) {
  const auto q = pushforward(p, pi);
  const Rational need = opt_value(p) - eps;
  std::vector<unsigned char> ok(trials, 0), bad(trials, 0);
  parallel_for(trials, [&](std::size_t i) {
    const auto h = coarse_learn(draw_sample(p, d, seed, i), pi, to_double(eps), to_double(delta));
    const Rational mx = mass(p, h);
    ok[i] = mx >= need ? 1 : 0;
    bad[i] = mx != mass(q, h.cells(), pi.output_domain()) ? 1 : 0;
  });
  CoarseOutcome out;
  for (std::size_t i = 0; i < trials; ++i) {
    out.successes += ok[i];
    out.identity_violations += bad[i];
  }
  return out;
}

/// k distinct atoms on the 1/4096 grid with random integer weights.
inline FinSupportDist<double> random_atoms(std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > 4096) throw ValidationError("params.atoms: must lie in [1, 4096]");
  CounterRng rng(seed, ~std::uint64_t{0});
  std::set<double> pts;
  while (pts.size() < k) pts.insert(static_cast<double>(rng.below(4096)) / 4096.0);
  std::vector<long long> raw;
  long long total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    raw.push_back(1 + static_cast<long long>(rng.below(100)));
    total += raw.back();
  }
  std::vector<Rational> w;
  for (auto r : raw) w.emplace_back(r, total);
  return FinSupportDist<double>(std::vector<double>(pts.begin(), pts.end()), std::move(w));
}

inline FinSupportDist<double> points_dist(const io::Json& j) {
  auto v = io::dist_from_json(j, "params.dist");
  const auto* exact = std::get_if<io::LabelDist>(&v);
  if (exact == nullptr) throw ValidationError("params.dist: coarse-graining needs exact weights");
  std::vector<double> pts;
  for (const auto& label : exact->support()) {
    try {
      pts.push_back(to_double(parse_rational(label)));
    } catch (const std::invalid_argument&) {
      throw ValidationError("params.dist: label '" + label + "' is not a point in [0,1]");
    }
  }
  try {
    return FinSupportDist<double>(std::move(pts), exact->weights());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("params.dist: ") + e.what());
  }
}

inline RunReport run_coarse(const ExperimentConfig& cfg) {
  Params prm(cfg, {"dist", "atoms", "map", "bits", "epsilon", "delta", "d", "trials", "bits_values"});
  const Rational eps = prm.rational("epsilon", Rational(1, 3));
  const Rational delta = prm.rational("delta", Rational(1, 3));
  const auto d = prm.count("d", default_d(eps, delta));
  const auto trials = prm.count("trials", 1000);
  if (trials == 0) throw ValidationError("params.trials: must be >= 1");
  if (d < default_d(eps, delta))
    throw ValidationError("params.d: below sample_complexity(epsilon, delta) = " + std::to_string(default_d(eps, delta)));

  io::Json map_j = {{"kind", "uniform_bins"}, {"bits", 8}};
  if (prm.has("map") && prm.has("bits")) throw ValidationError("params: give either 'map' or 'bits', not both");
  if (prm.has("map")) map_j = *prm.object("map");
  if (prm.has("bits")) map_j = {{"kind", "uniform_bins"}, {"bits", prm.count("bits", 8)}};
  prm.resolved["map"] = map_j;
  const auto map = io::map_from_json(map_j, "params.map");
  const auto bits_values = prm.counts("bits_values");

  RunReport rep;
  auto finish = [&](const CoarseOutcome& o, std::size_t cells) {
    const double rate = static_cast<double>(o.successes) / static_cast<double>(trials);
    const double bound = quantile_bound(to_double(eps), d);
    rep.metrics = {{"epsilon", to_double(eps)},
                   {"delta", to_double(delta)},
                   {"d", d},
                   {"trials", trials},
                   {"seed", cfg.seed},
                   {"cells", cells},
                   {"successes", o.successes},
                   {"empirical_rate", rate},
                   {"ci_halfwidth", three_sigma(bound, trials)},
                   {"bound", bound},
                   {"meets_bound", rate >= bound - three_sigma(bound, trials)},
                   {"identity_violations", o.identity_violations}};
  };

  if (const auto* table = std::get_if<TableMap>(&map)) {
    if (!bits_values.empty()) throw ValidationError("params.bits_values: needs a uniform_bins map");
    auto v = io::dist_from_json(prm.required_object("dist"), "params.dist");
    const auto* p = std::get_if<io::LabelDist>(&v);
    if (p == nullptr) throw ValidationError("params.dist: coarse-graining needs exact weights");
    try {
      finish(coarse_episodes(*p, *table, eps, delta, d, trials, cfg.seed), table->output_domain().size());
    } catch (const std::domain_error& e) {
      throw ValidationError(std::string("params.dist: ") + e.what());
    }
  } else {
    const auto& bins = std::get<UniformBins>(map);
    if (prm.has("dist") == prm.has("atoms")) throw ValidationError("params: give exactly one of 'dist' or 'atoms'");
    const auto p = prm.has("dist") ? points_dist(*prm.object("dist")) : random_atoms(prm.count("atoms", 10), cfg.seed);
    auto one = [&](const UniformBins& pi) {
      try {
        return coarse_episodes(p, pi, eps, delta, d, trials, cfg.seed);
      } catch (const std::domain_error& e) {
        throw ValidationError(std::string("params.dist: ") + e.what());
      }
    };
    finish(one(bins), bins.output_domain().size());
    if (!bits_values.empty()) {
      Sweep s{{"bits", "empirical_rate"}, {}};
      for (auto b : bits_values) {
        if (b > UniformBins::kMaxBits) throw ValidationError("params.bits_values: at most 52 bits");
        const auto o = one(UniformBins(static_cast<unsigned>(b)));
        s.rows.push_back({b, static_cast<double>(o.successes) / static_cast<double>(trials)});
      }
      rep.sweep = std::move(s);
    }
  }
  rep.config = prm.resolved;
  return rep;
}

// compress -----------------------------------------------------------------

inline IndexedDomain<std::string> numbered_domain(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("y" + std::to_string(i));
  return IndexedDomain<std::string>(std::move(out));
}

inline RunReport run_compress_demo(Params& prm, const ExperimentConfig& cfg) {
  const auto scheme_name = prm.text("scheme", "learner");
  const auto n = prm.count("domain_size", 12);
  if (n == 0) throw ValidationError("params.domain_size: must be >= 1");
  const auto dom = numbered_domain(n);
  auto learn = [dom](const SampleSeq<std::string>& s) { return quantile_learn(s, dom); };

  CompressionScheme<std::string> scheme;
  if (scheme_name == "segment") {
    scheme = initial_segment_scheme<std::string>(dom);
  } else if (scheme_name == "learner") {
    const auto d = prm.count("d", 3);
    if (d == 0 || d > 6) throw ValidationError("params.d: must lie in [1, 6]");
    scheme = learner_to_compression<std::string>(learn, d, dom);
  } else {
    throw ValidationError("params.scheme: expected 'segment' or 'learner'");
  }

  CounterRng rng(cfg.seed);
  std::vector<std::string> tuple;
  if (prm.has("tuple")) {
    const auto& a = prm.raw("tuple");
    if (!a.is_array()) throw ValidationError("params.tuple: expected an array of labels");
    for (const auto& v : a) {
      auto x = io::detail::as_string(v, "params.tuple");
      if (!dom.contains(x)) throw ValidationError("params.tuple: '" + x + "' is not in y1..y" + std::to_string(n));
      tuple.push_back(std::move(x));
    }
    if (tuple.size() != scheme.m_in)
      throw ValidationError("params.tuple: scheme expects " + std::to_string(scheme.m_in) + " points");
  } else {
    for (std::size_t i = 0; i < scheme.m_in; ++i) tuple.push_back(dom.at_index(1 + rng.below(n)));
  }
  prm.resolved["tuple"] = tuple;

  const auto pos = find_covering_subtuple(scheme, std::span<const std::string>(tuple), dom);
  RunReport rep;
  rep.metrics["m_in"] = scheme.m_in;
  rep.metrics["m_out"] = scheme.m_out;
  rep.metrics["input"] = tuple;
  rep.metrics["covers"] = pos.has_value();
  if (pos) {
    auto kept = plab::detail::pick(std::span<const std::string>(tuple), *pos);
    const auto h = scheme.reconstruct(std::span<const std::string>(kept));
    std::vector<std::string> rec;
    for (auto i : h.index_description(dom)) rec.push_back(dom.at_index(i));
    rep.metrics["kept_positions"] = *pos;
    rep.metrics["kept"] = kept;
    rep.metrics["reconstructed"] = rec;
  }

  // Optional batch of random instances, each checked exhaustively.
  const auto instances = prm.count("instances", 0);
  std::size_t failures = 0;
  for (std::size_t k = 0; k < instances; ++k) {
    std::vector<std::string> t;
    for (std::size_t i = 0; i < scheme.m_in; ++i) t.push_back(dom.at_index(1 + rng.below(n)));
    failures += find_covering_subtuple(scheme, std::span<const std::string>(t), dom) ? 0 : 1;
  }
  rep.metrics["instances"] = instances;
  rep.metrics["coverage_failures"] = failures;
  return rep;
}

inline RunReport run_compress_lemma1(Params& prm, const ExperimentConfig& cfg) {
  const auto n_dom = prm.count("domain_size", 20);
  if (n_dom == 0) throw ValidationError("params.domain_size: must be >= 1");
  const Rational eps = prm.rational("epsilon", Rational(1, 3));
  const Rational delta = prm.rational("delta", Rational(1, 3));
  const auto trials = prm.count("trials", 2000);
  if (trials == 0) throw ValidationError("params.trials: must be >= 1");
  const auto req = required_n(1);
  const auto n = prm.count("n", req);
  if (n < 2) throw ValidationError("params.n: must be >= m + 1 = 2");
  const auto n_values = prm.counts("n_values");

  const auto dom = numbered_domain(n_dom);
  const auto scheme = initial_segment_scheme<std::string>(dom);
  const auto p = FinSupportDist<std::string>::uniform(dom.labels());
  const Rational need = opt_value(p) - eps;
  auto rate_at = [&](std::size_t nn) {
    if (nn < 2) throw ValidationError("params.n_values: entries must be >= 2");
    std::vector<unsigned char> ok(trials, 0);
    parallel_for(trials, [&](std::size_t i) {
      const auto h = compression_learner(scheme, nn, draw_sample(p, nn, cfg.seed, i), dom);
      ok[i] = mass(p, h, dom) >= need ? 1 : 0;
    });
    std::size_t s = 0;
    for (auto v : ok) s += v;
    return std::pair{s, static_cast<double>(s) / static_cast<double>(trials)};
  };

  const double target = 1 - to_double(delta);
  const auto [succ, rate] = rate_at(n);
  RunReport rep;
  rep.metrics = {{"m", 1},
                 {"required_n", req},
                 {"n", n},
                 {"epsilon", to_double(eps)},
                 {"delta", to_double(delta)},
                 {"trials", trials},
                 {"seed", cfg.seed},
                 {"successes", succ},
                 {"empirical_rate", rate},
                 {"ci_halfwidth", three_sigma(target, trials)},
                 {"target", target},
                 {"meets_target", rate >= target - three_sigma(target, trials)}};
  if (!n_values.empty()) {
    Sweep s{{"n", "empirical_rate"}, {}};
    io::Json threshold = nullptr;
    for (auto nn : n_values) {
      const double r = rate_at(nn).second;
      s.rows.push_back({nn, r});
      if (threshold.is_null() && r >= target) threshold = nn;
    }
    // Smallest swept n whose point estimate reaches 1 - delta.
    rep.metrics["empirical_threshold"] = threshold;
    rep.sweep = std::move(s);
  }
  return rep;
}

inline RunReport run_compress(const ExperimentConfig& cfg) {
  Params prm(cfg, {"mode", "scheme", "d", "domain_size", "tuple", "instances", "epsilon", "delta", "trials", "n",
                   "n_values"});
  const auto mode = prm.text("mode", "demo");
  RunReport rep;
  if (mode == "demo")
    rep = run_compress_demo(prm, cfg);
  else if (mode == "lemma1")
    rep = run_compress_lemma1(prm, cfg);
  else
    throw ValidationError("params.mode: expected 'demo' or 'lemma1'");
  rep.config = prm.resolved;
  return rep;
}

// quantum ------------------------------------------------------------------

inline RunReport run_quantum(const ExperimentConfig& cfg) {
  Params prm(cfg, {"task", "gamma", "copies", "delta", "gammas"});
  if (prm.text("task", "discriminate") != "discriminate") throw ValidationError("params.task: expected 'discriminate'");
  if (!prm.has("gamma")) throw ValidationError("params: missing required parameter 'gamma' for kind 'quantum'");
  const double gamma = prm.real("gamma", 0);
  const auto copies = prm.count("copies", 1);
  const double delta = prm.real("delta", 0.05);
  const auto gammas = prm.reals("gammas");
  if (!(gamma >= 0 && gamma <= 1)) throw ValidationError("params.gamma: must lie in [0,1]");
  if (copies == 0) throw ValidationError("params.copies: must be >= 1");

  const auto cap = dim_cap_from_env();
  const auto [rho0, rho1] = qubit_pair_with_overlap(gamma);
  const auto h = helstrom_povm(rho0, rho1, copies, cap);
  RunReport rep;
  rep.metrics = {{"gamma", gamma},
                 {"copies", copies},
                 {"trace_distance", h.trace_norm},
                 {"formula", pure_distance_formula(gamma, copies)},
                 {"bound", h.bound},
                 {"achieved", h.success_sum},
                 {"error0", h.error0},
                 {"error1", h.error1},
                 {"delta_min", delta_min(gamma, copies)}};
  auto dmin = [&](double g) -> io::Json {
    if (g <= 0 || g >= 1 || !(delta > 0 && delta < 0.5)) return nullptr;
    return d_min(g, delta);
  };
  rep.metrics["d_min"] = dmin(gamma);
  if (!gammas.empty()) {
    Sweep s{{"gamma", "delta_min", "d_min"}, {}};
    for (double g : gammas) {
      if (!(g >= 0 && g <= 1)) throw ValidationError("params.gammas: entries must lie in [0,1]");
      s.rows.push_back({g, delta_min(g, copies), dmin(g)});
    }
    rep.sweep = std::move(s);
  }
  rep.config = prm.resolved;
  return rep;
}

// feasible -----------------------------------------------------------------

inline RunReport run_feasible_lp(const ExperimentConfig& cfg) {
  Params prm(cfg, {"task", "polytope", "epsilon", "delta"});
  const auto task = io::task_from_json(prm.required_object("task"), "params.task");
  io::Json poly_j = {{"builtin", "simplex"}};
  if (auto p = prm.object("polytope")) poly_j = *p;
  prm.resolved["polytope"] = poly_j;
  const auto poly = io::polytope_from_json(poly_j, task, "params.polytope");
  const Rational eps = prm.rational("epsilon", Rational(1, 3));
  const Rational delta = prm.rational("delta", Rational(1, 3));
  if (eps < 0) throw ValidationError("params.epsilon: must be >= 0");
  if (delta < 0 || delta > 1) throw ValidationError("params.delta: must lie in [0,1]");
  const auto pl = build_pl_constraints(task, eps, delta);
  const auto r = lp_feasible(poly, pl);
  RunReport rep;
  rep.metrics = io::lp_verdict_to_json(r, poly);
  rep.metrics["constraints"] = poly.rows.size() + pl.size();
  rep.config = prm.resolved;
  return rep;
}

inline RunReport run_feasible_sdp(const ExperimentConfig& cfg) {
  Params prm(cfg, {"states", "task", "copies", "epsilon", "delta", "threshold"});
  const auto task = io::task_from_json(prm.required_object("task"), "params.task");
  if (!prm.has("states")) throw ValidationError("params: missing required parameter 'states' for kind 'feasible-sdp'");
  std::vector<DensityMatrix> states;
  const auto& sv = prm.raw("states");
  io::Json echo = io::Json::array();
  if (sv.is_string()) {
    const auto dir = prm.file(sv.get<std::string>());
    for (const auto& t : task.thetas) {
      const auto path = dir / (t + ".json");
      echo.push_back(io::read_json_file(path));
      states.push_back(io::state_from_json(echo.back(), path.string()));
    }
  } else if (sv.is_array()) {
    if (sv.size() != task.thetas.size()) throw ValidationError("params.states: need one state per theta");
    for (std::size_t i = 0; i < sv.size(); ++i) {
      echo.push_back(sv[i]);
      states.push_back(io::state_from_json(sv[i], "params.states[" + std::to_string(i) + "]"));
    }
  } else {
    throw ValidationError("params.states: expected a directory path or an array of states");
  }
  prm.resolved["states"] = echo;
  const auto copies = prm.count("copies", 1);
  if (copies == 0) throw ValidationError("params.copies: must be >= 1");
  const Rational eps = prm.rational("epsilon", Rational(1, 3));
  const double delta = prm.real("delta", 1.0 / 3);
  if (eps < 0) throw ValidationError("params.epsilon: must be >= 0");
  if (!(delta >= 0 && delta <= 1)) throw ValidationError("params.delta: must lie in [0,1]");
  const bool threshold = prm.flag("threshold", false);
  for (const auto& s : states)
    if (s.dim() != states.front().dim()) throw ValidationError("params.states: states differ in dimension");

  SdpOptions opt;
  opt.dim_cap = dim_cap_from_env();
  const auto r = sdp_feasible(states, task, eps, delta, copies, opt);
  RunReport rep;
  rep.metrics = io::sdp_verdict_to_json(r);
  if (threshold) rep.metrics["delta_threshold"] = sdp_delta_threshold(states, task, eps, copies, 1e-4, 0.0, 1.0, opt);
  rep.config = prm.resolved;
  return rep;
}

}  // namespace detail

inline io::Json RunReport::to_json(bool with_clock) const {
  io::Json j;
  j["kind"] = kind;
  j["version"] = kVersion;
  j["config"] = config;
  for (const auto& [k, v] : metrics.items()) j[k] = v;
  if (sweep) {
    j["sweep"]["columns"] = sweep->columns;
    j["sweep"]["rows"] = io::Json::array();
    for (const auto& row : sweep->rows) j["sweep"]["rows"].push_back(row);
  }
  if (with_clock) j["wall_clock_s"] = wall_clock_s;
  detail::pin_floats(j);
  return j;
}

/// Runs the experiment and, when cfg.out is set, writes the report there.
inline RunReport run_config(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  if (cfg.kind == "emx") rep = detail::run_emx(cfg);
  else if (cfg.kind == "coarse") rep = detail::run_coarse(cfg);
  else if (cfg.kind == "compress") rep = detail::run_compress(cfg);
  else if (cfg.kind == "quantum") rep = detail::run_quantum(cfg);
  else if (cfg.kind == "feasible-lp") rep = detail::run_feasible_lp(cfg);
  else rep = detail::run_feasible_sdp(cfg);
  rep.kind = cfg.kind;
  rep.config = io::Json{{"kind", cfg.kind}, {"seed", cfg.seed}, {"params", rep.config}};
  rep.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!cfg.out.empty()) {
    std::filesystem::path out(cfg.out);
    if (out.is_relative()) out = cfg.base_dir / out;
    io::write_atomic(out, rep.to_json().dump(2) + "\n");
  }
  return rep;
}

/// CSV with one row per sweep point; the header is the sweep's column names.
inline std::string emit_table(const RunReport& report) {
  if (!report.sweep) throw ValidationError("emit_table: report has no sweep");
  if (report.sweep->rows.empty()) throw ValidationError("emit_table: sweep is empty");
  std::ostringstream out;
  const auto& cols = report.sweep->columns;
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& row : report.sweep->rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      io::Json v = row[i];
      detail::pin_floats(v);
      out << (i ? "," : "") << (v.is_null() ? std::string() : v.dump());
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace plab

#endif  // PLAB_RUNNER_HPP
