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


/// \file io.hpp
/// JSON readers and writers for distributions, coarse-graining maps,
/// quantum states and POVMs, tasks, polytopes and verdicts.
///
/// Schema problems raise ValidationError with the offending path.

#ifndef PLAB_IO_HPP
#define PLAB_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "plab/coarse_grain.hpp"
#include "plab/emx.hpp"
#include "plab/feasibility.hpp"
#include "plab/quantum.hpp"
#include "plab/rational.hpp"
#include "plab/sdp.hpp"

namespace plab::io {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

/// Writes via a sibling temp file and rename, so readers never see a
/// partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing field '" + key + "'");
  return *it;
}

inline const Json& array_field(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_array()) throw ValidationError(where + "." + key + ": expected an array");
  return v;
}

inline std::size_t count_field(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ValidationError(where + "." + key + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

inline std::string as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": expected a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Rational from a JSON string ("1/3", "0.25") or number. Numbers are read
/// from their shortest decimal form, so 0.1 becomes 1/10.
inline Rational rational_from_json(const Json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number()) return parse_rational(v.dump());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(where + ": " + e.what());
  }
  throw ValidationError(where + ": expected a rational string or number");
}

inline double real_from_json(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return to_double(rational_from_json(v, where));
  throw ValidationError(where + ": expected a number");
}

inline Json rational_to_json(const Rational& q) { return to_string(q); }

// Distributions ------------------------------------------------------------

/// {"labels": [...], "weights": [...]}; exact unless "exact": false.
using LabelDist = FinSupportDist<std::string>;
using LabelDistF = FinSupportDist<std::string, double>;

inline std::variant<LabelDist, LabelDistF> dist_from_json(const Json& j, const std::string& where = "dist") {
  const auto& labels = detail::array_field(j, "labels", where);
  const auto& weights = detail::array_field(j, "weights", where);
  if (labels.size() != weights.size()) throw ValidationError(where + ": labels and weights differ in length");
  std::vector<std::string> l;
  for (std::size_t i = 0; i < labels.size(); ++i)
    l.push_back(detail::as_string(labels[i], where + ".labels[" + std::to_string(i) + "]"));
  const bool exact = !j.contains("exact") || j.at("exact").get<bool>();
  try {
    if (exact) {
      std::vector<Rational> w;
      for (std::size_t i = 0; i < weights.size(); ++i)
        w.push_back(rational_from_json(weights[i], where + ".weights[" + std::to_string(i) + "]"));
      return LabelDist(std::move(l), std::move(w));
    }
    std::vector<double> w;
    for (std::size_t i = 0; i < weights.size(); ++i)
      w.push_back(real_from_json(weights[i], where + ".weights[" + std::to_string(i) + "]"));
    return LabelDistF(std::move(l), std::move(w));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

template <class Weight>
Json dist_to_json(const FinSupportDist<std::string, Weight>& p) {
  Json j;
  j["labels"] = p.support();
  j["weights"] = Json::array();
  for (const auto& w : p.weights()) {
    if constexpr (std::is_same_v<Weight, Rational>)
      j["weights"].push_back(rational_to_json(w));
    else
      j["weights"].push_back(w);
  }
  if constexpr (!std::is_same_v<Weight, Rational>) j["exact"] = false;
  return j;
}

// Coarse-graining maps -----------------------------------------------------

using MapSpec = std::variant<UniformBins, TableMap>;

inline MapSpec map_from_json(const Json& j, const std::string& where = "map") {
  const auto kind = detail::as_string(detail::field(j, "kind", where), where + ".kind");
  if (kind == "uniform_bins") {
    const auto bits = detail::count_field(j, "bits", where);
    if (bits > UniformBins::kMaxBits) throw ValidationError(where + ".bits: at most 52");
    return UniformBins(static_cast<unsigned>(bits));
  }
  if (kind == "table") {
    std::vector<std::pair<std::string, std::string>> entries;
    const auto& e = detail::array_field(j, "entries", where);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto w = where + ".entries[" + std::to_string(i) + "]";
      if (!e[i].is_array() || e[i].size() != 2) throw ValidationError(w + ": expected [input, output]");
      entries.emplace_back(detail::as_string(e[i][0], w), detail::as_string(e[i][1], w));
    }
    try {
      return TableMap(entries);
    } catch (const std::invalid_argument& ex) {
      throw ValidationError(where + ": " + ex.what());
    }
  }
  throw ValidationError(where + ".kind: unknown map kind '" + kind + "'");
}

// Quantum objects ----------------------------------------------------------

/// Square complex matrix from {"dim": n, "entries": [...]}. Entries are
/// [re, im] pairs (or plain reals), row-major, either flat (n*n) or nested.
inline CMatrix matrix_from_json(const Json& j, const std::string& where) {
  const auto n = detail::count_field(j, "dim", where);
  if (n == 0) throw ValidationError(where + ".dim: must be positive");
  const auto& e = detail::array_field(j, "entries", where);
  // Nested when there are n rows of n entries each. A flat list has n*n
  // entries, which only coincides with n when n == 1.
  bool nested = e.size() == n;
  for (const auto& row : e) nested = nested && row.is_array() && row.size() == n;
  std::vector<const Json*> flat;
  if (nested) {
    for (const auto& row : e)
      for (const auto& v : row) flat.push_back(&v);
  } else {
    if (e.size() != n * n) throw ValidationError(where + ".entries: expected " + std::to_string(n * n) + " entries");
    for (const auto& v : e) flat.push_back(&v);
  }
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const Json& v = *flat[k];
    const auto w = where + ".entries[" + std::to_string(k) + "]";
    Complex c;
    if (v.is_array() && v.size() == 2)
      c = Complex(real_from_json(v[0], w), real_from_json(v[1], w));
    else
      c = Complex(real_from_json(v, w), 0.0);
    m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = c;
  }
  return m;
}

inline Json matrix_to_json(const CMatrix& m) {
  Json j;
  j["dim"] = m.rows();
  j["entries"] = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) j["entries"].push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  return j;
}

inline DensityMatrix state_from_json(const Json& j, const std::string& where = "state") {
  try {
    return DensityMatrix(matrix_from_json(j, where));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

/// {"dim": n, "elements": [{"label": "h0", "entries": [...]}, ...]}.
inline Povm povm_from_json(const Json& j, const std::string& where = "povm") {
  const auto n = detail::count_field(j, "dim", where);
  const auto& el = detail::array_field(j, "elements", where);
  std::vector<CMatrix> mats;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < el.size(); ++i) {
    const auto w = where + ".elements[" + std::to_string(i) + "]";
    Json m = {{"dim", n}, {"entries", detail::field(el[i], "entries", w)}};
    mats.push_back(matrix_from_json(m, w));
    labels.push_back(el[i].contains("label") ? detail::as_string(el[i]["label"], w + ".label") : std::to_string(i));
  }
  try {
    return Povm(std::move(mats), std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

inline Json povm_to_json(const Povm& p) {
  Json j;
  j["dim"] = p.dim();
  j["elements"] = Json::array();
  for (std::size_t h = 0; h < p.size(); ++h) {
    Json e;
    e["label"] = p.labels().empty() ? std::to_string(h) : p.labels()[h];
    e["entries"] = matrix_to_json(p[h])["entries"];
    j["elements"].push_back(std::move(e));
  }
  return j;
}

/// State files in a directory, one per environment, named "<theta>.json".
inline std::vector<DensityMatrix> states_from_dir(const std::filesystem::path& dir,
                                                  const std::vector<std::string>& thetas) {
  std::vector<DensityMatrix> out;
  for (const auto& t : thetas) {
    const auto path = dir / (t + ".json");
    out.push_back(state_from_json(read_json_file(path), path.string()));
  }
  return out;
}

// Tasks and polytopes ------------------------------------------------------

inline TaskSpec task_from_json(const Json& j, const std::string& where = "task") {
  TaskSpec t;
  const auto& th = detail::array_field(j, "thetas", where);
  const auto& hy = detail::array_field(j, "hyps", where);
  const auto& u = detail::array_field(j, "utility", where);
  for (std::size_t i = 0; i < th.size(); ++i) t.thetas.push_back(detail::as_string(th[i], where + ".thetas"));
  for (std::size_t i = 0; i < hy.size(); ++i) t.hyps.push_back(detail::as_string(hy[i], where + ".hyps"));
  for (std::size_t r = 0; r < u.size(); ++r) {
    if (!u[r].is_array()) throw ValidationError(where + ".utility[" + std::to_string(r) + "]: expected an array");
    t.utility.emplace_back();
    for (std::size_t c = 0; c < u[r].size(); ++c)
      t.utility.back().push_back(
          rational_from_json(u[r][c], where + ".utility[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
  }
  t.validate();
  return t;
}

inline Json task_to_json(const TaskSpec& t) {
  Json j;
  j["thetas"] = t.thetas;
  j["hyps"] = t.hyps;
  j["utility"] = Json::array();
  for (const auto& row : t.utility) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    j["utility"].push_back(std::move(r));
  }
  return j;
}

inline LinearConstraint row_from_json(const Json& j, std::size_t width, const std::string& where) {
  LinearConstraint c;
  const auto& co = detail::array_field(j, "coeffs", where);
  if (co.size() != width)
    throw ValidationError(where + ".coeffs: " + std::to_string(co.size()) + " coefficients for " +
                          std::to_string(width) + " variables");
  for (std::size_t k = 0; k < co.size(); ++k)
    c.coeffs.push_back(rational_from_json(co[k], where + ".coeffs[" + std::to_string(k) + "]"));
  try {
    c.relation = parse_relation(detail::as_string(detail::field(j, "relation", where), where + ".relation"));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(where + ".relation: " + e.what());
  }
  c.rhs = rational_from_json(detail::field(j, "rhs", where), where + ".rhs");
  return c;
}

inline Json row_to_json(const LinearConstraint& c) {
  Json j;
  j["coeffs"] = Json::array();
  for (const auto& v : c.coeffs) j["coeffs"].push_back(rational_to_json(v));
  j["relation"] = to_string(c.relation);
  j["rhs"] = rational_to_json(c.rhs);
  return j;
}

/// Polytope over the task's kernel coordinates. Either a builtin
/// ({"builtin": "simplex" | "constant_kernel" | "no_signaling"}; the last
/// needs "alphabets": [A, B, X, Y] matching the task's Bell shape) or
/// {"rows": [...]}, whose rows are added to the simplex constraints unless
/// "simplex": false.
inline PolytopeSpec polytope_from_json(const Json& j, const TaskSpec& task, const std::string& where = "polytope") {
  if (j.contains("builtin")) {
    const auto name = detail::as_string(j.at("builtin"), where + ".builtin");
    if (name == "simplex") return simplex_polytope(task);
    if (name == "constant_kernel") {
      auto p = simplex_polytope(task);
      for (auto& r : constant_kernel_rows(task)) p.rows.push_back(std::move(r));
      return p;
    }
    if (name != "no_signaling") throw ValidationError(where + ".builtin: unknown polytope '" + name + "'");
    const auto& a = detail::array_field(j, "alphabets", where);
    if (a.size() != 4) throw ValidationError(where + ".alphabets: expected [A, B, X, Y]");
    std::size_t s[4];
    for (int i = 0; i < 4; ++i) {
      if (!a[i].is_number_integer() || a[i].get<long long>() <= 0)
        throw ValidationError(where + ".alphabets: entries must be positive integers");
      s[i] = a[i].get<std::size_t>();
    }
    if (s[0] * s[1] != task.hyps.size() || s[2] * s[3] != task.thetas.size())
      throw ValidationError(where + ": alphabets do not match the task's |H| = A*B and |Theta| = X*Y");
    return no_signaling_polytope(s[0], s[1], s[2], s[3]).spec;
  }
  const bool simplex = !j.contains("simplex") || j.at("simplex").get<bool>();
  PolytopeSpec p = simplex ? simplex_polytope(task) : PolytopeSpec{};
  if (!simplex) p.variables = simplex_polytope(task).variables;
  if (j.contains("variables")) {
    const auto& v = detail::array_field(j, "variables", where);
    if (v.size() != p.variables.size())
      throw ValidationError(where + ".variables: expected " + std::to_string(p.variables.size()) + " names");
  }
  const auto& rows = j.contains("rows") ? detail::array_field(j, "rows", where) : Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i)
    p.rows.push_back(row_from_json(rows[i], p.variables.size(), where + ".rows[" + std::to_string(i) + "]"));
  return p;
}

// Verdicts -----------------------------------------------------------------

inline Json lp_verdict_to_json(const LpResult& r, const PolytopeSpec& poly) {
  Json j;
  j["verdict"] = r.feasible ? "feasible" : "infeasible";
  if (r.witness) {
    Json w = Json::object();
    for (std::size_t k = 0; k < poly.variables.size(); ++k) w[poly.variables[k]] = rational_to_json((*r.witness)[k]);
    j["witness"] = std::move(w);
  }
  j["residual"] = rational_to_json(r.phase1_optimum);
  return j;
}

inline Json sdp_verdict_to_json(const SdpResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  if (r.witness) j["witness"] = povm_to_json(*r.witness);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["reason"] = r.reason;
  if (!r.performance.empty()) j["performance"] = r.performance;
  return j;
}

}  // namespace plab::io

#endif  // PLAB_IO_HPP
