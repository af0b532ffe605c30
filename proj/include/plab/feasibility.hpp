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

/// \file feasibility.hpp
/// Learning tasks over finite environment and hypothesis sets, and the
/// linear feasibility question: does an admissible kernel Q exist with
/// sum_{h in G_theta(eps)} Q(h|theta) >= 1 - delta for every theta?
///
/// Kernel coordinates are ordered theta-major: q[theta * |H| + h].

#ifndef PLAB_FEASIBILITY_HPP
#define PLAB_FEASIBILITY_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plab/kernel.hpp"
#include "plab/rational.hpp"
#include "plab/simplex.hpp"

namespace plab {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite (Theta, H, U) with U[theta][h] in [0,1].
struct TaskSpec {
  std::vector<std::string> thetas;
  std::vector<std::string> hyps;
  std::vector<std::vector<Rational>> utility;

  void validate() const {
    if (thetas.empty() || hyps.empty()) throw ValidationError("TaskSpec: empty Theta or H");
    if (utility.size() != thetas.size()) throw ValidationError("TaskSpec: utility needs one row per theta");
    for (const auto& row : utility) {
      if (row.size() != hyps.size()) throw ValidationError("TaskSpec: utility row width differs from |H|");
      for (const auto& u : row)
        if (u < 0 || u > 1) throw ValidationError("TaskSpec: utility entries must lie in [0,1]");
    }
  }

  std::size_t num_coords() const noexcept { return thetas.size() * hyps.size(); }
  std::size_t coord(std::size_t theta, std::size_t h) const noexcept { return theta * hyps.size() + h; }

  Rational opt(std::size_t theta) const {
    return *std::max_element(utility.at(theta).begin(), utility.at(theta).end());
  }

  /// U(theta, h) = [theta == h] on a square index set.
  static TaskSpec identity(std::size_t n) {
    TaskSpec t;
    for (std::size_t i = 0; i < n; ++i) {
      t.thetas.push_back("t" + std::to_string(i));
      t.hyps.push_back("h" + std::to_string(i));
      t.utility.emplace_back(n, Rational(0));
      t.utility.back()[i] = 1;
    }
    return t;
  }
};

/// G_theta(eps) = {h : U(theta,h) >= opt(theta) - eps}, as index lists.
inline std::vector<std::vector<std::size_t>> epsilon_optimal_sets(const TaskSpec& task, const Rational& epsilon) {
  task.validate();
  if (epsilon < 0) throw std::domain_error("epsilon_optimal_sets: epsilon must be nonnegative");
  std::vector<std::vector<std::size_t>> sets(task.thetas.size());
  for (std::size_t t = 0; t < task.thetas.size(); ++t) {
    const Rational threshold = task.opt(t) - epsilon;
    for (std::size_t h = 0; h < task.hyps.size(); ++h)
      if (task.utility[t][h] >= threshold) sets[t].push_back(h);
  }
  return sets;
}

/// One row per theta: sum_{h in G_theta(eps)} q_{theta,h} >= 1 - delta.
inline std::vector<LinearConstraint> build_pl_constraints(const TaskSpec& task, const Rational& epsilon,
                                                          const Rational& delta) {
  if (delta < 0 || delta > 1) throw std::domain_error("build_pl_constraints: delta outside [0,1]");
  const auto sets = epsilon_optimal_sets(task, epsilon);
  std::vector<LinearConstraint> rows;
  rows.reserve(sets.size());
  for (std::size_t t = 0; t < sets.size(); ++t) {
    LinearConstraint c{std::vector<Rational>(task.num_coords(), 0), Relation::GreaterEqual, 1 - delta};
    for (auto h : sets[t]) c.coeffs[task.coord(t, h)] = 1;
    rows.push_back(std::move(c));
  }
  return rows;
}

/// Rational polytope over kernel coordinates.
struct PolytopeSpec {
  std::vector<std::string> variables;
  std::vector<LinearConstraint> rows;

  void validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].coeffs.size() != variables.size())
        throw ValidationError("PolytopeSpec: row " + std::to_string(i) + " has " +
                              std::to_string(rows[i].coeffs.size()) + " coefficients for " +
                              std::to_string(variables.size()) + " variables");
  }

  bool contains(const std::vector<Rational>& x) const {
    return std::all_of(rows.begin(), rows.end(), [&](const auto& r) { return r.satisfied_by(x); });
  }
};

/// Nonnegativity and row normalization for kernels on the task's Theta x H.
inline PolytopeSpec simplex_polytope(const TaskSpec& task) {
  PolytopeSpec p;
  const auto n = task.num_coords();
  for (std::size_t t = 0; t < task.thetas.size(); ++t)
    for (std::size_t h = 0; h < task.hyps.size(); ++h)
      p.variables.push_back("q[" + task.thetas[t] + "|" + task.hyps[h] + "]");
  for (std::size_t j = 0; j < n; ++j) {
    LinearConstraint c{std::vector<Rational>(n, 0), Relation::GreaterEqual, 0};
    c.coeffs[j] = 1;
    p.rows.push_back(std::move(c));
  }
  for (std::size_t t = 0; t < task.thetas.size(); ++t) {
    LinearConstraint c{std::vector<Rational>(n, 0), Relation::Equal, 1};
    for (std::size_t h = 0; h < task.hyps.size(); ++h) c.coeffs[task.coord(t, h)] = 1;
    p.rows.push_back(std::move(c));
  }
  return p;
}

/// Q(h|theta_a) = Q(h|theta_b) for every pair and h: kernels that ignore
/// the environment.
inline std::vector<LinearConstraint> constant_kernel_rows(const TaskSpec& task) {
  std::vector<LinearConstraint> rows;
  const auto n = task.num_coords();
  for (std::size_t t = 1; t < task.thetas.size(); ++t)
    for (std::size_t h = 0; h < task.hyps.size(); ++h) {
      LinearConstraint c{std::vector<Rational>(n, 0), Relation::Equal, 0};
      c.coeffs[task.coord(t, h)] = 1;
      c.coeffs[task.coord(0, h)] = -1;
      rows.push_back(std::move(c));
    }
  return rows;
}

struct LpResult {
  bool feasible = false;
  /// Exact witness when feasible, in the polytope's variable order.
  std::optional<std::vector<Rational>> witness;
  Rational phase1_optimum = 0;
};

/// Exact phase-1 simplex on polytope rows plus PL rows.
inline LpResult lp_feasible(const PolytopeSpec& poly, const std::vector<LinearConstraint>& pl) {
  poly.validate();
  std::vector<LinearConstraint> rows = poly.rows;
  for (const auto& r : pl) {
    if (r.coeffs.size() != poly.variables.size())
      throw ValidationError("lp_feasible: PL row width differs from polytope variable count");
    rows.push_back(r);
  }
  auto res = phase1_feasible(poly.variables.size(), rows);
  return {res.feasible, std::move(res.point), std::move(res.optimum)};
}

/// Reads a witness over the task's coordinates as a kernel (exact rows).
inline RationalKernel as_kernel(const TaskSpec& task, const std::vector<Rational>& x) {
  return RationalKernel(task.thetas.size(), task.hyps.size(), x);
}

/// Bell scenario with outputs A, B and inputs X, Y. Coordinates are kernel
/// coordinates with theta = (x,y) and h = (a,b):
/// index ((x*Y + y) * A + a) * B + b.
struct BellScenario {
  std::size_t a, b, x, y;

  std::size_t coord(std::size_t ai, std::size_t bi, std::size_t xi, std::size_t yi) const noexcept {
    return ((xi * y + yi) * a + ai) * b + bi;
  }
  std::size_t num_coords() const noexcept { return a * b * x * y; }

  /// Theta = input pairs "x,y"; H = output pairs "a,b".
  TaskSpec task_shape() const {
    TaskSpec t;
    for (std::size_t xi = 0; xi < x; ++xi)
      for (std::size_t yi = 0; yi < y; ++yi) t.thetas.push_back(std::to_string(xi) + "," + std::to_string(yi));
    for (std::size_t ai = 0; ai < a; ++ai)
      for (std::size_t bi = 0; bi < b; ++bi) t.hyps.push_back(std::to_string(ai) + "," + std::to_string(bi));
    t.utility.assign(t.thetas.size(), std::vector<Rational>(t.hyps.size(), 0));
    return t;
  }
};

struct NoSignalingPolytope {
  PolytopeSpec spec;
  std::size_t nonnegativity = 0;
  std::size_t normalization = 0;
  std::size_t marginal_equalities = 0;
};

/// Nonnegativity, per-(x,y) normalization, and both marginal families:
/// sum_b p(a,b|x,y) = sum_b p(a,b|x,0) and sum_a p(a,b|x,y) = sum_a p(a,b|0,y).
inline NoSignalingPolytope no_signaling_polytope(std::size_t na, std::size_t nb, std::size_t nx, std::size_t ny) {
  if (!na || !nb || !nx || !ny) throw std::invalid_argument("no_signaling_polytope: empty alphabet");
  const BellScenario s{na, nb, nx, ny};
  const auto n = s.num_coords();
  NoSignalingPolytope out;
  auto& p = out.spec;
  p.variables.resize(n);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y)
          p.variables[s.coord(a, b, x, y)] = "p(" + std::to_string(a) + "," + std::to_string(b) + "|" +
                                             std::to_string(x) + "," + std::to_string(y) + ")";
  auto blank = [&](Relation r, Rational rhs) { return LinearConstraint{std::vector<Rational>(n, 0), r, std::move(rhs)}; };

  for (std::size_t j = 0; j < n; ++j) {
    auto c = blank(Relation::GreaterEqual, 0);
    c.coeffs[j] = 1;
    p.rows.push_back(std::move(c));
    ++out.nonnegativity;
  }
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      auto c = blank(Relation::Equal, 1);
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) c.coeffs[s.coord(a, b, x, y)] = 1;
      p.rows.push_back(std::move(c));
      ++out.normalization;
    }
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 1; y < ny; ++y) {
        auto c = blank(Relation::Equal, 0);
        for (std::size_t b = 0; b < nb; ++b) {
          c.coeffs[s.coord(a, b, x, y)] += 1;
          c.coeffs[s.coord(a, b, x, 0)] -= 1;
        }
        p.rows.push_back(std::move(c));
        ++out.marginal_equalities;
      }
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t x = 1; x < nx; ++x) {
        auto c = blank(Relation::Equal, 0);
        for (std::size_t a = 0; a < na; ++a) {
          c.coeffs[s.coord(a, b, x, y)] += 1;
          c.coeffs[s.coord(a, b, 0, y)] -= 1;
        }
        p.rows.push_back(std::move(c));
        ++out.marginal_equalities;
      }
  return out;
}

/// Number of variables minus the rank of the explicit equality rows. This is
/// the affine dimension when the inequality rows imply no further
/// equalities (true for the no-signaling polytope, whose uniform point is
/// strictly inside every inequality).
inline std::size_t affine_dimension(const PolytopeSpec& poly) {
  poly.validate();
  std::vector<std::vector<Rational>> eq;
  for (const auto& r : poly.rows)
    if (r.relation == Relation::Equal) eq.push_back(r.coeffs);
  return poly.variables.size() - rational_rank(std::move(eq));
}

}  // namespace plab

#endif  // PLAB_FEASIBILITY_HPP
