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

/// \file simplex.hpp
/// Exact phase-1 simplex over the rationals.
///
/// Decides whether {x : a_i . x (<=|=|>=) b_i} is empty. Variables are free
/// unless a row of the form c x_j >= 0 (c > 0) or c x_j <= 0 (c < 0) bounds
/// them below, in which case the row becomes a column bound; free variables
/// are split as x = u - v. Pivoting uses Bland's rule, so the method
/// terminates; all arithmetic is exact.

#ifndef PLAB_SIMPLEX_HPP
#define PLAB_SIMPLEX_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plab/rational.hpp"

namespace plab {

enum class Relation { LessEqual, Equal, GreaterEqual };

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

inline Relation parse_relation(const std::string& s) {
  if (s == "<=") return Relation::LessEqual;
  if (s == "=" || s == "==") return Relation::Equal;
  if (s == ">=") return Relation::GreaterEqual;
  throw std::invalid_argument("unknown relation '" + s + "'");
}

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::LessEqual;
  Rational rhs = 0;

  Rational lhs(const std::vector<Rational>& x) const {
    Rational s = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      if (coeffs[j] != 0) s += coeffs[j] * x[j];
    return s;
  }

  bool satisfied_by(const std::vector<Rational>& x) const {
    const Rational v = lhs(x);
    switch (relation) {
      case Relation::LessEqual: return v <= rhs;
      case Relation::Equal: return v == rhs;
      case Relation::GreaterEqual: return v >= rhs;
    }
    return false;
  }
};

struct Phase1Result {
  bool feasible = false;
  /// Sum of artificial variables at the phase-1 optimum (0 iff feasible).
  Rational optimum = 0;
  std::optional<std::vector<Rational>> point;
  std::size_t pivots = 0;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows + 1, std::vector<Rational>(cols + 1)) {}

  Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return t_[r][c]; }
  Rational& rhs(std::size_t r) { return t_[r][cols_]; }
  Rational& cost(std::size_t c) { return t_[rows_][c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Rational inv = 1 / t_[pr][pc];
    for (auto& v : t_[pr])
      if (v != 0) v *= inv;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr || t_[r][pc] == 0) continue;
      const Rational f = t_[r][pc];
      for (std::size_t c = 0; c <= cols_; ++c)
        if (t_[pr][c] != 0) t_[r][c] -= f * t_[pr][c];
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<std::vector<Rational>> t_;
};

}  // namespace detail

/// Phase-1 simplex on the given system. When feasible, `point` satisfies
/// every constraint exactly.
inline Phase1Result phase1_feasible(std::size_t num_vars, const std::vector<LinearConstraint>& rows) {
  for (const auto& r : rows)
    if (r.coeffs.size() != num_vars)
      throw std::invalid_argument("phase1_feasible: row width differs from variable count");

  // Rows that only say x_j >= 0 become column bounds.
  std::vector<bool> nonneg(num_vars, false);
  std::vector<const LinearConstraint*> kept;
  for (const auto& r : rows) {
    std::size_t nz = 0, j = 0;
    for (std::size_t k = 0; k < num_vars; ++k)
      if (r.coeffs[k] != 0) {
        ++nz;
        j = k;
      }
    const bool bound = nz == 1 && r.rhs == 0 &&
                       ((r.relation == Relation::GreaterEqual && r.coeffs[j] > 0) ||
                        (r.relation == Relation::LessEqual && r.coeffs[j] < 0));
    if (bound)
      nonneg[j] = true;
    else
      kept.push_back(&r);
  }

  // Column layout: structural columns (one per nonneg variable, two per free
  // variable), then one slack/surplus per inequality, then artificials.
  std::vector<std::size_t> pos_col(num_vars), neg_col(num_vars, SIZE_MAX);
  std::size_t cols = 0;
  for (std::size_t j = 0; j < num_vars; ++j) {
    pos_col[j] = cols++;
    if (!nonneg[j]) neg_col[j] = cols++;
  }
  std::vector<std::size_t> slack_col(kept.size(), SIZE_MAX);
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (kept[i]->relation != Relation::Equal) slack_col[i] = cols++;
  const std::size_t first_art = cols;
  cols += kept.size();

  const std::size_t m = kept.size();
  detail::Tableau tab(m, cols);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = *kept[i];
    const int sign = r.rhs < 0 ? -1 : 1;
    for (std::size_t j = 0; j < num_vars; ++j) {
      if (r.coeffs[j] == 0) continue;
      tab.at(i, pos_col[j]) = sign * r.coeffs[j];
      if (neg_col[j] != SIZE_MAX) tab.at(i, neg_col[j]) = -sign * r.coeffs[j];
    }
    if (slack_col[i] != SIZE_MAX) tab.at(i, slack_col[i]) = (r.relation == Relation::LessEqual ? sign : -sign);
    tab.at(i, first_art + i) = 1;
    tab.rhs(i) = sign * r.rhs;
    basis[i] = first_art + i;
  }
  // Reduced costs for minimizing the artificial sum: c_j - sum_i a_ij.
  for (std::size_t c = 0; c <= cols; ++c) {
    Rational s = 0;
    for (std::size_t i = 0; i < m; ++i) s += tab.at(i, c);
    tab.at(m, c) = (c >= first_art && c < cols) ? Rational(0) : Rational(-s);
  }

  Phase1Result out;
  while (true) {
    std::size_t enter = SIZE_MAX;
    for (std::size_t c = 0; c < cols; ++c)
      if (tab.at(m, c) < 0) {
        enter = c;
        break;
      }
    if (enter == SIZE_MAX) break;
    std::size_t leave = SIZE_MAX;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.at(i, enter) <= 0) continue;
      Rational ratio = tab.at(i, cols) / tab.at(i, enter);
      if (leave == SIZE_MAX || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = std::move(ratio);
      }
    }
    // Phase 1 is bounded below by zero, so an entering column always has a
    // positive entry.
    if (leave == SIZE_MAX) throw std::logic_error("phase1_feasible: unbounded phase-1 problem");
    tab.pivot(leave, enter);
    basis[leave] = enter;
    ++out.pivots;
  }

  out.optimum = -tab.at(m, cols);
  out.feasible = out.optimum == 0;
  if (!out.feasible) return out;

  std::vector<Rational> col_value(cols, 0);
  for (std::size_t i = 0; i < m; ++i) col_value[basis[i]] = tab.at(i, cols);
  std::vector<Rational> x(num_vars, 0);
  for (std::size_t j = 0; j < num_vars; ++j) {
    x[j] = col_value[pos_col[j]];
    if (neg_col[j] != SIZE_MAX) x[j] -= col_value[neg_col[j]];
  }
  for (const auto& r : rows)
    if (!r.satisfied_by(x)) throw std::logic_error("phase1_feasible: witness violates a constraint");
  out.point = std::move(x);
  return out;
}

/// Rank of a rational matrix by exact Gaussian elimination.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a.front().size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace plab

#endif  // PLAB_SIMPLEX_HPP
