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

/// \file sdp.hpp
/// Semidefinite feasibility for quantum d-copy tasks: find {M_h} with
/// M_h >= 0, sum_h M_h = I and sum_{h in G_theta} tr(M_h rho_theta^d) >= 1-delta
/// for every theta.
///
/// The search is cyclic projection: each sweep projects onto the
/// performance half-spaces, then the completeness subspace, then the PSD
/// cone (eigenvalue clipping). A candidate is accepted only after it is
/// renormalized into an exact POVM and re-verified. Infeasible is reported
/// from a Helstrom certificate for some pair of environments, or when the
/// residual stops improving well above tolerance; otherwise Undetermined.

#ifndef PLAB_SDP_HPP
#define PLAB_SDP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plab/feasibility.hpp"
#include "plab/quantum.hpp"

namespace plab {

enum class SdpVerdict { Feasible, Infeasible, Undetermined };

inline std::string to_string(SdpVerdict v) {
  switch (v) {
    case SdpVerdict::Feasible: return "feasible";
    case SdpVerdict::Infeasible: return "infeasible";
    case SdpVerdict::Undetermined: return "undetermined";
  }
  return "?";
}

struct SdpOptions {
  double residual_tol = 1e-7;
  double witness_tol = 1e-6;
  std::size_t max_iterations = 20000;
  /// Stagnation: relative improvement below `stagnation_gain` across
  /// `stagnation_window` sweeps while the residual exceeds `stagnation_floor`.
  std::size_t stagnation_window = 2000;
  double stagnation_gain = 1e-3;
  double stagnation_floor = 1e-4;
  /// Over-relaxation for the half-space steps, in (0, 2).
  double relaxation = 1.5;
  std::size_t dim_cap = kDefaultDimCap;
};

struct SdpResult {
  SdpVerdict verdict = SdpVerdict::Undetermined;
  std::optional<Povm> witness;
  double residual = 0;
  std::size_t iterations = 0;
  std::string reason;
  /// sum_{h in G_theta} tr(M_h rho_theta^d) for the witness, when present.
  std::vector<double> performance;
};

namespace detail {

inline CMatrix psd_part(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  CMatrix out = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  return (out + out.adjoint()) * 0.5;
}

inline double real_inner(const CMatrix& a, const CMatrix& b) {
  // Re tr(A B) = Re sum_ij A_ij B_ji.
  return a.cwiseProduct(b.transpose()).sum().real();
}

}  // namespace detail

/// Checks a candidate POVM against the PL rows; returns per-theta
/// performance and the worst shortfall below 1 - delta.
inline std::pair<std::vector<double>, double> evaluate_performance(
    const std::vector<CMatrix>& m, const std::vector<CMatrix>& powers,
    const std::vector<std::vector<std::size_t>>& good, double delta) {
  std::vector<double> perf(powers.size(), 0.0);
  double shortfall = 0.0;
  for (std::size_t t = 0; t < powers.size(); ++t) {
    for (auto h : good[t]) perf[t] += (m[h] * powers[t]).trace().real();
    shortfall = std::max(shortfall, (1.0 - delta) - perf[t]);
  }
  return {perf, shortfall};
}

inline SdpResult sdp_feasible(const std::vector<DensityMatrix>& states, const TaskSpec& task,
                              const Rational& epsilon, double delta, std::size_t d,
                              const SdpOptions& opt = {}) {
  task.validate();
  if (states.size() != task.thetas.size())
    throw std::invalid_argument("sdp_feasible: need one state per environment");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::domain_error("sdp_feasible: delta outside [0,1]");
  for (const auto& s : states)
    if (s.dim() != states.front().dim()) throw std::invalid_argument("sdp_feasible: states differ in dimension");

  const auto good = epsilon_optimal_sets(task, epsilon);
  std::vector<CMatrix> powers;
  powers.reserve(states.size());
  for (const auto& s : states) powers.push_back(tensor_power(s, d, opt.dim_cap).matrix());
  const auto n = powers.front().rows();
  const auto k = task.hyps.size();

  SdpResult res;

  // Pairwise Helstrom certificate: if G_a and G_b are disjoint, the two
  // success probabilities sum to at most 1 + ||rho_a^d - rho_b^d||_1 / 2.
  for (std::size_t a = 0; a < powers.size(); ++a)
    for (std::size_t b = a + 1; b < powers.size(); ++b) {
      std::vector<std::size_t> common;
      std::set_intersection(good[a].begin(), good[a].end(), good[b].begin(), good[b].end(),
                            std::back_inserter(common));
      if (!common.empty()) continue;
      const double helstrom = 1.0 + 0.5 * trace_norm(powers[a] - powers[b]);
      if (2.0 * (1.0 - delta) > helstrom + 1e-12) {
        res.verdict = SdpVerdict::Infeasible;
        res.residual = 2.0 * (1.0 - delta) - helstrom;
        res.reason = "helstrom bound: environments " + task.thetas[a] + " and " + task.thetas[b] +
                     " cannot both reach 1 - delta";
        return res;
      }
    }

  // Half-space normals: rho_theta^d in every slot h in G_theta.
  std::vector<double> normal_sq(powers.size());
  for (std::size_t t = 0; t < powers.size(); ++t)
    normal_sq[t] = static_cast<double>(good[t].size()) * powers[t].squaredNorm();

  const CMatrix id = CMatrix::Identity(n, n);
  std::vector<CMatrix> m(k, id / static_cast<double>(k));
  const double target = (1.0 - delta) + 0.1 * opt.witness_tol;

  auto try_witness = [&](const std::vector<CMatrix>& cand) -> bool {
    CMatrix total = CMatrix::Zero(n, n);
    for (const auto& e : cand) total += e;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(total);
    if (es.eigenvalues().minCoeff() <= 1e-12) return false;
    const CMatrix w = detail::inverse_sqrt_psd(total);
    std::vector<CMatrix> fixed;
    fixed.reserve(cand.size());
    for (const auto& e : cand) {
      CMatrix f = w * e * w;
      fixed.push_back((f + f.adjoint()) * 0.5);
    }
    auto [perf, shortfall] = evaluate_performance(fixed, powers, good, delta);
    if (shortfall > opt.witness_tol) return false;
    try {
      Povm p(fixed, task.hyps);
      res.witness = std::move(p);
    } catch (const std::invalid_argument&) {
      return false;
    }
    res.performance = std::move(perf);
    return true;
  };

  double window_start = INFINITY;
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    for (std::size_t t = 0; t < powers.size(); ++t) {
      if (normal_sq[t] == 0.0) continue;
      double f = 0.0;
      for (auto h : good[t]) f += detail::real_inner(powers[t], m[h]);
      if (f < target) {
        const double step = opt.relaxation * (target - f) / normal_sq[t];
        for (auto h : good[t]) m[h] += step * powers[t];
      }
    }
    CMatrix total = CMatrix::Zero(n, n);
    for (const auto& e : m) total += e;
    const CMatrix correction = (total - id) / static_cast<double>(k);
    for (auto& e : m) e -= correction;
    for (auto& e : m) e = detail::psd_part(e);

    // Residual after the PSD step: completeness error and worst shortfall.
    total.setZero();
    for (const auto& e : m) total += e;
    const double completeness = (total - id).norm();
    const double shortfall = evaluate_performance(m, powers, good, delta).second;
    res.residual = std::max(completeness, std::max(0.0, shortfall));
    res.iterations = it;

    if ((res.residual < opt.residual_tol || it % 25 == 0) && completeness < 0.5 && try_witness(m)) {
      res.verdict = SdpVerdict::Feasible;
      res.reason = "witness verified";
      return res;
    }
    if (it % opt.stagnation_window == 0) {
      if (res.residual > opt.stagnation_floor && res.residual > (1.0 - opt.stagnation_gain) * window_start) {
        res.verdict = SdpVerdict::Infeasible;
        res.reason = "residual stagnated";
        return res;
      }
      window_start = res.residual;
    }
  }
  res.verdict = SdpVerdict::Undetermined;
  res.reason = "iteration cap reached";
  return res;
}

/// Smallest delta in [lo, hi] at which sdp_feasible returns Feasible, found
/// by bisection to width `tol`.
inline double sdp_delta_threshold(const std::vector<DensityMatrix>& states, const TaskSpec& task,
                                  const Rational& epsilon, std::size_t d, double tol = 1e-4,
                                  double lo = 0.0, double hi = 0.5, const SdpOptions& opt = {}) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (sdp_feasible(states, task, epsilon, mid, d, opt).verdict == SdpVerdict::Feasible)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace plab

#endif  // PLAB_SDP_HPP
