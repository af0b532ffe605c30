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

/// \file compression.hpp
/// Monotone compression schemes for the finite-subset class.
///
/// A scheme keeps m_out of m_in sample points; it is monotone when, for every
/// m_in-tuple drawn from a finite set, some kept subtuple reconstructs to a
/// superset of the whole tuple. Weak EMX learnability and the existence of
/// such a scheme are equivalent; both constructions are here.

#ifndef PLAB_COMPRESSION_HPP
#define PLAB_COMPRESSION_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "plab/emx.hpp"
#include "plab/rational.hpp"

namespace plab {

/// eta(x) = {y : idx(y) <= idx(x)}.
template <class Elem, Indexer<Elem> Dom>
FiniteHypothesis<Elem> reconstruct_segment(const Elem& x, const Dom& dom) {
  return FiniteHypothesis<Elem>::segment(dom.idx(x));
}

/// Keeps the element of larger index; eta of it covers both inputs.
template <class Elem, Indexer<Elem> Dom>
Elem compress_two_to_one(const Elem& x1, const Elem& x2, const Dom& dom) {
  return dom.idx(x2) > dom.idx(x1) ? x2 : x1;
}

template <class Elem>
struct CompressionScheme {
  std::size_t m_in = 0;
  std::size_t m_out = 0;
  std::function<FiniteHypothesis<Elem>(std::span<const Elem>)> reconstruct;
};

/// The 2 -> 1 scheme: keep the max-index point, reconstruct its segment.
template <class Elem, Indexer<Elem> Dom>
CompressionScheme<Elem> initial_segment_scheme(Dom dom) {
  return {2, 1, [dom = std::move(dom)](std::span<const Elem> kept) {
            if (kept.size() != 1) throw std::invalid_argument("initial_segment_scheme: expects one point");
            return reconstruct_segment(kept[0], dom);
          }};
}

namespace detail {

/// Calls f(indices) for each strictly increasing k-subset of [0, n).
/// Stops early when f returns true; returns whether it stopped.
template <class F>
bool for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (f(std::as_const(idx))) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

template <class Elem>
std::vector<Elem> pick(std::span<const Elem> tuple, const std::vector<std::size_t>& positions) {
  std::vector<Elem> out;
  out.reserve(positions.size());
  for (auto p : positions) out.push_back(tuple[p]);
  return out;
}

}  // namespace detail

/// Searches the m_out-subtuples of `tuple` (order preserved) for one whose
/// reconstruction contains every entry. Returns the kept positions.
template <class Elem, Indexer<Elem> Dom>
std::optional<std::vector<std::size_t>> find_covering_subtuple(
    const CompressionScheme<Elem>& scheme, std::span<const Elem> tuple, const Dom& dom) {
  if (tuple.size() != scheme.m_in)
    throw std::invalid_argument("find_covering_subtuple: tuple length must equal m_in");
  std::optional<std::vector<std::size_t>> found;
  detail::for_each_combination(tuple.size(), scheme.m_out, [&](const std::vector<std::size_t>& pos) {
    auto kept = detail::pick(tuple, pos);
    auto h = scheme.reconstruct(std::span<const Elem>(kept));
    for (const auto& x : tuple)
      if (!h.contains(x, dom)) return false;
    found = pos;
    return true;
  });
  return found;
}

/// The three sufficient conditions on n for the compression-based learner.
struct SampleSizeConditions {
  bool ratio = false;      // m/n <= alpha
  bool union_bound = false;  // 2 C(n,m) exp(-2(n-m) alpha^2) <= alpha
  bool opt_tail = false;   // exp(-2 n alpha^2) <= alpha
  bool all() const noexcept { return ratio && union_bound && opt_tail; }
};

inline SampleSizeConditions check_sample_size(std::size_t n, std::size_t m,
                                              const Rational& alpha = Rational(1, 6)) {
  SampleSizeConditions c;
  if (n < m) return c;
  c.ratio = Rational(static_cast<long long>(m), static_cast<long long>(n)) <= alpha;
  const BigFloat a = BigFloat(numerator(alpha)) / BigFloat(denominator(alpha));
  const BigFloat two_a2 = 2 * a * a;
  const BigFloat lhs = 2 * BigFloat(binomial(n, m)) * exp(-two_a2 * BigFloat(n - m));
  c.union_bound = lhs <= a;
  c.opt_tail = exp(-two_a2 * BigFloat(n)) <= a;
  return c;
}

/// Smallest n >= m+1 meeting every condition of check_sample_size.
inline std::size_t required_n(std::size_t m, const Rational& alpha = Rational(1, 6)) {
  if (alpha <= 0 || alpha >= 1) throw std::domain_error("required_n: alpha must lie in (0,1)");
  for (std::size_t n = m + 1;; ++n)
    if (check_sample_size(n, m, alpha).all()) return n;
}

namespace detail {

/// Larger empirical count wins; then larger set; then lexicographically
/// smaller sorted index list.
struct CandidateRank {
  std::size_t hits;
  std::size_t cardinality;
  std::vector<std::size_t> description;

  bool better_than(const CandidateRank& o) const {
    if (hits != o.hits) return hits > o.hits;
    if (cardinality != o.cardinality) return cardinality > o.cardinality;
    return description < o.description;
  }
};

}  // namespace detail

/// Empirical maximizer over {eta(x_I) : I an m-subset of the sample}.
template <class Elem, Indexer<Elem> Dom>
FiniteHypothesis<Elem> compression_learner(const CompressionScheme<Elem>& scheme, std::size_t n,
                                           const SampleSeq<Elem>& s, const Dom& dom) {
  const std::size_t m = scheme.m_out;
  if (n < m + 1) throw std::invalid_argument("compression_learner: need n >= m + 1");
  if (s.size() != n) throw std::invalid_argument("compression_learner: sample size must equal n");

  std::optional<FiniteHypothesis<Elem>> best;
  std::optional<detail::CandidateRank> best_rank;
  std::span<const Elem> pts(s.points);
  detail::for_each_combination(n, m, [&](const std::vector<std::size_t>& pos) {
    auto kept = detail::pick(pts, pos);
    auto h = scheme.reconstruct(std::span<const Elem>(kept));
    std::size_t hits = 0;
    for (const auto& x : s.points) hits += h.contains(x, dom) ? 1 : 0;
    if (best_rank && hits < best_rank->hits) return false;
    detail::CandidateRank rank{hits, h.cardinality(dom), h.index_description(dom)};
    if (!best_rank || rank.better_than(*best_rank)) {
      best_rank = std::move(rank);
      best = std::move(h);
    }
    return false;
  });
  return *best;
}

/// Builds the (m+1) -> m scheme from a proper learner G on d points, with
/// m = ceil(3d/2): eta(S') is the union of S' and G(T) over every d-tuple T
/// drawn from S' with repetition. G returns FiniteHypothesis<Elem>.
template <class Elem, class Dom, class Learner>
CompressionScheme<Elem> learner_to_compression(Learner learn, std::size_t d, Dom dom) {
  if (d == 0) throw std::invalid_argument("learner_to_compression: d must be >= 1");
  const std::size_t m = (3 * d + 1) / 2;
  double tuples = 1;
  for (std::size_t i = 0; i < d; ++i) tuples *= static_cast<double>(m);
  if (tuples > 1e7) throw std::length_error("learner_to_compression: m^d tuples too many to enumerate");

  return {m + 1, m,
          [learn = std::move(learn), dom = std::move(dom), d, m](std::span<const Elem> kept) {
            if (kept.size() != m) throw std::invalid_argument("reconstruct: expects m points");
            std::set<Elem> out(kept.begin(), kept.end());
            std::vector<std::size_t> digit(d, 0);
            SampleSeq<Elem> t;
            t.points.resize(d);
            while (true) {
              for (std::size_t i = 0; i < d; ++i) t.points[i] = kept[digit[i]];
              auto g = learn(std::as_const(t)).expand(dom);
              out.insert(g.begin(), g.end());
              std::size_t i = 0;
              while (i < d && ++digit[i] == m) digit[i++] = 0;
              if (i == d) break;
            }
            return FiniteHypothesis<Elem>::of(std::move(out));
          }};
}

}  // namespace plab

#endif  // PLAB_COMPRESSION_HPP
