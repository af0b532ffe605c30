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

/// \file emx.hpp
/// Finitely supported distributions, finite hypotheses and the quantile
/// learner for the EMX (estimating the maximum) objective over the class of
/// all finite subsets of a countable domain.
///
/// Elements of a countable domain are named by an injection idx into the
/// positive integers. The initial segment A_t = {x : idx(x) <= t} is always
/// finite, and the quantile learner outputs A_T with T the largest index in
/// the sample.

#ifndef PLAB_EMX_HPP
#define PLAB_EMX_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "plab/parallel.hpp"
#include "plab/random.hpp"
#include "plab/rational.hpp"

namespace plab {

/// An ordered list of distinct labels; idx is the 1-based rank in that list.
template <class Elem>
class IndexedDomain {
 public:
  IndexedDomain() = default;

  explicit IndexedDomain(std::vector<Elem> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!rank_.emplace(labels_[i], i + 1).second)
        throw std::invalid_argument("IndexedDomain: duplicate label");
    }
  }

  std::size_t idx(const Elem& x) const {
    auto it = rank_.find(x);
    if (it == rank_.end()) throw std::out_of_range("IndexedDomain: unknown element");
    return it->second;
  }

  bool contains(const Elem& x) const { return rank_.count(x) != 0; }

  /// Element with idx == i (1-based).
  const Elem& at_index(std::size_t i) const {
    if (i == 0 || i > labels_.size()) throw std::out_of_range("IndexedDomain: bad index");
    return labels_[i - 1];
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<Elem>& labels() const noexcept { return labels_; }

  /// A_t as an explicit list in index order.
  std::vector<Elem> initial_segment(std::size_t t) const {
    t = std::min(t, labels_.size());
    return {labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(t)};
  }

 private:
  std::vector<Elem> labels_;
  std::map<Elem, std::size_t> rank_;
};

/// The bin alphabet {0, ..., count-1} with idx(b) = b + 1 (numeric order).
class BinDomain {
 public:
  using value_type = std::int64_t;

  explicit BinDomain(std::int64_t count) : count_(count) {
    if (count <= 0) throw std::invalid_argument("BinDomain: empty alphabet");
  }

  std::size_t idx(std::int64_t b) const {
    if (!contains(b)) throw std::out_of_range("BinDomain: bin out of range");
    return static_cast<std::size_t>(b) + 1;
  }
  bool contains(std::int64_t b) const noexcept { return b >= 0 && b < count_; }
  std::int64_t at_index(std::size_t i) const {
    if (i == 0 || i > size()) throw std::out_of_range("BinDomain: bad index");
    return static_cast<std::int64_t>(i) - 1;
  }
  std::size_t size() const noexcept { return static_cast<std::size_t>(count_); }

 private:
  std::int64_t count_;
};

template <class D, class Elem>
concept Indexer = requires(const D& d, const Elem& e, std::size_t i) {
  { d.idx(e) } -> std::convertible_to<std::size_t>;
  { d.contains(e) } -> std::convertible_to<bool>;
  { d.size() } -> std::convertible_to<std::size_t>;
  { d.at_index(i) } -> std::convertible_to<Elem>;
};

template <class Weight>
concept WeightType = std::same_as<Weight, Rational> || std::floating_point<Weight>;

/// A probability distribution with finite support. Weights are strictly
/// positive and sum to exactly one (rational) or within 1e-12 (floating).
template <class Elem, WeightType Weight = Rational>
class FinSupportDist {
 public:
  using element_type = Elem;
  using weight_type = Weight;

  FinSupportDist(std::vector<Elem> support, std::vector<Weight> weights)
      : support_(std::move(support)), weights_(std::move(weights)) {
    if (support_.empty()) throw std::invalid_argument("FinSupportDist: empty support");
    if (support_.size() != weights_.size())
      throw std::invalid_argument("FinSupportDist: support/weight length mismatch");
    Weight total = 0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (!(weights_[i] > 0))
        throw std::invalid_argument("FinSupportDist: weights must be strictly positive");
      if (!position_.emplace(support_[i], i).second)
        throw std::invalid_argument("FinSupportDist: duplicate support element");
      total += weights_[i];
    }
    if constexpr (std::is_same_v<Weight, Rational>) {
      if (total != 1) throw std::invalid_argument("FinSupportDist: weights must sum to 1");
    } else {
      if (std::abs(total - Weight(1)) > 1e-12)
        throw std::invalid_argument("FinSupportDist: weights must sum to 1");
    }
    cdf_.reserve(weights_.size());
    double acc = 0.0;
    for (const auto& w : weights_) {
      if constexpr (std::is_same_v<Weight, Rational>)
        acc += to_double(w);
      else
        acc += static_cast<double>(w);
      cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;
  }

  /// Uniform distribution on the given elements.
  static FinSupportDist uniform(std::vector<Elem> support) {
    const auto n = support.size();
    if (n == 0) throw std::invalid_argument("FinSupportDist: empty support");
    std::vector<Weight> w;
    if constexpr (std::is_same_v<Weight, Rational>)
      w.assign(n, Rational(1, static_cast<long long>(n)));
    else
      w.assign(n, Weight(1) / static_cast<Weight>(n));
    return FinSupportDist(std::move(support), std::move(w));
  }

  const std::vector<Elem>& support() const noexcept { return support_; }
  const std::vector<Weight>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return support_.size(); }

  Weight weight_of(const Elem& x) const {
    auto it = position_.find(x);
    return it == position_.end() ? Weight(0) : weights_[it->second];
  }

  /// Inverse-CDF draw over the ordered support for u in [0, 1).
  const Elem& quantile(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return support_[static_cast<std::size_t>(it - cdf_.begin())];
  }

 private:
  std::vector<Elem> support_;
  std::vector<Weight> weights_;
  std::map<Elem, std::size_t> position_;
  std::vector<double> cdf_;
};

/// Descriptor for A_t = {x : idx(x) <= t}.
struct InitialSegment {
  std::size_t threshold = 0;
  friend bool operator==(const InitialSegment&, const InitialSegment&) = default;
};

/// A finite subset of the domain: either an explicit set or an initial
/// segment of the domain's index order.
template <class Elem>
class FiniteHypothesis {
 public:
  FiniteHypothesis() : rep_(std::set<Elem>{}) {}

  static FiniteHypothesis segment(std::size_t t) { return FiniteHypothesis(InitialSegment{t}); }
  static FiniteHypothesis of(std::set<Elem> elems) { return FiniteHypothesis(std::move(elems)); }

  bool is_segment() const noexcept { return std::holds_alternative<InitialSegment>(rep_); }
  std::size_t threshold() const { return std::get<InitialSegment>(rep_).threshold; }
  const std::set<Elem>& explicit_elements() const { return std::get<std::set<Elem>>(rep_); }

  template <Indexer<Elem> Dom>
  bool contains(const Elem& x, const Dom& dom) const {
    if (is_segment()) return dom.contains(x) && dom.idx(x) <= threshold();
    return explicit_elements().count(x) != 0;
  }

  template <Indexer<Elem> Dom>
  std::size_t cardinality(const Dom& dom) const {
    if (is_segment()) return std::min(threshold(), dom.size());
    return explicit_elements().size();
  }

  /// Sorted idx values of the members; elements outside dom are skipped.
  template <Indexer<Elem> Dom>
  std::vector<std::size_t> index_description(const Dom& dom) const {
    std::vector<std::size_t> out;
    if (is_segment()) {
      const auto n = std::min(threshold(), dom.size());
      out.reserve(n);
      for (std::size_t i = 1; i <= n; ++i) out.push_back(i);
      return out;
    }
    for (const auto& x : explicit_elements())
      if (dom.contains(x)) out.push_back(dom.idx(x));
    std::sort(out.begin(), out.end());
    return out;
  }

  template <Indexer<Elem> Dom>
  std::set<Elem> expand(const Dom& dom) const {
    if (!is_segment()) return explicit_elements();
    std::set<Elem> out;
    const auto n = std::min(threshold(), dom.size());
    for (std::size_t i = 1; i <= n; ++i) out.insert(dom.at_index(i));
    return out;
  }

  friend bool operator==(const FiniteHypothesis&, const FiniteHypothesis&) = default;

 private:
  explicit FiniteHypothesis(InitialSegment s) : rep_(s) {}
  explicit FiniteHypothesis(std::set<Elem> s) : rep_(std::move(s)) {}

  std::variant<InitialSegment, std::set<Elem>> rep_;
};

/// P(F): total weight of the support points lying in F.
template <class Elem, class Weight, Indexer<Elem> Dom>
Weight mass(const FinSupportDist<Elem, Weight>& p, const FiniteHypothesis<Elem>& f,
            const Dom& dom) {
  Weight total = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (f.contains(p.support()[i], dom)) total += p.weights()[i];
  return total;
}

template <class Elem, class Weight>
Weight mass(const FinSupportDist<Elem, Weight>& p, const std::set<Elem>& f) {
  Weight total = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (f.count(p.support()[i])) total += p.weights()[i];
  return total;
}

/// Marker for the class of all finite subsets of the domain.
struct FiniteSubsetClass {};

/// Supremum of P(F) over the finite-subset class. The support itself is a
/// finite member of mass one.
template <class Elem, class Weight>
Weight opt_value(const FinSupportDist<Elem, Weight>&, FiniteSubsetClass = {}) {
  return Weight(1);
}

template <class Elem>
struct SampleSeq {
  std::vector<Elem> points;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// d i.i.d. draws from P using the stream keyed by (seed, trial).
template <class Elem, class Weight>
SampleSeq<Elem> draw_sample(const FinSupportDist<Elem, Weight>& p, std::size_t d,
                            std::uint64_t seed, std::uint64_t trial = 0) {
  SampleSeq<Elem> s{{}, seed, trial};
  s.points.reserve(d);
  CounterRng rng(seed, trial);
  for (std::size_t i = 0; i < d; ++i) s.points.push_back(p.quantile(rng.uniform()));
  return s;
}

/// A_{T(S)} with T(S) the largest index present in the sample.
template <class Elem, Indexer<Elem> Dom>
FiniteHypothesis<Elem> quantile_learn(const SampleSeq<Elem>& s, const Dom& dom) {
  if (s.empty()) throw std::invalid_argument("quantile_learn: empty sample has no maximum index");
  std::size_t t = 0;
  for (const auto& x : s.points) t = std::max<std::size_t>(t, dom.idx(x));
  return FiniteHypothesis<Elem>::segment(t);
}

/// Smallest d >= ln(1/delta) / -ln(1-epsilon), clamped to at least 1.
inline std::size_t sample_complexity(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw std::domain_error("sample_complexity: epsilon and delta must lie in (0,1)");
  const double ratio = std::log(1.0 / delta) / -std::log1p(-epsilon);
  // Relative slack absorbs rounding when the ratio is an exact integer.
  const double d = std::ceil(ratio * (1.0 - 1e-12));
  return d < 1.0 ? 1 : static_cast<std::size_t>(d);
}

/// 1 - (1-epsilon)^d: the quantile learner's success guarantee.
inline double quantile_bound(double epsilon, std::size_t d) {
  return 1.0 - std::pow(1.0 - epsilon, static_cast<double>(d));
}

struct GuaranteeReport {
  double epsilon = 0;
  double delta = 0;
  std::size_t d = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t successes = 0;
  double empirical_rate = 0;
  /// 3 sigma binomial half-width at the bound's success probability.
  double ci_halfwidth = 0;
  double bound = 0;

  bool meets_bound() const noexcept { return empirical_rate >= bound - ci_halfwidth; }
};

inline double three_sigma(double p, std::size_t trials) {
  return 3.0 * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

/// Runs `trials` independent episodes. Episode i draws S ~ P^d from stream
/// (seed, i), runs `learn(S)` and counts a success when score(hypothesis)
/// >= opt - epsilon. `score` maps a hypothesis to its mass under P.
template <class Elem, class Weight, class Learner, class Score>
  requires(!Indexer<std::remove_cvref_t<Score>, Elem>)
GuaranteeReport verify_guarantee(Learner&& learn, Score&& score,
                                 const FinSupportDist<Elem, Weight>& p, const Weight& epsilon,
                                 double delta, std::size_t d, std::size_t trials,
                                 std::uint64_t seed, unsigned threads = 0) {
  if (trials == 0) throw std::invalid_argument("verify_guarantee: trials must be >= 1");
  const Weight target = opt_value(p) - epsilon;
  std::vector<unsigned char> ok(trials, 0);
  parallel_for(
      trials,
      [&](std::size_t i) {
        auto s = draw_sample(p, d, seed, i);
        ok[i] = score(learn(s)) >= target ? 1 : 0;
      },
      threads);

  GuaranteeReport r;
  if constexpr (std::is_same_v<Weight, Rational>)
    r.epsilon = to_double(epsilon);
  else
    r.epsilon = static_cast<double>(epsilon);
  r.delta = delta;
  r.d = d;
  r.trials = trials;
  r.seed = seed;
  for (auto v : ok) r.successes += v;
  r.empirical_rate = static_cast<double>(r.successes) / static_cast<double>(trials);
  r.bound = quantile_bound(r.epsilon, d);
  r.ci_halfwidth = three_sigma(r.bound, trials);
  return r;
}

/// verify_guarantee for learners returning FiniteHypothesis over `dom`.
template <class Elem, class Weight, Indexer<Elem> Dom, class Learner>
GuaranteeReport verify_guarantee(Learner&& learn, const Dom& dom,
                                 const FinSupportDist<Elem, Weight>& p, const Weight& epsilon,
                                 double delta, std::size_t d, std::size_t trials,
                                 std::uint64_t seed, unsigned threads = 0) {
  return verify_guarantee(
      std::forward<Learner>(learn),
      [&](const FiniteHypothesis<Elem>& h) { return mass(p, h, dom); }, p, epsilon, delta, d,
      trials, seed, threads);
}

}  // namespace plab

#endif  // PLAB_EMX_HPP
