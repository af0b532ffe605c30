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

/// \file coarse_grain.hpp
/// Finite-precision interfaces pi: X -> Y. A learner that only sees pi(x)
/// works on the pushforward pi_#P, and its finite label sets F are read back
/// on X as the cell unions pi^{-1}(F). With exact weights,
/// P(pi^{-1}(F)) == (pi_#P)(F) holds as an identity.

#ifndef PLAB_COARSE_GRAIN_HPP
#define PLAB_COARSE_GRAIN_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plab/emx.hpp"

namespace plab {

/// x in [0,1] -> floor(2^bits * x), clamped into [0, 2^bits - 1].
class UniformBins {
 public:
  using input_type = double;
  using output_type = std::int64_t;
  using domain_type = BinDomain;

  static constexpr unsigned kMaxBits = 52;

  explicit UniformBins(unsigned bits) : bits_(check_bits(bits)), domain_(std::int64_t{1} << bits) {}

  unsigned bits() const noexcept { return bits_; }

  bool in_domain(double x) const noexcept { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

  std::int64_t operator()(double x) const {
    if (!in_domain(x)) throw std::domain_error("UniformBins: point outside [0,1]");
    const auto top = (std::int64_t{1} << bits_) - 1;
    const auto b = static_cast<std::int64_t>(std::floor(std::ldexp(x, static_cast<int>(bits_))));
    return b > top ? top : b;
  }

  const BinDomain& output_domain() const noexcept { return domain_; }

 private:
  static unsigned check_bits(unsigned bits) {
    if (bits > kMaxBits) throw std::invalid_argument("UniformBins: too many bits");
    return bits;
  }

  unsigned bits_;
  BinDomain domain_;
};

/// Explicit element -> label table. Output labels are indexed in order of
/// first appearance in the table.
class TableMap {
 public:
  using input_type = std::string;
  using output_type = std::string;
  using domain_type = IndexedDomain<std::string>;

  explicit TableMap(const std::vector<std::pair<std::string, std::string>>& entries) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& [in, out] : entries) {
      auto [it, inserted] = table_.emplace(in, out);
      if (!inserted && it->second != out)
        throw std::invalid_argument("TableMap: input '" + in + "' mapped twice");
      if (seen.insert(out).second) order.push_back(out);
    }
    domain_ = IndexedDomain<std::string>(std::move(order));
  }

  bool in_domain(const std::string& x) const { return table_.count(x) != 0; }

  const std::string& operator()(const std::string& x) const {
    auto it = table_.find(x);
    if (it == table_.end()) throw std::domain_error("TableMap: '" + x + "' outside the table");
    return it->second;
  }

  const IndexedDomain<std::string>& output_domain() const noexcept { return domain_; }
  const std::map<std::string, std::string>& entries() const noexcept { return table_; }

 private:
  std::map<std::string, std::string> table_;
  IndexedDomain<std::string> domain_;
};

template <class Map>
concept CoarseGraining = requires(const Map& m, const typename Map::input_type& x) {
  typename Map::output_type;
  { m(x) } -> std::convertible_to<typename Map::output_type>;
  { m.in_domain(x) } -> std::convertible_to<bool>;
  m.output_domain();
};

/// pi_#P: Q(y) = sum of P(x) over x with pi(x) = y. Support ordered by idx(y).
template <CoarseGraining Map, class Weight>
FinSupportDist<typename Map::output_type, Weight> pushforward(
    const FinSupportDist<typename Map::input_type, Weight>& p, const Map& pi) {
  using Out = typename Map::output_type;
  const auto& ydom = pi.output_domain();
  std::map<std::size_t, std::pair<Out, Weight>> cells;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& x = p.support()[i];
    if (!pi.in_domain(x)) throw std::domain_error("pushforward: support point outside the map's domain");
    Out y = pi(x);
    auto [it, inserted] = cells.try_emplace(ydom.idx(y), y, Weight(0));
    it->second.second += p.weights()[i];
  }
  std::vector<Out> support;
  std::vector<Weight> weights;
  support.reserve(cells.size());
  weights.reserve(cells.size());
  for (auto& [rank, cell] : cells) {
    support.push_back(std::move(cell.first));
    weights.push_back(std::move(cell.second));
  }
  return FinSupportDist<Out, Weight>(std::move(support), std::move(weights));
}

/// pi^{-1}(F) for a finite label set F, kept symbolically as (F, pi).
template <CoarseGraining Map>
class PulledBackHypothesis {
 public:
  using input_type = typename Map::input_type;
  using output_type = typename Map::output_type;

  PulledBackHypothesis(FiniteHypothesis<output_type> cells, Map pi)
      : cells_(std::move(cells)), pi_(std::move(pi)) {}

  bool contains(const input_type& x) const {
    return pi_.in_domain(x) && cells_.contains(pi_(x), pi_.output_domain());
  }

  const FiniteHypothesis<output_type>& cells() const noexcept { return cells_; }
  const Map& map() const noexcept { return pi_; }

 private:
  FiniteHypothesis<output_type> cells_;
  Map pi_;
};

template <CoarseGraining Map>
PulledBackHypothesis<Map> pullback(FiniteHypothesis<typename Map::output_type> f, const Map& pi) {
  return PulledBackHypothesis<Map>(std::move(f), pi);
}

template <CoarseGraining Map>
PulledBackHypothesis<Map> pullback(std::set<typename Map::output_type> f, const Map& pi) {
  return PulledBackHypothesis<Map>(FiniteHypothesis<typename Map::output_type>::of(std::move(f)),
                                   pi);
}

/// P(pi^{-1}(F)), summed directly over the support of P on X.
template <CoarseGraining Map, class Weight>
Weight mass(const FinSupportDist<typename Map::input_type, Weight>& p,
            const PulledBackHypothesis<Map>& h) {
  Weight total = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (h.contains(p.support()[i])) total += p.weights()[i];
  return total;
}

/// Applies pi pointwise; the result keeps the sample's seed and trial.
template <CoarseGraining Map>
SampleSeq<typename Map::output_type> discretize(const SampleSeq<typename Map::input_type>& s,
                                                const Map& pi) {
  SampleSeq<typename Map::output_type> y{{}, s.seed, s.trial};
  y.points.reserve(s.size());
  for (const auto& x : s.points) y.points.push_back(pi(x));
  return y;
}

/// Default discrete subroutine: the quantile learner on Y's index.
struct QuantileSubroutine {
  template <class Elem, class Dom>
  FiniteHypothesis<Elem> operator()(const SampleSeq<Elem>& s, const Dom& dom) const {
    return quantile_learn(s, dom);
  }
};

/// Runs a discrete learner on pi(S) and returns the pullback of its output.
template <CoarseGraining Map, class Learner = QuantileSubroutine>
PulledBackHypothesis<Map> coarse_learn(const SampleSeq<typename Map::input_type>& s, const Map& pi,
                                       double epsilon, double delta, Learner&& learn = {}) {
  if (s.empty()) throw std::invalid_argument("coarse_learn: empty sample");
  if (s.size() < sample_complexity(epsilon, delta))
    throw std::invalid_argument("coarse_learn: sample shorter than sample_complexity(epsilon, delta)");
  auto y = discretize(s, pi);
  return pullback(learn(y, pi.output_domain()), pi);
}

}  // namespace plab

#endif  // PLAB_COARSE_GRAIN_HPP
