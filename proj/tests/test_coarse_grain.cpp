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


#include <cmath>
#include <map>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "plab/coarse_grain.hpp"
#include "plab/random.hpp"

using plab::FinSupportDist;
using plab::Rational;
using plab::UniformBins;

namespace {

using XDist = FinSupportDist<double>;
using Bin = std::int64_t;
using Entries = std::vector<std::pair<std::string, std::string>>;

// n distinct atoms on a 1/4096 grid with random positive integer weights.
XDist random_atoms(plab::CounterRng& rng, std::size_t n) {
  std::set<double> pts;
  while (pts.size() < n) pts.insert(static_cast<double>(rng.below(4096)) / 4096.0);
  std::vector<long long> raw;
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    raw.push_back(1 + static_cast<long long>(rng.below(97)));
    total += raw.back();
  }
  std::vector<Rational> w;
  for (auto r : raw) w.emplace_back(r, total);
  return XDist(std::vector<double>(pts.begin(), pts.end()), w);
}

Bin bin_of(double x, unsigned bits) {
  const double scaled = x * std::pow(2.0, bits);
  const auto top = (Bin{1} << bits) - 1;
  return std::min<Bin>(top, static_cast<Bin>(scaled));
}

}  // namespace

TEST(UniformBins, FloorAndClamp) {
  UniformBins pi(4);
  EXPECT_EQ(pi(0.0), 0);
  EXPECT_EQ(pi(0.12), 1);
  EXPECT_EQ(pi(0.58), 9);
  EXPECT_EQ(pi(1.0), 15);
  EXPECT_EQ(pi(0.9999), 15);
  EXPECT_THROW(pi(-0.01), std::domain_error);
  EXPECT_THROW(pi(1.5), std::domain_error);
  EXPECT_THROW(pi(std::nan("")), std::domain_error);
  EXPECT_EQ(pi.output_domain().size(), 16u);
  EXPECT_EQ(UniformBins(0)(0.7), 0);
  EXPECT_THROW(UniformBins(53), std::invalid_argument);
}

TEST(UniformBins, FinerBinsNest) {
  plab::CounterRng rng(11);
  for (int i = 0; i < 20000; ++i) {
    const double x = rng.uniform();
    for (unsigned l = 1; l <= 12; ++l)
      for (unsigned k = 1; k <= 4; ++k) ASSERT_EQ(UniformBins(l + k)(x) >> k, UniformBins(l)(x)) << x;
  }
}

TEST(Pushforward, FourBitExample) {
  auto p = XDist::uniform({0.12, 0.17, 0.58});
  auto q = plab::pushforward(p, UniformBins(4));
  ASSERT_EQ(q.size(), 3u);
  EXPECT_EQ(q.support(), (std::vector<Bin>{1, 2, 9}));
  for (const auto& w : q.weights()) EXPECT_EQ(w, Rational(1, 3));
}

TEST(Pushforward, MergesCellsAndKeepsNormalization) {
  XDist p({0.01, 0.02, 0.5, 0.99}, {Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(4, 10)});
  auto q = plab::pushforward(p, UniformBins(1));
  EXPECT_EQ(q.support(), (std::vector<Bin>{0, 1}));
  EXPECT_EQ(q.weight_of(0), Rational(3, 10));
  EXPECT_EQ(q.weight_of(1), Rational(7, 10));
}

TEST(Pushforward, InjectiveMapRelabels) {
  FinSupportDist<std::string> p({"a", "b", "c"}, {Rational(1, 2), Rational(1, 3), Rational(1, 6)});
  plab::TableMap pi({{"a", "A"}, {"b", "B"}, {"c", "C"}});
  auto q = plab::pushforward(p, pi);
  EXPECT_EQ(q.support(), (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(q.weights(), p.weights());
}

TEST(Pushforward, OutsideDomainIsAnError) {
  FinSupportDist<std::string> p({"a", "z"}, {Rational(1, 2), Rational(1, 2)});
  plab::TableMap pi(Entries{{"a", "A"}});
  EXPECT_THROW(plab::pushforward(p, pi), std::domain_error);
}

TEST(TableMap, OrderAndConflicts) {
  plab::TableMap pi({{"x1", "B"}, {"x2", "A"}, {"x3", "B"}});
  EXPECT_EQ(pi.output_domain().idx("B"), 1u);
  EXPECT_EQ(pi.output_domain().idx("A"), 2u);
  EXPECT_THROW(plab::TableMap(Entries{{"x", "A"}, {"x", "B"}}), std::invalid_argument);
  EXPECT_NO_THROW(plab::TableMap(Entries{{"x", "A"}, {"x", "A"}}));
}

TEST(Pullback, EmptyAndFullCells) {
  plab::CounterRng rng(5);
  auto p = random_atoms(rng, 12);
  UniformBins pi(6);
  EXPECT_EQ(plab::mass(p, plab::pullback(std::set<Bin>{}, pi)), Rational(0));
  std::set<Bin> hit;
  for (double x : p.support()) hit.insert(pi(x));
  EXPECT_EQ(plab::mass(p, plab::pullback(hit, pi)), Rational(1));
  EXPECT_EQ(plab::mass(p, plab::pullback(plab::FiniteHypothesis<Bin>::segment(64), pi)), Rational(1));
}

TEST(Pullback, MassIdentityIsExact) {
  plab::CounterRng rng(2026);
  for (int inst = 0; inst < 300; ++inst) {
    auto p = random_atoms(rng, 20);
    const unsigned bits = 1 + static_cast<unsigned>(rng.below(10));
    UniformBins pi(bits);
    std::set<Bin> f;
    const auto cells = std::size_t{1} << bits;
    for (std::size_t k = 0, n = rng.below(cells) + 1; k < n; ++k) f.insert(static_cast<Bin>(rng.below(cells)));

    // Left side summed over X by hand, right side from the pushforward.
    Rational lhs = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (f.count(bin_of(p.support()[i], bits))) lhs += p.weights()[i];
    auto q = plab::pushforward(p, pi);
    Rational rhs = 0;
    for (Bin y : f) rhs += q.weight_of(y);
    ASSERT_EQ(lhs, rhs);
    ASSERT_EQ(plab::mass(p, plab::pullback(f, pi)), rhs);
    ASSERT_EQ(plab::mass(q, f), rhs);
  }
}

TEST(CoarseLearn, SingleCellSupport) {
  XDist p({0.5, 0.501, 0.502}, {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  UniformBins pi(4);
  auto s = plab::draw_sample(p, 3, 1);
  auto h = plab::coarse_learn(s, pi, 1.0 / 3, 1.0 / 3);
  EXPECT_EQ(h.cells().threshold(), 9u);  // bin 8 has index 9
  EXPECT_EQ(plab::mass(p, h), Rational(1));
  EXPECT_FALSE(h.contains(0.6));
  EXPECT_TRUE(h.contains(0.0));
}

TEST(CoarseLearn, ComposesDiscretizeAndQuantile) {
  UniformBins pi(2);
  // Bins 2, 0, 1 have indices 3, 1, 2.
  plab::SampleSeq<double> s{{0.6, 0.1, 0.3}, 0, 0};
  auto h = plab::coarse_learn(s, pi, 1.0 / 3, 1.0 / 3);
  EXPECT_EQ(h.cells().threshold(), 3u);
  EXPECT_TRUE(h.contains(0.74));
  EXPECT_FALSE(h.contains(0.75));
}

TEST(CoarseLearn, Errors) {
  UniformBins pi(3);
  EXPECT_THROW(plab::coarse_learn(plab::SampleSeq<double>{}, pi, 0.3, 0.3), std::invalid_argument);
  plab::SampleSeq<double> two{{0.1, 0.2}, 0, 0};
  EXPECT_THROW(plab::coarse_learn(two, pi, 1.0 / 3, 1.0 / 3), std::invalid_argument);
  plab::SampleSeq<double> bad{{0.1, 0.2, 2.0}, 0, 0};
  EXPECT_THROW(plab::coarse_learn(bad, pi, 1.0 / 3, 1.0 / 3), std::domain_error);
}

TEST(CoarseLearn, MassMatchesDiscreteEpisode) {
  plab::CounterRng rng(77);
  for (int inst = 0; inst < 20; ++inst) {
    auto p = random_atoms(rng, 10);
    UniformBins pi(8);
    auto q = plab::pushforward(p, pi);
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
      auto s = plab::draw_sample(p, 3, 9, trial);
      auto h = plab::coarse_learn(s, pi, 1.0 / 3, 1.0 / 3);
      // Discrete side: largest bin seen, then its initial segment's mass under q.
      Bin top = 0;
      for (double x : s.points) top = std::max(top, bin_of(x, 8));
      Rational discrete = 0;
      for (std::size_t i = 0; i < q.size(); ++i)
        if (q.support()[i] <= top) discrete += q.weights()[i];
      ASSERT_EQ(plab::mass(p, h), discrete);
    }
  }
}

TEST(CoarseLearn, MonteCarloGuaranteeTransfers) {
  plab::CounterRng rng(123);
  auto p = random_atoms(rng, 10);
  UniformBins pi(8);
  const std::size_t trials = 10000;
  std::size_t ok = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto h = plab::coarse_learn(plab::draw_sample(p, 3, 4, t), pi, 1.0 / 3, 1.0 / 3);
    ok += plab::mass(p, h) >= Rational(2, 3) ? 1 : 0;
  }
  const double bound = 1 - std::pow(2.0 / 3, 3);
  EXPECT_GE(ok / double(trials), bound - plab::three_sigma(bound, trials));
}
