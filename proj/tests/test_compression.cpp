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


#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "plab/compression.hpp"

using plab::FiniteHypothesis;
using plab::IndexedDomain;
using plab::Rational;

namespace {

using Dom = IndexedDomain<std::string>;
using Hyp = FiniteHypothesis<std::string>;

Dom labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("y" + std::to_string(i));
  return Dom(out);
}

// Random nonempty subset of the domain, as a vector of labels.
std::vector<std::string> random_subset(plab::CounterRng& rng, const Dom& dom) {
  std::vector<std::string> f;
  while (f.empty())
    for (const auto& x : dom.labels())
      if (rng.uniform() < 0.3) f.push_back(x);
  return f;
}

}  // namespace

TEST(ReconstructSegment, Examples) {
  auto dom = labels(10);
  auto h = plab::reconstruct_segment(std::string("y5"), dom);
  EXPECT_EQ(h.expand(dom), (std::set<std::string>{"y1", "y2", "y3", "y4", "y5"}));
  EXPECT_EQ(plab::reconstruct_segment(std::string("y1"), dom).expand(dom), (std::set<std::string>{"y1"}));
  for (const auto& x : dom.labels()) {
    auto s = plab::reconstruct_segment(x, dom);
    EXPECT_EQ(s.cardinality(dom), dom.idx(x));
    EXPECT_TRUE(s.contains(x, dom));
  }
  EXPECT_THROW(plab::reconstruct_segment(std::string("q"), dom), std::out_of_range);
}

TEST(CompressTwoToOne, Examples) {
  auto dom = labels(10);
  EXPECT_EQ(plab::compress_two_to_one(std::string("y7"), std::string("y3"), dom), "y7");
  EXPECT_EQ(plab::compress_two_to_one(std::string("y3"), std::string("y7"), dom), "y7");
  EXPECT_EQ(plab::compress_two_to_one(std::string("y2"), std::string("y2"), dom), "y2");
  auto eta = plab::reconstruct_segment(std::string("y7"), dom);
  EXPECT_TRUE(eta.contains("y3", dom) && eta.contains("y7", dom));
}

TEST(CompressTwoToOne, RandomPairsAlwaysCovered) {
  auto dom = labels(40);
  auto scheme = plab::initial_segment_scheme<std::string>(dom);
  plab::CounterRng rng(31);
  for (int i = 0; i < 1000; ++i) {
    auto f = random_subset(rng, dom);
    const auto& a = f[rng.below(f.size())];
    const auto& b = f[rng.below(f.size())];
    auto kept = plab::compress_two_to_one(a, b, dom);
    auto eta = plab::reconstruct_segment(kept, dom);
    ASSERT_TRUE(eta.contains(a, dom) && eta.contains(b, dom));
    std::vector<std::string> pair{a, b};
    ASSERT_TRUE(plab::find_covering_subtuple(scheme, std::span<const std::string>(pair), dom).has_value());
  }
}

TEST(RequiredN, OneGives134) {
  EXPECT_EQ(plab::required_n(1), 134u);
  EXPECT_TRUE(plab::check_sample_size(134, 1).all());
  auto c = plab::check_sample_size(133, 1);
  EXPECT_TRUE(c.ratio);
  EXPECT_TRUE(c.opt_tail);
  EXPECT_FALSE(c.union_bound);
}

TEST(RequiredN, BoundaryMinimalityAgainstOracle) {
  for (std::size_t m = 1; m <= 8; ++m) {
    const auto n = plab::required_n(m);
    EXPECT_EQ(n, oracle::required_n_longdouble(m)) << m;
    EXPECT_TRUE(plab::check_sample_size(n, m).all());
    EXPECT_FALSE(plab::check_sample_size(n - 1, m).all());
  }
}

TEST(RequiredN, RejectsBadAlpha) {
  EXPECT_THROW(plab::required_n(1, Rational(0)), std::domain_error);
  EXPECT_THROW(plab::required_n(1, Rational(1)), std::domain_error);
}

TEST(CompressionLearner, NestedCandidatesGiveTheQuantileOutput) {
  auto dom = labels(20);
  auto scheme = plab::initial_segment_scheme<std::string>(dom);
  auto p = plab::FinSupportDist<std::string>::uniform(dom.labels());
  for (std::uint64_t t = 0; t < 300; ++t) {
    auto s = plab::draw_sample(p, 12, 8, t);
    auto h = plab::compression_learner(scheme, 12, s, dom);
    auto q = plab::quantile_learn(s, dom);
    ASSERT_EQ(h, q);
    // Argmax: no candidate has more mass.
    for (const auto& x : s.points)
      ASSERT_LE(plab::mass(p, plab::reconstruct_segment(x, dom), dom), plab::mass(p, h, dom));
  }
}

TEST(CompressionLearner, TieBreakPrefersLargerSet) {
  auto dom = labels(5);
  // Two explicit candidates each hit both points; the larger one wins.
  plab::CompressionScheme<std::string> scheme{2, 1, [](std::span<const std::string> kept) {
                                                if (kept[0] == "y1") return Hyp::of({"y1", "y2"});
                                                return Hyp::of({"y1", "y2", "y5"});
                                              }};
  plab::SampleSeq<std::string> s{{"y1", "y2"}, 0, 0};
  EXPECT_EQ(plab::compression_learner(scheme, 2, s, dom), Hyp::of({"y1", "y2", "y5"}));
}

TEST(CompressionLearner, TieBreakThenLexicographic) {
  auto dom = labels(5);
  plab::CompressionScheme<std::string> scheme{2, 1, [](std::span<const std::string> kept) {
                                                if (kept[0] == "y1") return Hyp::of({"y1", "y2", "y4"});
                                                return Hyp::of({"y1", "y2", "y3"});
                                              }};
  plab::SampleSeq<std::string> s{{"y1", "y2"}, 0, 0};
  EXPECT_EQ(plab::compression_learner(scheme, 2, s, dom), Hyp::of({"y1", "y2", "y3"}));
}

TEST(CompressionLearner, Errors) {
  auto dom = labels(5);
  auto scheme = plab::initial_segment_scheme<std::string>(dom);
  plab::SampleSeq<std::string> one{{"y1"}, 0, 0};
  EXPECT_THROW(plab::compression_learner(scheme, 1, one, dom), std::invalid_argument);
  plab::SampleSeq<std::string> three{{"y1", "y2", "y3"}, 0, 0};
  EXPECT_THROW(plab::compression_learner(scheme, 2, three, dom), std::invalid_argument);
}

TEST(CompressionLearner, MonteCarloAtRequiredN) {
  auto dom = labels(20);
  auto scheme = plab::initial_segment_scheme<std::string>(dom);
  auto p = plab::FinSupportDist<std::string>::uniform(dom.labels());
  const auto n = plab::required_n(1);
  const std::size_t trials = 2000;
  std::size_t ok = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto h = plab::compression_learner(scheme, n, plab::draw_sample(p, n, 17, t), dom);
    ok += plab::mass(p, h, dom) >= Rational(2, 3) ? 1 : 0;
  }
  EXPECT_GE(ok / double(trials), 2.0 / 3 - plab::three_sigma(2.0 / 3, trials));
}

TEST(LearnerToCompression, SizesAndEnumeration) {
  auto dom = labels(12);
  std::size_t calls = 0;
  auto learn = [&](const plab::SampleSeq<std::string>& s) {
    ++calls;
    return plab::quantile_learn(s, dom);
  };
  auto scheme = plab::learner_to_compression<std::string>(learn, 3, dom);
  EXPECT_EQ(scheme.m_out, 5u);
  EXPECT_EQ(scheme.m_in, 6u);
  std::vector<std::string> kept{"y2", "y9", "y4", "y1", "y3"};
  auto h = scheme.reconstruct(std::span<const std::string>(kept));
  EXPECT_EQ(calls, 125u);
  EXPECT_EQ(h.cardinality(dom), 9u);
  EXPECT_EQ(plab::learner_to_compression<std::string>(learn, 1, dom).m_out, 2u);
  EXPECT_EQ(plab::learner_to_compression<std::string>(learn, 4, dom).m_out, 6u);
  EXPECT_THROW(plab::learner_to_compression<std::string>(learn, 0, dom), std::invalid_argument);
}

TEST(LearnerToCompression, DroppingANonMaxPointStillCovers) {
  auto dom = labels(12);
  auto learn = [&](const plab::SampleSeq<std::string>& s) { return plab::quantile_learn(s, dom); };
  auto scheme = plab::learner_to_compression<std::string>(learn, 3, dom);
  std::vector<std::string> tuple{"y3", "y8", "y1", "y5", "y2", "y6"};
  for (std::size_t drop = 0; drop < tuple.size(); ++drop) {
    if (tuple[drop] == "y8") continue;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < tuple.size(); ++i)
      if (i != drop) kept.push_back(tuple[i]);
    auto h = scheme.reconstruct(std::span<const std::string>(kept));
    for (const auto& x : tuple) EXPECT_TRUE(h.contains(x, dom)) << drop;
  }
}

TEST(LearnerToCompression, LeaveOneOutCoverageOnRandomInstances) {
  auto dom = labels(25);
  auto learn = [&](const plab::SampleSeq<std::string>& s) { return plab::quantile_learn(s, dom); };
  auto scheme = plab::learner_to_compression<std::string>(learn, 3, dom);
  plab::CounterRng rng(404);
  for (int inst = 0; inst < 500; ++inst) {
    auto f = random_subset(rng, dom);
    std::vector<std::string> tuple;
    for (int i = 0; i < 6; ++i) tuple.push_back(f[rng.below(f.size())]);
    auto pos = plab::find_covering_subtuple(scheme, std::span<const std::string>(tuple), dom);
    ASSERT_TRUE(pos.has_value()) << inst;
    // Reconstructions never reach past the largest kept index.
    std::vector<std::string> kept;
    std::size_t top = 0;
    for (auto i : *pos) {
      kept.push_back(tuple[i]);
      top = std::max(top, dom.idx(tuple[i]));
    }
    auto h = scheme.reconstruct(std::span<const std::string>(kept));
    ASSERT_LE(h.cardinality(dom), top);
  }
}
