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


#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "plab/io.hpp"

using plab::Rational;
using plab::ValidationError;
using plab::io::Json;

namespace fs = std::filesystem;

TEST(IoDist, ExactWeightsFromStringsAndNumbers) {
  auto j = Json::parse(R"({"labels": ["a", "b", "c"], "weights": ["1/3", 0.5, "1/6"]})");
  auto v = plab::io::dist_from_json(j);
  const auto& p = std::get<plab::io::LabelDist>(v);
  EXPECT_EQ(p.weight_of("a"), Rational(1, 3));
  EXPECT_EQ(p.weight_of("b"), Rational(1, 2));
  // 0.1 is read as exactly 1/10.
  auto dec = Json::parse(R"({"labels": ["a", "b"], "weights": [0.1, "0.9"]})");
  EXPECT_EQ(std::get<plab::io::LabelDist>(plab::io::dist_from_json(dec)).weight_of("a"), Rational(1, 10));
  auto back = plab::io::dist_to_json(p);
  EXPECT_EQ(back["weights"][0], "1/3");
}

TEST(IoDist, FloatFallback) {
  auto j = Json::parse(R"({"labels": ["a", "b"], "weights": [0.3, 0.7], "exact": false})");
  auto v = plab::io::dist_from_json(j);
  EXPECT_NEAR(std::get<plab::io::LabelDistF>(v).weight_of("b"), 0.7, 1e-15);
}

TEST(IoDist, SchemaErrors) {
  for (const char* bad : {R"({"weights": ["1"]})", R"({"labels": ["a"], "weights": ["1/2", "1/2"]})",
                          R"({"labels": ["a", "b"], "weights": ["1/2", "1/3"]})", R"({"labels": ["a"], "weights": ["x"]})",
                          R"({"labels": [1], "weights": ["1"]})", R"({"labels": ["a", "a"], "weights": ["1/2", "1/2"]})",
                          R"([1, 2])"})
    EXPECT_THROW(plab::io::dist_from_json(Json::parse(bad)), ValidationError) << bad;
}

TEST(IoMap, BothKinds) {
  auto bins = plab::io::map_from_json(Json::parse(R"({"kind": "uniform_bins", "bits": 8})"));
  EXPECT_EQ(std::get<plab::UniformBins>(bins).bits(), 8u);
  auto table = plab::io::map_from_json(Json::parse(R"({"kind": "table", "entries": [["x", "A"], ["y", "A"]]})"));
  EXPECT_EQ(std::get<plab::TableMap>(table)("y"), "A");
  for (const char* bad : {R"({"kind": "nope"})", R"({"kind": "uniform_bins", "bits": -1})",
                          R"({"kind": "uniform_bins", "bits": 60})", R"({"kind": "table", "entries": [["x"]]})",
                          R"({"kind": "table", "entries": [["x", "A"], ["x", "B"]]})", R"({"bits": 3})"})
    EXPECT_THROW(plab::io::map_from_json(Json::parse(bad)), ValidationError) << bad;
}

TEST(IoMatrix, FlatNestedAndRealEntries) {
  auto flat = plab::io::matrix_from_json(Json::parse(R"({"dim": 2, "entries": [[0.5, 0], [0, -0.5], [0, 0.5], [0.5, 0]]})"), "m");
  EXPECT_EQ(flat(0, 1), plab::Complex(0, -0.5));
  EXPECT_EQ(flat(1, 0), plab::Complex(0, 0.5));
  auto nested = plab::io::matrix_from_json(Json::parse(R"({"dim": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]})"), "m");
  EXPECT_EQ(nested(0, 0), plab::Complex(1, 0));
  auto reals = plab::io::matrix_from_json(Json::parse(R"({"dim": 2, "entries": [[0.25, 0.25], [0.25, 0.75]]})"), "m");
  EXPECT_EQ(reals(1, 1), plab::Complex(0.75, 0));
  EXPECT_EQ(reals(0, 1), plab::Complex(0.25, 0));
  auto one = plab::io::matrix_from_json(Json::parse(R"({"dim": 1, "entries": [[1, 0]]})"), "m");
  EXPECT_EQ(one(0, 0), plab::Complex(1, 0));
  EXPECT_THROW(plab::io::matrix_from_json(Json::parse(R"({"dim": 2, "entries": [1, 0, 0]})"), "m"), ValidationError);
  EXPECT_THROW(plab::io::matrix_from_json(Json::parse(R"({"dim": 0, "entries": []})"), "m"), ValidationError);
}

TEST(IoQuantum, StatesAndPovmRoundTrip) {
  auto rho = plab::io::state_from_json(Json::parse(R"({"dim": 2, "entries": [[0.5, 0], [0.5, 0], [0.5, 0], [0.5, 0]]})"));
  EXPECT_NEAR(rho.matrix()(0, 1).real(), 0.5, 0);
  EXPECT_THROW(plab::io::state_from_json(Json::parse(R"({"dim": 2, "entries": [1, 0, 0, 1]})")), ValidationError);
  plab::Povm m({plab::CMatrix::Identity(2, 2) * 0.25, plab::CMatrix::Identity(2, 2) * 0.75}, {"a", "b"});
  auto j = plab::io::povm_to_json(m);
  auto back = plab::io::povm_from_json(j);
  EXPECT_EQ(back.labels(), m.labels());
  EXPECT_TRUE(back[1].isApprox(m[1]));
  auto broken = j;
  broken["elements"][1]["entries"][0] = Json::array({0.5, 0});
  EXPECT_THROW(plab::io::povm_from_json(broken), ValidationError);
}

TEST(IoTask, ParseValidateAndRoundTrip) {
  auto t = plab::io::task_from_json(Json::parse(R"({"thetas": ["a"], "hyps": ["x", "y"], "utility": [["1/2", 1]]})"));
  EXPECT_EQ(t.utility[0][0], Rational(1, 2));
  EXPECT_EQ(plab::io::task_to_json(t)["utility"][0][1], "1");
  EXPECT_THROW(plab::io::task_from_json(Json::parse(R"({"thetas": ["a"], "hyps": ["x"], "utility": [["3/2"]]})")),
               ValidationError);
  EXPECT_THROW(plab::io::task_from_json(Json::parse(R"({"thetas": ["a"], "hyps": ["x"]})")), ValidationError);
}

TEST(IoPolytope, RowsAndBuiltins) {
  auto task = plab::TaskSpec::identity(2);
  auto p = plab::io::polytope_from_json(
      Json::parse(R"({"rows": [{"coeffs": ["1", 0, 0, "-1"], "relation": "=", "rhs": "0"}]})"), task);
  EXPECT_EQ(p.rows.size(), 4u + 2u + 1u);
  EXPECT_EQ(p.rows.back().coeffs[3], Rational(-1));
  auto bare = plab::io::polytope_from_json(Json::parse(R"({"simplex": false, "rows": []})"), task);
  EXPECT_TRUE(bare.rows.empty());
  EXPECT_EQ(bare.variables.size(), 4u);
  auto ck = plab::io::polytope_from_json(Json::parse(R"({"builtin": "constant_kernel"})"), task);
  EXPECT_EQ(ck.rows.size(), 4u + 2u + 2u);

  plab::BellScenario s{2, 2, 2, 2};
  auto ns = plab::io::polytope_from_json(Json::parse(R"({"builtin": "no_signaling", "alphabets": [2, 2, 2, 2]})"),
                                         s.task_shape());
  EXPECT_EQ(ns.rows.size(), 28u);
  EXPECT_THROW(plab::io::polytope_from_json(Json::parse(R"({"builtin": "no_signaling", "alphabets": [2, 2, 2, 3]})"),
                                            s.task_shape()),
               ValidationError);
  for (const char* bad : {R"({"rows": [{"coeffs": [1], "relation": "=", "rhs": 0}]})",
                          R"({"rows": [{"coeffs": [1, 0, 0, 0], "relation": "<", "rhs": 0}]})",
                          R"({"rows": [{"coeffs": [1, 0, 0, 0], "relation": "="}]})", R"({"builtin": "cube"})"})
    EXPECT_THROW(plab::io::polytope_from_json(Json::parse(bad), task), ValidationError) << bad;
}

TEST(IoVerdict, LpAndSdp) {
  auto task = plab::TaskSpec::identity(2);
  auto poly = plab::simplex_polytope(task);
  auto r = plab::lp_feasible(poly, plab::build_pl_constraints(task, Rational(1, 2), Rational(1, 5)));
  auto j = plab::io::lp_verdict_to_json(r, poly);
  EXPECT_EQ(j["verdict"], "feasible");
  EXPECT_EQ(j["witness"].size(), 4u);
  EXPECT_EQ(j["residual"], "0");
  plab::SdpResult s;
  s.verdict = plab::SdpVerdict::Undetermined;
  s.residual = 0.25;
  auto js = plab::io::sdp_verdict_to_json(s);
  EXPECT_EQ(js["verdict"], "undetermined");
  EXPECT_FALSE(js.contains("witness"));
}

TEST(IoFiles, AtomicWriteAndMissingFile) {
  const auto dir = fs::temp_directory_path() / "plab_io_test";
  fs::remove_all(dir);
  const auto path = dir / "sub" / "r.json";
  plab::io::write_atomic(path, "{\"a\": 1}\n");
  EXPECT_EQ(plab::io::read_json_file(path)["a"], 1);
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
  plab::io::write_atomic(path, "{\"a\": 2}\n");
  EXPECT_EQ(plab::io::read_json_file(path)["a"], 2);
  EXPECT_THROW(plab::io::read_json_file(dir / "missing.json"), ValidationError);
  std::ofstream(dir / "broken.json") << "{not json";
  EXPECT_THROW(plab::io::read_json_file(dir / "broken.json"), ValidationError);
  fs::remove_all(dir);
}
