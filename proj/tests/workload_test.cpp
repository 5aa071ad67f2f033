/*
 * Copyright 2026 The tenantsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "support.hpp"
#include "tenantsim/workload.hpp"

namespace tenantsim {
namespace {

bool has_issue(const std::vector<ValidationIssue>& issues, ErrorKind kind) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.kind == kind; });
}

DnnGraph single(const std::string& id, LayerShape l) {
  DnnGraph g;
  g.dnn_id = id;
  g.layers = {l};
  return g;
}

TEST(OprCount, AllOnes) { EXPECT_EQ(opr_count(LayerShape{}), 1); }

TEST(OprCount, SmallConv) {
  EXPECT_EQ(opr_count(LayerShape::conv(2, 1, 3, 2, 2, 4, 4)), 384);
  EXPECT_EQ(opr_count(LayerShape::conv(2, 2, 3, 2, 2, 4, 4)), 768);
}

TEST(OprCount, OverflowThrows) {
  LayerShape l = LayerShape::conv(1 << 20, 1 << 20, 1 << 20, 1, 1, 1 << 20, 1 << 20);
  try {
    (void)opr_count(l);
    FAIL() << "expected Overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
}

TEST(OprCount, MonotoneInEveryField) {
  testing::Gen gen(11);
  for (int i = 0; i < 500; ++i) {
    const LayerShape l = gen.layer();
    const std::int64_t base = opr_count(l);
    for (auto field : {&LayerShape::M, &LayerShape::N, &LayerShape::C, &LayerShape::R,
                       &LayerShape::S, &LayerShape::H, &LayerShape::W}) {
      LayerShape bigger = l;
      bigger.*field += 1;
      EXPECT_GT(opr_count(bigger), base);
    }
  }
}

TEST(Validate, SingleLayerAccepted) {
  Workload w{{single("a", LayerShape{})}};
  w.dnns[0].edges = {};
  EXPECT_TRUE(validate_workload(w).empty());
}

TEST(Validate, TwoCycleRejected) {
  Workload w{{single("a", LayerShape{})}};
  w.dnns[0].layers.push_back(LayerShape{});
  w.dnns[0].edges = {{0, 1}, {1, 0}};
  EXPECT_TRUE(has_issue(validate_workload(w), ErrorKind::CycleInPrecedence));
}

TEST(Validate, ShapeInconsistent) {
  LayerShape l = LayerShape::conv(1, 1, 1, 2, 1, 4, 1);
  l.P = 2;
  Workload w{{single("a", l)}};
  const auto issues = validate_workload(w);
  ASSERT_TRUE(has_issue(issues, ErrorKind::ShapeInconsistent));
  const auto it = std::find_if(issues.begin(), issues.end(), [](const ValidationIssue& i) {
    return i.kind == ErrorKind::ShapeInconsistent;
  });
  EXPECT_NE(it->message.find('3'), std::string::npos) << it->message;
}

TEST(Validate, DuplicateIdsEmptyAndNoLayers) {
  EXPECT_TRUE(has_issue(validate_workload(Workload{}), ErrorKind::EmptyWorkload));
  Workload dup{{single("a", LayerShape{}), single("a", LayerShape{})}};
  EXPECT_TRUE(has_issue(validate_workload(dup), ErrorKind::DuplicateDnnId));
  DnnGraph empty;
  empty.dnn_id = "e";
  EXPECT_TRUE(has_issue(validate_workload(Workload{{empty}}), ErrorKind::NoLayers));
}

TEST(Validate, FieldChecks) {
  LayerShape zero;
  zero.M = 0;
  EXPECT_TRUE(has_issue(validate_workload(Workload{{single("a", zero)}}), ErrorKind::InvalidField));
  LayerShape big = LayerShape::conv(1, 1, 1, 5, 1, 4, 1);
  big.P = 1;
  EXPECT_TRUE(has_issue(validate_workload(Workload{{single("a", big)}}),
                        ErrorKind::FilterExceedsInput));
  Workload edge{{single("a", LayerShape{})}};
  edge.dnns[0].edges = {{0, 3}};
  EXPECT_TRUE(has_issue(validate_workload(edge), ErrorKind::EdgeOutOfRange));
  Workload late{{single("a", LayerShape{})}};
  late.dnns[0].arrival_time = -1;
  EXPECT_TRUE(has_issue(validate_workload(late), ErrorKind::InvalidField));
}

TEST(Validate, CollectsEveryIssue) {
  LayerShape zero;
  zero.C = 0;
  Workload w{{single("a", zero), single("a", LayerShape{})}};
  const auto issues = validate_workload(w);
  EXPECT_TRUE(has_issue(issues, ErrorKind::InvalidField));
  EXPECT_TRUE(has_issue(issues, ErrorKind::DuplicateDnnId));
  try {
    (void)validated(w);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.issues().size(), issues.size());
  }
}

TEST(Validate, Idempotent) {
  testing::Gen gen(5);
  for (int i = 0; i < 200; ++i) {
    Workload w = gen.workload();
    if (gen.range(0, 3) == 0) w.dnns[0].layers[0].P += 1;
    const auto first = validate_workload(w);
    if (first.empty()) {
      const Workload v = validated(w);
      EXPECT_EQ(v, w);
      EXPECT_TRUE(validate_workload(v).empty());
    } else {
      EXPECT_EQ(validate_workload(w).size(), first.size());
    }
  }
}

TEST(Graph, TopologicalOrderPrefersLowIndex) {
  DnnGraph g;
  g.dnn_id = "g";
  g.layers.resize(4);
  g.edges = {{2, 0}, {3, 1}};
  const std::vector<std::size_t> expected{2, 0, 3, 1};
  EXPECT_EQ(g.topological_order(), expected);
  EXPECT_EQ(g.predecessors(0), std::vector<std::size_t>{2});
  EXPECT_EQ(g.successors(3), std::vector<std::size_t>{1});
}

TEST(Load, SampleFileHasSeveralDnns) {
  const Workload w = load_workload_file(TENANTSIM_DATA_DIR "/sample_workload.json");
  EXPECT_GE(w.dnns.size(), 2u);
  EXPECT_TRUE(validate_workload(w).empty());
}

TEST(Load, EmptyFileIsParseError) {
  try {
    (void)load_workload_file(TENANTSIM_FIXTURE_DIR "/empty.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(Load, UnknownFieldNamed) {
  try {
    (void)load_workload_file(TENANTSIM_FIXTURE_DIR "/unknown_field.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("'K'"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("dnns[0].layers[0]"), std::string::npos);
  }
}

TEST(Load, CyclicFileRejected) {
  EXPECT_THROW((void)load_workload_file(TENANTSIM_FIXTURE_DIR "/cyclic.json"), ValidationError);
}

TEST(Load, MissingEdgesBecomeChainAndPQDerived) {
  const Workload w = parse_workload(
      R"({"dnns":[{"dnn_id":"x","arrival_time":3,"layers":[
          {"M":2,"N":1,"C":3,"R":2,"S":2,"H":4,"W":4},
          {"M":1,"N":1,"C":2,"R":1,"S":1,"H":3,"W":3}]}]})");
  EXPECT_EQ(w.dnns[0].edges, chain_edges(2));
  EXPECT_EQ(w.dnns[0].layers[0].P, 3);
  EXPECT_EQ(w.dnns[0].layers[0].Q, 3);
  EXPECT_EQ(w.dnns[0].arrival_time, 3);
}

TEST(Load, MalformedJsonIsParseError) {
  try {
    (void)parse_workload("{\"dnns\": [");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(Load, SaveLoadRoundTrip) {
  testing::Gen gen(21);
  for (int i = 0; i < 200; ++i) {
    const Workload w = gen.workload();
    const std::string text = save_workload(w);
    std::istringstream in(text);
    const Workload back = load_workload(in);
    EXPECT_EQ(back, w);
    EXPECT_EQ(save_workload(back), text);
  }
}

}  // namespace
}  // namespace tenantsim
