// Copyright 2026 The urdfplus Authors
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
#include <array>
#include <random>
#include <set>

#include "doctest.h"
#include "support.h"
#include "urdfplus/error.h"
#include "urdfplus/graph.h"

namespace urdfplus {
namespace {

using testing::LoadModel;
using testing::ModelsDir;
using Edge = std::pair<int, int>;

std::multiset<Edge> EdgeSet(const Digraph& d) {
  return {d.edges.begin(), d.edges.end()};
}

// r-a-b-c with a second branch a-d-e.
ConnectivityGraph SmallTree(std::vector<LoopEdge> loops = {}) {
  return ConnectivityGraph({"r", "a", "b", "c", "d", "e"}, {-1, 0, 1, 2, 1, 4},
                           std::move(loops));
}

TEST_CASE("connectivity graph rejects irregular numbering") {
  CHECK_THROWS_AS(ConnectivityGraph({"r", "a"}, {0, 0}, {}), Error);
  CHECK_THROWS_AS(ConnectivityGraph({"r", "a", "b"}, {-1, 2, 0}, {}), Error);
  CHECK_THROWS_AS(ConnectivityGraph({"r", "a"}, {-1, 0}, {{"l", ClosureKind::kLoop, 0, 7}}),
                  Error);
}

TEST_CASE("ancestors and path subchains") {
  const ConnectivityGraph g = SmallTree();
  CHECK(g.IsAncestor(0, 5));
  CHECK(g.IsAncestor(3, 3));
  CHECK_FALSE(g.IsAncestor(2, 5));
  CHECK(NearestCommonAncestor(g, 3, 5) == 1);
  CHECK(NearestCommonAncestor(g, 2, 3) == 2);
  CHECK(NearestCommonAncestor(g, 0, 5) == 0);
  CHECK(PathSubchain(g, 3, 1) == std::vector<int>{3, 2});
  CHECK(PathSubchain(g, 4, 4).empty());
  try {
    PathSubchain(g, 3, 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotAnAncestor);
  }
}

TEST_CASE("dependency digraph of a single loop") {
  const ConnectivityGraph g = SmallTree({{"l", ClosureKind::kLoop, 3, 5}});
  const Digraph d = ConstraintDependencyDigraph(g);
  CHECK(d.num_nodes == 6);
  // Tree edges plus predecessor -> lowest successor-side body and back.
  CHECK(EdgeSet(d) == std::multiset<Edge>{{0, 1}, {1, 2}, {2, 3}, {1, 4},
                                        {4, 5}, {3, 4}, {5, 2}});
}

TEST_CASE("a loop onto an ancestor uses the populated side") {
  const ConnectivityGraph g = SmallTree({{"l", ClosureKind::kLoop, 1, 3}});
  const Digraph d = ConstraintDependencyDigraph(g);
  CHECK(EdgeSet(d) == std::multiset<Edge>{{0, 1}, {1, 2}, {2, 3}, {1, 4},
                                        {4, 5}, {1, 2}, {3, 2}});
  const auto sccs = StronglyConnectedComponents(d);
  CHECK(std::find(sccs.begin(), sccs.end(), std::vector<int>{2, 3}) != sccs.end());
}

TEST_CASE("belt dependency digraph") {
  const SystemGraphs s = BuildSystemGraphs(LoadModel(ModelsDir() / "belt.urdf"));
  CHECK(s.cg.names() == std::vector<std::string>{"thigh", "shank", "motor", "foot"});
  CHECK(EdgeSet(s.cdd) ==
        std::multiset<Edge>{{0, 1}, {0, 2}, {1, 3}, {3, 2}, {2, 1}});
  REQUIRE(s.lacg.num_aggregates() == 2);
  CHECK(s.lacg.aggregates[1].bodies == std::vector<int>{1, 2, 3});
  CHECK(s.lacg.aggregates[1].parent == 0);
  CHECK(s.lacg.aggregates[1].closures == std::vector<int>{0});
}

TEST_CASE("wrist dependency digraph") {
  const SystemGraphs s = BuildSystemGraphs(LoadModel(ModelsDir() / "wrist.urdf"));
  CHECK(s.cdd.edges.size() == 8);
  CHECK(EdgeSet(s.cdd) == std::multiset<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 4},
                                            {2, 1}, {4, 2}, {3, 1}, {4, 3}});
  REQUIRE(s.lacg.num_aggregates() == 2);
  CHECK(s.lacg.aggregates[1].bodies == std::vector<int>{1, 2, 3, 4});
  CHECK(s.lacg.aggregates[1].closures == std::vector<int>{0, 1});
}

TEST_CASE("aggregates of the golden models") {
  struct Expect {
    const char* file;
    int aggregates;
  };
  for (const Expect& e : {Expect{"four_bar.urdf", 2}, Expect{"nested_loops.urdf", 2},
                          Expect{"overlapping_loops.urdf", 2}}) {
    CAPTURE(e.file);
    const SystemGraphs s = BuildSystemGraphs(LoadModel(ModelsDir() / e.file));
    CHECK(s.lacg.num_aggregates() == e.aggregates);
    CHECK(s.lacg.aggregates[0].bodies == std::vector<int>{0});
    CHECK(s.lacg.aggregates[0].parent == -1);
  }
}

TEST_CASE("a tree has one aggregate per body") {
  for (const auto& path : testing::PlainModelPaths()) {
    CAPTURE(path.string());
    const SystemGraphs s = BuildSystemGraphs(LoadModel(path));
    CHECK(s.lacg.num_aggregates() == s.cg.num_nodes());
    for (int k = 1; k < s.lacg.num_aggregates(); ++k) {
      const Aggregate& a = s.lacg.aggregates[k];
      REQUIRE(a.bodies.size() == 1);
      CHECK(s.lacg.aggregate_of_body[s.cg.parent(a.bodies[0])] == a.parent);
    }
  }
}

TEST_CASE("components match mutual reachability on random digraphs") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const double p = std::array{0.1, 0.2, 0.4}[trial % 3];
    const Digraph d = testing::RandomDigraph(rng, n, p);
    CHECK(StronglyConnectedComponents(d) == testing::BruteForceComponents(d));
  }
}

TEST_CASE("components of an empty and a cyclic digraph") {
  CHECK(StronglyConnectedComponents(Digraph{0, {}}).empty());
  const Digraph ring{4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  CHECK(StronglyConnectedComponents(ring) == std::vector<std::vector<int>>{{0, 1, 2, 3}});
}

TEST_CASE("aggregation holds on random models") {
  std::mt19937 rng(29);
  testing::RandomModelOptions opts;
  opts.couplings = true;
  for (int trial = 0; trial < 200; ++trial) {
    const RobotModel m = testing::RandomModel(rng, opts);
    const SystemGraphs s = BuildSystemGraphs(m);
    CHECK(s.cdd.num_nodes == s.cg.num_bodies() + 1);
    CHECK(static_cast<int>(s.cdd.edges.size()) == s.cg.num_joints() + s.cg.num_loops());

    const auto reach = testing::TransitiveClosure(s.cdd);
    const LoopAggregatedGraph& a = s.lacg;
    CHECK(a.aggregates[0].bodies == std::vector<int>{0});
    for (int i = 0; i < s.cg.num_nodes(); ++i) {
      for (int j = 0; j < s.cg.num_nodes(); ++j) {
        const bool mutual = reach[i][j] && reach[j][i];
        CHECK(mutual == (a.aggregate_of_body[i] == a.aggregate_of_body[j]));
      }
    }
    for (int k = 1; k < a.num_aggregates(); ++k) {
      // Every tree edge entering an aggregate leaves the same parent.
      for (int b : a.aggregates[k].bodies) {
        const int pa = a.aggregate_of_body[s.cg.parent(b)];
        if (pa != k) CHECK(pa == a.aggregates[k].parent);
      }
    }
    for (int l = 0; l < s.cg.num_loops(); ++l) {
      const LoopSubchains sub = ClosureSubchains(s.cg, l);
      for (const auto* side : {&sub.predecessor_side, &sub.successor_side}) {
        for (int b : *side) CHECK(a.aggregate_of_body[b] == a.aggregate_of_closure[l]);
      }
    }
  }
}

TEST_CASE("DOT output") {
  const SystemGraphs s = BuildSystemGraphs(LoadModel(ModelsDir() / "belt.urdf"));
  const std::string cg = ExportDot(s, GraphKind::kConnectivity);
  CHECK(cg.rfind("graph \"connectivity\" {", 0) == 0);
  CHECK(cg.find("b1 -- b3 [label=\"3\"]") != std::string::npos);
  CHECK(cg.find("b3 -- b2 [style=dashed, label=\"4 belt\"]") != std::string::npos);
  const std::string cdd = ExportDot(s, GraphKind::kDependency);
  CHECK(cdd.find("b3 -> b2;") != std::string::npos);
  CHECK(cdd.find("b2 [label=\"motor\"]") != std::string::npos);
  const std::string lacg = ExportDot(s, GraphKind::kAggregated);
  CHECK(lacg.find("subgraph cluster_1") != std::string::npos);
  CHECK(lacg.find("ltail=cluster_0, lhead=cluster_1") != std::string::npos);
  CHECK(lacg.back() == '\n');
}

TEST_CASE("DOT labels are escaped") {
  const ConnectivityGraph g({"a \"b\"", "c\\d"}, {-1, 0}, {});
  const std::string dot = ExportDot(g);
  CHECK(dot.find("[label=\"a \\\"b\\\"\"]") != std::string::npos);
  CHECK(dot.find("[label=\"c\\\\d\"]") != std::string::npos);
}

}  // namespace
}  // namespace urdfplus
