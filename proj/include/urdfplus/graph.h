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

// Connectivity graph, constraint dependency digraph (CDD), strongly
// connected components and the loop-aggregated connectivity graph (LACG).
//
// Bodies carry their regular numbers: 0 is the root, tree joint i joins body
// i to parent(i) < i, and closure l (loop joint or coupling) is joint
// N_B + 1 + l.

#ifndef URDFPLUS_GRAPH_H_
#define URDFPLUS_GRAPH_H_

#include <string>
#include <utility>
#include <vector>

#include "urdfplus/model.h"

namespace urdfplus {

struct LoopEdge {
  std::string name;
  ClosureKind kind = ClosureKind::kLoop;
  int predecessor = 0;
  int successor = 0;
};

class ConnectivityGraph {
 public:
  ConnectivityGraph(std::vector<std::string> body_names,
                    std::vector<int> parent, std::vector<LoopEdge> loops);

  int num_bodies() const { return static_cast<int>(parent_.size()) - 1; }
  int num_nodes() const { return static_cast<int>(parent_.size()); }
  int num_loops() const { return static_cast<int>(loops_.size()); }
  int num_joints() const { return num_bodies() + num_loops(); }

  int parent(int body) const { return parent_.at(body); }
  const std::string& name(int body) const { return names_.at(body); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<LoopEdge>& loops() const { return loops_; }
  const LoopEdge& loop(int l) const { return loops_.at(l); }

  // a is an ancestor of b (every body is its own ancestor).
  bool IsAncestor(int a, int b) const;

 private:
  std::vector<std::string> names_;
  std::vector<int> parent_;
  std::vector<LoopEdge> loops_;
};

ConnectivityGraph ConnectivityGraphFromModel(const NumberedModel& model);

// Highest-numbered body that is an ancestor of both a and b.
int NearestCommonAncestor(const ConnectivityGraph& g, int a, int b);

// Bodies visited walking parent pointers from `from` up to, but excluding,
// `ancestor`. Throws kNotAnAncestor when `ancestor` is not an ancestor.
std::vector<int> PathSubchain(const ConnectivityGraph& g, int from,
                              int ancestor);

// The two path subchains of closure l, each in walk order (endpoint first).
struct LoopSubchains {
  int nca = 0;
  std::vector<int> predecessor_side;
  std::vector<int> successor_side;
};
LoopSubchains ClosureSubchains(const ConnectivityGraph& g, int l);

struct Digraph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::vector<int>> Adjacency() const;
  Digraph Reversed() const;
};

// Nodes are all bodies including the root (N_B + 1 of them). Tree joint i
// adds parent(i) -> i; closure l adds p -> min(nu_s) and s -> min(nu_p).
// When one subchain is empty (an endpoint is the NCA) its edge targets the
// minimum of the other subchain instead. Throws kDegenerateLoop when both
// subchains are empty.
Digraph ConstraintDependencyDigraph(const ConnectivityGraph& g);

// Two-pass depth-first scheme: finish order on the digraph, then DFS on the
// reversed digraph in decreasing finish time. Components are sorted by their
// smallest node and nodes within a component ascending.
std::vector<std::vector<int>> StronglyConnectedComponents(const Digraph& d);

struct Aggregate {
  std::vector<int> bodies;       // ascending; tree joint numbers equal these
  int parent = -1;               // aggregate index; -1 for the root aggregate
  std::vector<int> closures;     // embedded closure indices l, ascending
};

// aggregates[0] is the root aggregate {0}; the rest follow SCC order.
struct LoopAggregatedGraph {
  std::vector<Aggregate> aggregates;
  std::vector<int> aggregate_of_body;
  std::vector<int> aggregate_of_closure;

  int num_aggregates() const { return static_cast<int>(aggregates.size()); }
};

// Throws kInternalInconsistency when a closure's subchains straddle two
// aggregates or an aggregate has more than one parent aggregate.
LoopAggregatedGraph MakeLoopAggregatedGraph(
    const ConnectivityGraph& g, const std::vector<std::vector<int>>& sccs);

// The outputs of the full parse pipeline for one model.
struct SystemGraphs {
  NumberedModel numbered;
  ConnectivityGraph cg;
  Digraph cdd;
  std::vector<std::vector<int>> sccs;
  LoopAggregatedGraph lacg;
};

// Numbers the model, then builds CG -> CDD -> SCC -> LACG.
SystemGraphs BuildSystemGraphs(const RobotModel& model);

enum class GraphKind { kConnectivity, kDependency, kAggregated };

std::string ExportDot(const ConnectivityGraph& g);
std::string ExportDot(const Digraph& d, const std::vector<std::string>& names);
std::string ExportDot(const LoopAggregatedGraph& a, const ConnectivityGraph& g);
std::string ExportDot(const SystemGraphs& system, GraphKind kind);

}  // namespace urdfplus

#endif  // URDFPLUS_GRAPH_H_
