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

#include "urdfplus/graph.h"

#include <algorithm>
#include <set>

#include "urdfplus/error.h"

namespace urdfplus {

ConnectivityGraph::ConnectivityGraph(std::vector<std::string> body_names,
                                     std::vector<int> parent,
                                     std::vector<LoopEdge> loops)
    : names_(std::move(body_names)),
      parent_(std::move(parent)),
      loops_(std::move(loops)) {
  if (names_.size() != parent_.size() || parent_.empty() || parent_[0] != -1) {
    throw Error(ErrorCode::kInvalidModel,
                "connectivity graph needs a root at index 0");
  }
  for (int i = 1; i < num_nodes(); ++i) {
    if (parent_[i] < 0 || parent_[i] >= i) {
      throw Error(ErrorCode::kInvalidModel,
                  "body " + std::to_string(i) +
                      " violates regular numbering (parent must be lower)");
    }
  }
  for (const LoopEdge& e : loops_) {
    if (e.predecessor < 0 || e.predecessor >= num_nodes() ||
        e.successor < 0 || e.successor >= num_nodes()) {
      throw Error(ErrorCode::kInvalidModel,
                  "loop edge '" + e.name + "' references an unknown body");
    }
  }
}

bool ConnectivityGraph::IsAncestor(int a, int b) const {
  // Regular numbering: walking up from b only visits decreasing numbers.
  while (b > a) b = parent_[b];
  return b == a;
}

ConnectivityGraph ConnectivityGraphFromModel(const NumberedModel& model) {
  std::vector<LoopEdge> loops;
  for (int l = 0; l < model.num_closures(); ++l) {
    LoopEdge e;
    e.name = model.ClosureName(l);
    e.kind = model.closures[l].kind;
    e.predecessor = model.BodyIndex(model.ClosurePredecessor(l));
    e.successor = model.BodyIndex(model.ClosureSuccessor(l));
    loops.push_back(std::move(e));
  }
  return ConnectivityGraph(model.body_names, model.parent, std::move(loops));
}

int NearestCommonAncestor(const ConnectivityGraph& g, int a, int b) {
  if (a < 0 || a >= g.num_nodes() || b < 0 || b >= g.num_nodes()) {
    throw Error(ErrorCode::kInvalidModel, "body index out of range");
  }
  while (a != b) {
    if (a > b) {
      a = g.parent(a);
    } else {
      b = g.parent(b);
    }
  }
  return a;
}

std::vector<int> PathSubchain(const ConnectivityGraph& g, int from,
                              int ancestor) {
  if (!g.IsAncestor(ancestor, from)) {
    throw Error(ErrorCode::kNotAnAncestor,
                "body '" + g.name(ancestor) + "' is not an ancestor of '" +
                    g.name(from) + "'");
  }
  std::vector<int> nu;
  while (from != ancestor) {
    nu.push_back(from);
    from = g.parent(from);
  }
  return nu;
}

LoopSubchains ClosureSubchains(const ConnectivityGraph& g, int l) {
  const LoopEdge& e = g.loop(l);
  LoopSubchains s;
  s.nca = NearestCommonAncestor(g, e.predecessor, e.successor);
  s.predecessor_side = PathSubchain(g, e.predecessor, s.nca);
  s.successor_side = PathSubchain(g, e.successor, s.nca);
  return s;
}

std::vector<std::vector<int>> Digraph::Adjacency() const {
  std::vector<std::vector<int>> adj(num_nodes);
  for (const auto& [from, to] : edges) adj[from].push_back(to);
  return adj;
}

Digraph Digraph::Reversed() const {
  Digraph r{num_nodes, {}};
  r.edges.reserve(edges.size());
  for (const auto& [from, to] : edges) r.edges.emplace_back(to, from);
  return r;
}

Digraph ConstraintDependencyDigraph(const ConnectivityGraph& g) {
  Digraph d{g.num_nodes(), {}};
  for (int i = 1; i < g.num_nodes(); ++i) d.edges.emplace_back(g.parent(i), i);
  for (int l = 0; l < g.num_loops(); ++l) {
    const LoopEdge& e = g.loop(l);
    const LoopSubchains s = ClosureSubchains(g, l);
    if (s.predecessor_side.empty() && s.successor_side.empty()) {
      throw Error(ErrorCode::kDegenerateLoop,
                  "closure '" + e.name + "' has empty path subchains");
    }
    // Walk order ends at the child of the NCA, which is the lowest number.
    const int min_p = s.predecessor_side.empty() ? s.successor_side.back()
                                                 : s.predecessor_side.back();
    const int min_s = s.successor_side.empty() ? s.predecessor_side.back()
                                               : s.successor_side.back();
    d.edges.emplace_back(e.predecessor, min_s);
    d.edges.emplace_back(e.successor, min_p);
  }
  return d;
}

namespace {

// Iterative DFS appending nodes to `order` as they finish.
void FinishOrder(const std::vector<std::vector<int>>& adj, int start,
                 std::vector<bool>& visited, std::vector<int>& order) {
  std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
  visited[start] = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < adj[node].size()) {
      const int succ = adj[node][next++];
      if (!visited[succ]) {
        visited[succ] = true;
        stack.emplace_back(succ, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
}

}  // namespace

std::vector<std::vector<int>> StronglyConnectedComponents(const Digraph& d) {
  const auto adj = d.Adjacency();
  std::vector<bool> visited(d.num_nodes, false);
  std::vector<int> order;
  order.reserve(d.num_nodes);
  for (int v = 0; v < d.num_nodes; ++v) {
    if (!visited[v]) FinishOrder(adj, v, visited, order);
  }

  const auto radj = d.Reversed().Adjacency();
  std::fill(visited.begin(), visited.end(), false);
  std::vector<std::vector<int>> components;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (visited[*it]) continue;
    std::vector<int> component;
    FinishOrder(radj, *it, visited, component);
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

LoopAggregatedGraph MakeLoopAggregatedGraph(
    const ConnectivityGraph& g, const std::vector<std::vector<int>>& sccs) {
  LoopAggregatedGraph a;
  a.aggregate_of_body.assign(g.num_nodes(), -1);
  for (const std::vector<int>& scc : sccs) {
    const bool has_root = std::find(scc.begin(), scc.end(), 0) != scc.end();
    if (has_root && scc.size() != 1) {
      throw Error(ErrorCode::kInternalInconsistency,
                  "the root body was aggregated with other bodies");
    }
    Aggregate agg;
    agg.bodies = scc;
    std::sort(agg.bodies.begin(), agg.bodies.end());
    if (has_root) {
      a.aggregates.insert(a.aggregates.begin(), std::move(agg));
    } else {
      a.aggregates.push_back(std::move(agg));
    }
  }
  if (a.aggregates.empty() || a.aggregates.front().bodies != std::vector<int>{0}) {
    throw Error(ErrorCode::kInternalInconsistency,
                "components do not include the root body");
  }
  for (int k = 0; k < a.num_aggregates(); ++k) {
    for (int b : a.aggregates[k].bodies) {
      if (b < 0 || b >= g.num_nodes() || a.aggregate_of_body[b] != -1) {
        throw Error(ErrorCode::kInternalInconsistency,
                    "components do not partition the bodies");
      }
      a.aggregate_of_body[b] = k;
    }
  }
  if (std::count(a.aggregate_of_body.begin(), a.aggregate_of_body.end(), -1)) {
    throw Error(ErrorCode::kInternalInconsistency,
                "components do not cover every body");
  }

  for (int k = 1; k < a.num_aggregates(); ++k) {
    std::set<int> parents;
    for (int b : a.aggregates[k].bodies) {
      const int pa = a.aggregate_of_body[g.parent(b)];
      if (pa != k) parents.insert(pa);
    }
    if (parents.size() != 1) {
      throw Error(ErrorCode::kInternalInconsistency,
                  "aggregate " + std::to_string(k) + " has " +
                      std::to_string(parents.size()) + " parent aggregates");
    }
    a.aggregates[k].parent = *parents.begin();
  }

  a.aggregate_of_closure.assign(g.num_loops(), -1);
  for (int l = 0; l < g.num_loops(); ++l) {
    const LoopSubchains s = ClosureSubchains(g, l);
    std::set<int> owners;
    for (int b : s.predecessor_side) owners.insert(a.aggregate_of_body[b]);
    for (int b : s.successor_side) owners.insert(a.aggregate_of_body[b]);
    if (owners.size() != 1) {
      throw Error(ErrorCode::kInternalInconsistency,
                  "closure '" + g.loop(l).name +
                      "' straddles several aggregates");
    }
    const int owner = *owners.begin();
    a.aggregate_of_closure[l] = owner;
    a.aggregates[owner].closures.push_back(l);
  }
  return a;
}

SystemGraphs BuildSystemGraphs(const RobotModel& model) {
  NumberedModel numbered = RegularNumbering(model);
  ConnectivityGraph cg = ConnectivityGraphFromModel(numbered);
  Digraph cdd = ConstraintDependencyDigraph(cg);
  auto sccs = StronglyConnectedComponents(cdd);
  LoopAggregatedGraph lacg = MakeLoopAggregatedGraph(cg, sccs);
  return {std::move(numbered), std::move(cg), std::move(cdd), std::move(sccs),
          std::move(lacg)};
}

}  // namespace urdfplus
