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

#include <sstream>

#include "urdfplus/graph.h"

namespace urdfplus {
namespace {

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string NodeId(int body) { return "b" + std::to_string(body); }

void Nodes(std::ostringstream& out, const std::vector<std::string>& names,
           const std::string& indent) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << indent << NodeId(static_cast<int>(i)) << " [label=" << Quote(names[i])
        << "];\n";
  }
}

}  // namespace

std::string ExportDot(const ConnectivityGraph& g) {
  std::ostringstream out;
  out << "graph \"connectivity\" {\n";
  out << "  node [shape=box];\n";
  Nodes(out, g.names(), "  ");
  for (int i = 1; i < g.num_nodes(); ++i) {
    out << "  " << NodeId(g.parent(i)) << " -- " << NodeId(i)
        << " [label=\"" << i << "\"];\n";
  }
  for (int l = 0; l < g.num_loops(); ++l) {
    const LoopEdge& e = g.loop(l);
    out << "  " << NodeId(e.predecessor) << " -- " << NodeId(e.successor)
        << " [style=dashed, label=" << Quote(std::to_string(g.num_bodies() + 1 + l) +
                                             " " + e.name)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string ExportDot(const Digraph& d, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "digraph \"dependency\" {\n";
  out << "  node [shape=box];\n";
  for (int i = 0; i < d.num_nodes; ++i) {
    const std::string label =
        i < static_cast<int>(names.size()) ? names[i] : std::to_string(i);
    out << "  " << NodeId(i) << " [label=" << Quote(label) << "];\n";
  }
  for (const auto& [from, to] : d.edges) {
    out << "  " << NodeId(from) << " -> " << NodeId(to) << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string ExportDot(const LoopAggregatedGraph& a, const ConnectivityGraph& g) {
  std::ostringstream out;
  out << "digraph \"aggregated\" {\n";
  out << "  compound=true;\n";
  out << "  node [shape=box];\n";
  for (int k = 0; k < a.num_aggregates(); ++k) {
    const Aggregate& agg = a.aggregates[k];
    out << "  subgraph cluster_" << k << " {\n";
    out << "    label=\"A" << k << "\";\n";
    for (int b : agg.bodies) {
      out << "    " << NodeId(b) << " [label=" << Quote(g.name(b)) << "];\n";
    }
    out << "  }\n";
  }
  for (int k = 1; k < a.num_aggregates(); ++k) {
    const Aggregate& agg = a.aggregates[k];
    const int entry = agg.bodies.front();
    out << "  " << NodeId(g.parent(entry)) << " -> " << NodeId(entry)
        << " [ltail=cluster_" << agg.parent << ", lhead=cluster_" << k << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string ExportDot(const SystemGraphs& system, GraphKind kind) {
  switch (kind) {
    case GraphKind::kConnectivity:
      return ExportDot(system.cg);
    case GraphKind::kDependency:
      return ExportDot(system.cdd, system.cg.names());
    case GraphKind::kAggregated:
      return ExportDot(system.lacg, system.cg);
  }
  return {};
}

}  // namespace urdfplus
