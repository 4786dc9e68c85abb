#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kintop/errors.hpp"

// Directed/undirected graph algebra on dense node indices 0..n-1: topology,
// children/parents/kins, kin-graph construction and edge-set comparison.

namespace kintop::graph {

using Edge = std::pair<int, int>;

struct DirectedGraph {
  int n = 0;
  std::set<Edge> edges;  // (i, j) is an arc from node i to node j

  DirectedGraph() = default;
  explicit DirectedGraph(int nodes);

  void add_edge(int from, int to);
  bool has_edge(int from, int to) const;
};

struct UndirectedGraph {
  int n = 0;
  std::set<Edge> edges;  // canonical: first < second

  UndirectedGraph() = default;
  explicit UndirectedGraph(int nodes);

  void add_edge(int a, int b);
  bool has_edge(int a, int b) const;

  bool operator==(const UndirectedGraph&) const = default;
};

// Arcs may not pair up antiparallel when the graph backs a dynamics model;
// standalone graph algebra does not care.
void check_no_antiparallel(const DirectedGraph& g);

UndirectedGraph topology(const DirectedGraph& g);

std::set<int> children(const DirectedGraph& g, int j);
std::set<int> parents(const DirectedGraph& g, int j);

// children(j) + parents(j) + parents of children (co-parents), minus j.
std::set<int> kins(const DirectedGraph& g, int j);

enum class KinClass { child, parent, proper_kin, non_kin };
KinClass classify_kin(const DirectedGraph& g, int j, int i);

UndirectedGraph kin_graph(const DirectedGraph& g);
bool is_self_kin(const DirectedGraph& g);

struct EdgeSetMetrics {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 1.0;  // defined as 1 when the denominator is 0
  double recall = 1.0;
  double f1 = 0.0;
};

EdgeSetMetrics compare_edge_sets(const UndirectedGraph& predicted,
                                 const UndirectedGraph& truth);

// {"n": int, "directed": bool, "edges": [[i,j],...]}
nlohmann::json to_json(const DirectedGraph& g);
nlohmann::json to_json(const UndirectedGraph& g);
DirectedGraph directed_from_json(const nlohmann::json& j);
UndirectedGraph undirected_from_json(const nlohmann::json& j);

std::string to_dot(const DirectedGraph& g);
std::string to_dot(const UndirectedGraph& g);

nlohmann::json to_json(const EdgeSetMetrics& m);

}  // namespace kintop::graph
