#include "kintop/graph.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace kintop::graph {
namespace {

void check_node(int n, int v) {
  if (v < 0 || v >= n)
    throw ValidationError("node index " + std::to_string(v) +
                          " out of range for n=" + std::to_string(n));
}

}  // namespace

DirectedGraph::DirectedGraph(int nodes) : n(nodes) {
  if (nodes < 0) throw ValidationError("negative node count");
}

void DirectedGraph::add_edge(int from, int to) {
  check_node(n, from);
  check_node(n, to);
  if (from == to) throw ValidationError("self-loops are not allowed");
  edges.insert({from, to});
}

bool DirectedGraph::has_edge(int from, int to) const {
  return edges.count({from, to}) > 0;
}

UndirectedGraph::UndirectedGraph(int nodes) : n(nodes) {
  if (nodes < 0) throw ValidationError("negative node count");
}

void UndirectedGraph::add_edge(int a, int b) {
  check_node(n, a);
  check_node(n, b);
  if (a == b) throw ValidationError("self-loops are not allowed");
  edges.insert({std::min(a, b), std::max(a, b)});
}

bool UndirectedGraph::has_edge(int a, int b) const {
  return edges.count({std::min(a, b), std::max(a, b)}) > 0;
}

void check_no_antiparallel(const DirectedGraph& g) {
  for (const Edge& e : g.edges) {
    if (g.edges.count({e.second, e.first}))
      throw ValidationError("antiparallel arc pair (" +
                            std::to_string(e.first) + "," +
                            std::to_string(e.second) + ")");
  }
}

UndirectedGraph topology(const DirectedGraph& g) {
  UndirectedGraph out(g.n);
  for (const Edge& e : g.edges) out.add_edge(e.first, e.second);
  return out;
}

std::set<int> children(const DirectedGraph& g, int j) {
  check_node(g.n, j);
  std::set<int> out;
  for (const Edge& e : g.edges)
    if (e.first == j) out.insert(e.second);
  return out;
}

std::set<int> parents(const DirectedGraph& g, int j) {
  check_node(g.n, j);
  std::set<int> out;
  for (const Edge& e : g.edges)
    if (e.second == j) out.insert(e.first);
  return out;
}

std::set<int> kins(const DirectedGraph& g, int j) {
  check_node(g.n, j);
  std::set<int> out = children(g, j);
  for (int p : parents(g, j)) out.insert(p);
  for (int c : children(g, j))
    for (int cp : parents(g, c)) out.insert(cp);
  out.erase(j);
  return out;
}

KinClass classify_kin(const DirectedGraph& g, int j, int i) {
  check_node(g.n, j);
  check_node(g.n, i);
  if (i == j) throw ValidationError("classify_kin: i equals j");
  if (g.has_edge(j, i)) return KinClass::child;
  if (g.has_edge(i, j)) return KinClass::parent;
  return kins(g, j).count(i) ? KinClass::proper_kin : KinClass::non_kin;
}

UndirectedGraph kin_graph(const DirectedGraph& g) {
  UndirectedGraph out(g.n);
  for (int j = 0; j < g.n; ++j)
    for (int i : kins(g, j)) out.add_edge(i, j);
  return out;
}

bool is_self_kin(const DirectedGraph& g) {
  return topology(g) == kin_graph(g);
}

EdgeSetMetrics compare_edge_sets(const UndirectedGraph& predicted,
                                 const UndirectedGraph& truth) {
  if (predicted.n != truth.n)
    throw ValidationError("compare_edge_sets: node counts differ");
  EdgeSetMetrics m;
  for (const Edge& e : predicted.edges)
    truth.edges.count(e) ? ++m.tp : ++m.fp;
  for (const Edge& e : truth.edges)
    if (!predicted.edges.count(e)) ++m.fn;
  m.precision = (m.tp + m.fp) ? static_cast<double>(m.tp) / (m.tp + m.fp) : 1.0;
  m.recall = (m.tp + m.fn) ? static_cast<double>(m.tp) / (m.tp + m.fn) : 1.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

namespace {

nlohmann::json edges_to_json(const std::set<Edge>& edges) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Edge& e : edges) arr.push_back({e.first, e.second});
  return arr;
}

}  // namespace

nlohmann::json to_json(const DirectedGraph& g) {
  return {{"n", g.n}, {"directed", true}, {"edges", edges_to_json(g.edges)}};
}

nlohmann::json to_json(const UndirectedGraph& g) {
  return {{"n", g.n}, {"directed", false}, {"edges", edges_to_json(g.edges)}};
}

DirectedGraph directed_from_json(const nlohmann::json& j) {
  if (!j.value("directed", true))
    throw ValidationError("expected a directed graph");
  DirectedGraph g(j.at("n").get<int>());
  for (const auto& e : j.at("edges")) g.add_edge(e.at(0), e.at(1));
  return g;
}

UndirectedGraph undirected_from_json(const nlohmann::json& j) {
  if (j.value("directed", false))
    throw ValidationError("expected an undirected graph");
  UndirectedGraph g(j.at("n").get<int>());
  for (const auto& e : j.at("edges")) g.add_edge(e.at(0), e.at(1));
  return g;
}

std::string to_dot(const DirectedGraph& g) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (int v = 0; v < g.n; ++v) os << "  n" << v << ";\n";
  for (const Edge& e : g.edges)
    os << "  n" << e.first << " -> n" << e.second << ";\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const UndirectedGraph& g) {
  std::ostringstream os;
  os << "graph G {\n";
  for (int v = 0; v < g.n; ++v) os << "  n" << v << ";\n";
  for (const Edge& e : g.edges)
    os << "  n" << e.first << " -- n" << e.second << ";\n";
  os << "}\n";
  return os.str();
}

nlohmann::json to_json(const EdgeSetMetrics& m) {
  return {{"tp", m.tp},           {"fp", m.fp},       {"fn", m.fn},
          {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace kintop::graph
