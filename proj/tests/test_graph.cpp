#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "kintop/graph.hpp"
#include "test_util.hpp"

using namespace kintop::graph;
using kintop::ValidationError;

namespace {

DirectedGraph chain3() {  // 0 -> 1 -> 2
  DirectedGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

DirectedGraph ring(int n) {
  DirectedGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

// Two exogenous co-parents feeding node 2, which feeds node 3.
DirectedGraph fork4() {
  DirectedGraph g(4);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  return g;
}

}  // namespace

TEST_CASE("topology") {
  CHECK(topology(DirectedGraph(0)).edges.empty());
  CHECK(topology(chain3()).edges == std::set<Edge>{{0, 1}, {1, 2}});
  CHECK(topology(fork4()).edges == std::set<Edge>{{0, 2}, {1, 2}, {2, 3}});
}

TEST_CASE("children and parents") {
  auto g = chain3();
  CHECK(children(g, 0) == std::set<int>{1});
  CHECK(children(g, 2).empty());
  CHECK(parents(g, 2) == std::set<int>{1});
  CHECK(children(ring(4), 3) == std::set<int>{0});
  CHECK(parents(ring(4), 0) == std::set<int>{3});
  CHECK(parents(fork4(), 2) == std::set<int>{0, 1});
  CHECK_THROWS_AS(children(g, 5), ValidationError);
}

TEST_CASE("kins") {
  CHECK(kins(fork4(), 0) == std::set<int>{1, 2});
  CHECK(kins(ring(4), 0) == std::set<int>{1, 3});
  DirectedGraph isolated(3);
  isolated.add_edge(0, 1);
  CHECK(kins(isolated, 2).empty());
}

TEST_CASE("classify_kin") {
  auto g = fork4();
  CHECK(classify_kin(g, 0, 1) == KinClass::proper_kin);
  CHECK(classify_kin(g, 0, 2) == KinClass::child);
  CHECK(classify_kin(g, 0, 3) == KinClass::non_kin);
  CHECK(classify_kin(g, 3, 2) == KinClass::parent);
  CHECK_THROWS_AS(classify_kin(g, 1, 1), ValidationError);
}

TEST_CASE("kin graph") {
  CHECK(kin_graph(fork4()).edges ==
        std::set<Edge>{{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  CHECK(kin_graph(ring(4)) == topology(ring(4)));
  DirectedGraph fork(3);
  fork.add_edge(0, 2);
  fork.add_edge(1, 2);
  CHECK(kin_graph(fork).edges == std::set<Edge>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("self kin") {
  CHECK(is_self_kin(ring(15)));
  CHECK_FALSE(is_self_kin(fork4()));
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 2 + static_cast<int>(seed * 5) % 63;
    CHECK(is_self_kin(testutil::random_arborescence(n, seed)));
  }
  for (int n : {2, 3, 7, 15})
    CHECK(is_self_kin(ring(n)));
}

TEST_CASE("kin relation is symmetric") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = testutil::random_digraph(9, 0.25, seed);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        if (i == j) continue;
        CHECK(kins(g, j).count(i) == kins(g, i).count(j));
      }
  }
}

TEST_CASE("topology is contained in the kin graph") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = testutil::random_digraph(8, 0.3, 100 + seed);
    auto top = topology(g);
    auto kin = kin_graph(g);
    for (const Edge& e : top.edges) CHECK(kin.edges.count(e) == 1);
  }
}

TEST_CASE("kin graph is topology plus co-parent pairs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 4 + static_cast<int>(seed) % 9;
    auto g = testutil::random_digraph(n, 0.3, 200 + seed);
    auto want = topology(g);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        bool coparents = false;
        for (int c = 0; c < n; ++c)
          if (g.has_edge(a, c) && g.has_edge(b, c)) coparents = true;
        if (coparents) want.add_edge(a, b);
      }
    CHECK(kin_graph(g) == want);
  }
}

TEST_CASE("edge set comparison") {
  auto truth = topology(fork4());
  SUBCASE("identical sets") {
    auto m = compare_edge_sets(truth, truth);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
  }
  SUBCASE("empty prediction") {
    UndirectedGraph empty(4);
    auto m = compare_edge_sets(empty, truth);
    CHECK(m.recall == 0.0);
    CHECK(m.precision == 1.0);
    CHECK(m.fn == 3);
  }
  SUBCASE("kin graph against topology has one false positive") {
    auto m = compare_edge_sets(kin_graph(fork4()), truth);
    CHECK(m.fp == 1);
    CHECK(m.tp == 3);
    CHECK(m.fn == 0);
  }
  SUBCASE("identical empty sets give f1 = 1") {
    auto m = compare_edge_sets(UndirectedGraph(3), UndirectedGraph(3));
    CHECK(m.f1 == 1.0);
  }
  SUBCASE("size mismatch throws") {
    CHECK_THROWS_AS(compare_edge_sets(UndirectedGraph(3), truth),
                    ValidationError);
  }
}

TEST_CASE("graph validation") {
  DirectedGraph g(3);
  CHECK_THROWS_AS(g.add_edge(0, 0), ValidationError);
  CHECK_THROWS_AS(g.add_edge(0, 4), ValidationError);
  g.add_edge(0, 1);
  g.add_edge(1, 0);  // allowed in standalone graph algebra
  CHECK_THROWS_AS(check_no_antiparallel(g), ValidationError);
}

TEST_CASE("serialization round trips") {
  auto g = fork4();
  CHECK(directed_from_json(to_json(g)).edges == g.edges);
  auto u = kin_graph(g);
  CHECK(undirected_from_json(to_json(u)) == u);
  CHECK(to_dot(g).find("n0 -> n2") != std::string::npos);
  CHECK(to_dot(u).find("n0 -- n1") != std::string::npos);
}
