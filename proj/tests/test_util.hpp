#pragma once

#include <complex>
#include <random>
#include <vector>

#include "kintop/graph.hpp"
#include "kintop/ldg.hpp"
#include "kintop/lti.hpp"

// Shared helpers for the unit and acceptance suites.

namespace testutil {

using cdouble = std::complex<double>;

// Random digraph without self-loops or antiparallel pairs.
inline kintop::graph::DirectedGraph random_digraph(int n, double density,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  kintop::graph::DirectedGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || g.has_edge(i, j) || g.has_edge(j, i)) continue;
      if (u(rng) < density) g.add_edge(i, j);
    }
  return g;
}

// Random arborescence: every node except the root has exactly one parent.
inline kintop::graph::DirectedGraph random_arborescence(int n,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  kintop::graph::DirectedGraph g(n);
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    g.add_edge(pick(rng), i);
  }
  return g;
}

// Two-node helper model: x1 = H x0 + e1 with unit white noise.
inline kintop::ldg::LdgModel cascade2(const kintop::lti::TransferFunction& h) {
  kintop::ldg::LdgModel m;
  m.g = kintop::graph::DirectedGraph(2);
  m.add_link(0, 1, h);
  m.noise.assign(2, kintop::ldg::NoiseSpec{});
  return m;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace testutil
