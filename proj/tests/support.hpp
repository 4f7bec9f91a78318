#pragma once

#include <numeric>
#include <vector>

#include "starpack/starpack.hpp"

namespace starpack::test {

inline Graph path(int n) {
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, e);
}

inline Graph cycle(int n) {
  auto e = path(n).edges();
  e.emplace_back(1, n);
  return Graph(n, e);
}

inline Graph complete(int n) {
  std::vector<Edge> e;
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex v = u + 1; v <= n; ++v) e.emplace_back(u, v);
  }
  return Graph(n, e);
}

/// K_{1,leaves} with center 1.
inline Graph star(int leaves) {
  std::vector<Edge> e;
  for (Vertex v = 2; v <= leaves + 1; ++v) e.emplace_back(1, v);
  return Graph(leaves + 1, e);
}

inline Graph with_edges(const Graph& g, std::vector<Edge> more, int extra_vertices = 0) {
  auto e = g.edges();
  e.insert(e.end(), more.begin(), more.end());
  return Graph(g.order() + extra_vertices, e);
}

/// Disjoint union; b's vertices are shifted by a.order().
inline Graph disjoint(const Graph& a, const Graph& b) {
  auto e = a.edges();
  for (auto [u, v] : b.edges()) e.emplace_back(u + a.order(), v + a.order());
  return Graph(a.order() + b.order(), e);
}

inline Graph random_graph(SplitMix64& rng, int n_min, int n_max, double p_min = 0.1, double p_max = 0.7) {
  InstanceSpec s;
  s.n = rng.between(n_min, n_max);
  s.p = p_min + (p_max - p_min) * rng.uniform();
  s.seed = rng.next();
  return generate(s);
}

inline Packing packing(std::vector<Star> stars) { return Packing{std::move(stars)}; }

inline int opt(const Graph& g, const Constraint& c) { return oracle_max_packing(g, c, {20}).opt_coverage; }

inline int t_count(const Packing& p, int t) { return p.count_of_size(t); }

}  // namespace starpack::test
