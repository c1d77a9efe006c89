#pragma once

#include "fraisse/classes.hpp"
#include "fraisse/core.hpp"

namespace fraisse::testing {

// small builders used across the suites
inline FinStructure tournament_from_arcs(int n, std::initializer_list<std::pair<int, int>> arcs) {
  FinStructure t(class_signature(ClassId::tournament()), n);
  for (auto [x, y] : arcs) {
    Vertex tt[2] = {x, y};
    t.rels[0].add(tt);
  }
  t.normalize();
  return t;
}

inline FinStructure cycle3() { return tournament_from_arcs(3, {{0, 1}, {1, 2}, {2, 0}}); }
inline FinStructure chain(int n) {
  FinStructure t(class_signature(ClassId::tournament()), n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vertex tt[2] = {i, j};
      t.rels[0].add(tt);
    }
  t.normalize();
  return t;
}

inline FinStructure linear_order_on(int n) {
  FinStructure t(class_signature(ClassId::linear_order()), n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vertex tt[2] = {i, j};
      t.rels[0].add(tt);
    }
  t.normalize();
  return t;
}

inline FinStructure graph_from_edges(int n, std::initializer_list<std::pair<int, int>> edges) {
  FinStructure g(class_signature(ClassId::graph()), n);
  for (auto [x, y] : edges) {
    Vertex t[2] = {x, y};
    g.rels[0].add_closed(t, Symmetry::Set);
  }
  g.normalize();
  return g;
}

inline FinStructure two_graph_from_triples(int n,
                                           std::initializer_list<std::array<int, 3>> tr) {
  FinStructure g(class_signature(ClassId::two_graph()), n);
  for (auto& t : tr) {
    Vertex tt[3] = {t[0], t[1], t[2]};
    g.rels[0].add_closed(tt, Symmetry::Set);
  }
  g.normalize();
  return g;
}

inline uint64_t rng_next(uint64_t& s) {
  s ^= s << 13;
  s ^= s >> 7;
  s ^= s << 17;
  return s;
}

inline std::vector<int> random_perm(int n, uint64_t& seed) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng_next(seed) % (i + 1)]);
  return p;
}

}  // namespace fraisse::testing
