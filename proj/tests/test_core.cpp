#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fraisse/json_io.hpp"
#include "helpers.hpp"

using namespace fraisse;
using namespace fraisse::testing;

TEST_CASE("find_embeddings basics") {
  auto c3 = cycle3();
  FinStructure pt(class_signature(ClassId::tournament()), 1);
  CHECK(find_embedding_maps(pt, c3).size() == 3);

  // directed edge into the 3-cycle: brute-force oracle over all vertex pairs
  auto edge = tournament_from_arcs(2, {{0, 1}});
  int oracle = 0;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (x != y && arc(c3, x, y)) ++oracle;
  CHECK(oracle == 3);
  CHECK(find_embedding_maps(edge, c3).size() == static_cast<size_t>(oracle));

  CHECK(find_embedding_maps(c3, c3).size() == 3);  // Aut(C3)

  // deterministic lexicographic order of results
  auto maps = find_embedding_maps(edge, c3);
  for (size_t i = 1; i < maps.size(); ++i) CHECK(maps[i - 1] < maps[i]);

  // fix argument narrows the search
  CHECK(find_embedding_maps(edge, c3, {{0, 1}}).size() == 1);
}

TEST_CASE("embedding composition stays an embedding") {
  auto t2 = tournament_from_arcs(2, {{0, 1}});
  auto t4 = chain(4);
  auto t5 = enumerate_members(ClassId::tournament(), 5);
  for (auto& c : t5) {
    for (auto& f : find_embedding_maps(t2, t4))
      for (auto& g : find_embedding_maps(t4, c)) {
        auto h = compose_maps(f, g);
        CHECK(is_embedding_map(t2, c, h));
      }
    break;  // one target suffices at this size
  }
}

TEST_CASE("automorphisms form a group") {
  auto c3 = cycle3();
  auto aut = automorphism_maps(c3);
  CHECK(aut.size() == 3);
  auto lin3 = chain(3);
  CHECK(automorphism_maps(lin3).size() == 1);

  // complete two-graph on 4 vertices: order 24, brute-force cross-check
  auto k4 = two_graph_from_triples(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  auto aut4 = automorphism_maps(k4);
  CHECK(aut4.size() == 24);

  for (auto& cand : {cycle3(), lin3, k4}) {
    auto g = automorphism_maps(cand);
    std::set<std::vector<int>> set(g.begin(), g.end());
    for (auto& x : g) {
      CHECK(set.count(inverse_perm(x)));
      for (auto& y : g) CHECK(set.count(compose_maps(x, y)));
    }
  }
}

TEST_CASE("canonical form is isomorphism-invariant") {
  uint64_t seed = 12345;
  for (auto& s : {cycle3(), chain(4), two_graph_from_triples(4, {{0, 1, 2}})}) {
    auto base = canonical_form(s).canon;
    for (int trial = 0; trial < 200; ++trial) {
      auto p = random_perm(s.n, seed);
      auto relabeled = s.relabeled(p, s.n);
      CHECK(canonical_form(relabeled).canon == base);
    }
  }
  CHECK_FALSE(canonical_form(cycle3()).canon == canonical_form(chain(3)).canon);

  // exactly two tournaments on 3 vertices up to isomorphism
  std::set<std::string> forms;
  for (int bits = 0; bits < 8; ++bits) {
    FinStructure t(class_signature(ClassId::tournament()), 3);
    int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int i = 0; i < 3; ++i) {
      Vertex tt[2] = {pairs[i][bits >> i & 1], pairs[i][1 - (bits >> i & 1)]};
      t.rels[0].add(tt);
    }
    t.normalize();
    forms.insert(canonical_form(t).canon.code());
  }
  CHECK(forms.size() == 2);
}

TEST_CASE("generated substructure") {
  auto c3 = cycle3();
  auto sub = generated_substructure(c3, {0, 2});
  CHECK(sub.sub.n == 2);
  CHECK(arc(sub.sub, 1, 0));  // 2 -> 0 in the cycle

  auto none = generated_substructure(c3, {});
  CHECK(none.sub.n == 0);

  // meet closure: two incomparable leaves force their meet in
  auto trees = enumerate_members(ClassId::meet_tree(), 3);
  bool found = false;
  for (auto& t : trees) {
    int lt = t.sig->index_of("lt");
    for (Vertex x = 0; x < 3 && !found; ++x)
      for (Vertex y = 0; y < 3 && !found; ++y) {
        if (x == y || t.has2(lt, x, y) || t.has2(lt, y, x)) continue;
        auto g = generated_substructure(t, {x, y});
        CHECK(g.sub.n == 3);
        found = true;
      }
  }
  CHECK(found);
}

TEST_CASE("structure json round trip") {
  for (auto& s : {cycle3(), two_graph_from_triples(4, {{0, 1, 2}})}) {
    auto j = structure_to_json(s);
    auto back = structure_from_json(j);
    CHECK(back == s);
    CHECK(structure_to_json(back) == j);
  }
  auto trees = enumerate_members(ClassId::meet_tree(), 3);
  for (auto& t : trees) CHECK(structure_from_json(structure_to_json(t)) == t);
  CHECK_THROWS(parse_structure("{not json"));
}

TEST_CASE("dot export mentions every vertex") {
  auto dot = structure_to_dot(cycle3());
  CHECK(dot.find("v0") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
}
