#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "helpers.hpp"

using namespace fraisse;
using namespace fraisse::testing;

namespace {

FinStructure oriented(int n, std::initializer_list<std::pair<int, int>> arcs) {
  FinStructure t(class_signature(ClassId::n_partite(0)), n);
  for (auto [x, y] : arcs) {
    Vertex tt[2] = {x, y};
    t.rels[0].add(tt);
  }
  t.normalize();
  return t;
}

}  // namespace

TEST_CASE("class id parsing round trips") {
  for (auto s : {"tournament", "two_graph", "hypertournament:3,2", "n_partite:3",
                 "n_partite:omega", "in_free:3", "meet_tree", "ordered_graph",
                 "free_superposition(graph,linear_order)", "lex_product(tournament,tournament)",
                 "semigeneric_expansion", "c4_enlarged_expansion", "peculiar"}) {
    auto c = ClassId::parse(s);
    CHECK(ClassId::parse(c.to_string()) == c);
  }
  CHECK_THROWS(ClassId::parse("nonsense"));
  CHECK_THROWS(ClassId::parse("lex_product(c4_enlarged_expansion,tournament)"));  // unary left factor
}

TEST_CASE("two-graph membership and witness") {
  auto bad = two_graph_from_triples(4, {{0, 1, 2}});
  auto m = is_member(bad, ClassId::two_graph());
  CHECK_FALSE(m.ok);
  CHECK(m.witness.contains("subset"));
  auto good = two_graph_from_triples(4, {{0, 1, 2}, {0, 1, 3}});
  CHECK(is_member(good, ClassId::two_graph()).ok);
  // empty structure belongs everywhere it is defined
  CHECK(is_member(FinStructure(class_signature(ClassId::two_graph()), 0), ClassId::two_graph()).ok);
}

TEST_CASE("n-partite membership") {
  // directed 4-cycle: the two diagonals are non-adjacent, giving parts
  // {0,2} and {1,3}; bot is transitive on all triples
  auto c4 = oriented(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(is_member(c4, ClassId::n_partite(0)).ok);
  CHECK(is_member(c4, ClassId::n_partite(2)).ok);
  auto parts = bot_parts(c4);
  REQUIRE(parts.has_value());
  CHECK(parts->size() == 2);
  // a 4-tournament has four singleton parts
  CHECK(is_member(chain(4), ClassId::n_partite(4)).ok);
  CHECK_FALSE(is_member(chain(4), ClassId::n_partite(3)).ok);
  // bot transitivity violation
  auto bad = oriented(3, {{0, 1}});
  CHECK_FALSE(is_member(bad, ClassId::n_partite(0)).ok);
}

TEST_CASE("hypertournament membership") {
  auto cls = ClassId::hypertournament({3});
  FinStructure h(class_signature(cls), 3);
  Vertex t[3] = {0, 1, 2};
  h.rels[0].add_closed(t, Symmetry::Cyclic);
  h.normalize();
  CHECK(is_member(h, cls).ok);
  FinStructure h2(class_signature(cls), 3);  // no orientation at all
  CHECK_FALSE(is_member(h2, cls).ok);
}

TEST_CASE("extension counts match the catalogue") {
  FinStructure pt(class_signature(ClassId::tournament()), 1);
  CHECK(enumerate_extensions(pt, ClassId::tournament()).size() == 2);
  auto edge = tournament_from_arcs(2, {{0, 1}});
  CHECK(enumerate_extensions(edge, ClassId::tournament()).size() == 4);
  FinStructure two(class_signature(ClassId::two_graph()), 2);
  CHECK(enumerate_extensions(two, ClassId::two_graph()).size() == 2);

  // representatives are pairwise distinct and cover raw enumeration: |A| <= 3
  for (auto cls : {ClassId::tournament(), ClassId::two_graph(), ClassId::n_partite(0)}) {
    for (int size = 0; size <= 3; ++size)
      for (auto& m : enumerate_members(cls, size)) {
        auto exts = enumerate_extensions(m, cls);
        std::set<std::string> codes;
        for (auto& e : exts) {
          CHECK(is_member(e.ext, cls).ok);
          CHECK(codes.insert(e.ext.code()).second);
        }
      }
  }
}

TEST_CASE("member counts at small sizes") {
  CHECK(enumerate_members(ClassId::tournament(), 3).size() == 2);
  CHECK(enumerate_members(ClassId::tournament(), 4).size() == 4);
  CHECK(enumerate_members(ClassId::graph(), 4).size() == 11);
  CHECK(enumerate_members(ClassId::two_graph(), 4).size() == 3);
  CHECK(enumerate_members({ClassTag::Poset}, 3).size() == 5);
  CHECK(enumerate_members(ClassId::linear_order(), 4).size() == 1);
}

TEST_CASE("S(2) age equals local-order test equals realizability") {
  // derived oracle: for all tournaments up to 6 vertices, the transitive
  // neighbourhood test agrees with brute-force circular realization
  ClassId s2{ClassTag::LocalOrderS2};
  for (int n = 1; n <= 5; ++n)
    for (auto& t : enumerate_members(ClassId::tournament(), n)) {
      bool local_order = true;
      {
        auto chk = is_member(t, s2);
        local_order = chk.ok;
      }
      bool realizable = realize_circle(t, s2).has_value();
      CHECK(local_order == realizable);
    }
}

TEST_CASE("S(3) grid decision is stable under refinement") {
  // all oriented graphs on <= 4 vertices: the default grid agrees with a finer one
  ClassId s3{ClassTag::S3Age};
  for (int n = 1; n <= 4; ++n)
    for (auto& g : enumerate_members(ClassId::n_partite(0), n)) {
      // n_partite(omega) members are oriented graphs with bot transitive; for
      // full coverage also flip arbitrary oriented graphs below
      bool coarse = realize_circle(g, s3).has_value();
      bool fine = realize_circle(g, s3, 3 * 14 * std::max(n, 1)).has_value();
      CHECK(coarse == fine);
    }
  // raw oriented graphs on 3 vertices, all 27 arc assignments
  auto sig = class_signature(s3);
  for (int code = 0; code < 27; ++code) {
    FinStructure g(sig, 3);
    int c = code;
    int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    bool valid = true;
    for (int i = 0; i < 3; ++i) {
      int v = c % 3;
      c /= 3;
      if (v == 1) {
        Vertex t[2] = {pairs[i][0], pairs[i][1]};
        g.rels[0].add(t);
      } else if (v == 2) {
        Vertex t[2] = {pairs[i][1], pairs[i][0]};
        g.rels[0].add(t);
      }
    }
    g.normalize();
    if (!valid) continue;
    bool coarse = realize_circle(g, s3).has_value();
    bool fine = realize_circle(g, s3, 200).has_value();
    CHECK(coarse == fine);
  }
}

TEST_CASE("S(2) hat completion matches the displayed rules") {
  // single vertex: hat = {a, a'} with no edge
  FinStructure pt(class_signature({ClassTag::LocalOrderS2}), 1);
  auto h1 = hat_completion(pt, {ClassTag::LocalOrderS2});
  CHECK(h1.completed.n == 2);
  CHECK(bot(h1.completed, 0, 1));
  // directed edge a->b: b->a', b'->a, a'->b'
  auto e = tournament_from_arcs(2, {{0, 1}});
  auto h2 = hat_completion(e, {ClassTag::LocalOrderS2});
  REQUIRE(h2.completed.n == 4);
  // indices: 0=a 1=b 2=a' 3=b'
  CHECK(arc(h2.completed, 1, 2));
  CHECK(arc(h2.completed, 3, 0));
  CHECK(arc(h2.completed, 2, 3));
  CHECK(bot(h2.completed, 0, 2));
  CHECK(bot(h2.completed, 1, 3));
}

TEST_CASE("S(3) hat table validated against circle realizations") {
  // the hat lives in the full circle: build it from a realization (rotating
  // by exact thirds; boundary arcs mean non-adjacency) and compare with the
  // frozen rule table, for every age member with <= 4 vertices
  ClassId s3{ClassTag::S3Age};
  for (int n = 1; n <= 4; ++n)
    for (auto& g : enumerate_members(s3, n)) {
      auto h = hat_completion(g, s3);
      int d0 = std::max(14 * g.n, 6);
      auto pos = realize_circle(g, s3, d0);
      REQUIRE(pos.has_value());
      int D = 3 * d0;
      auto hat_pos = [&](int hv) {
        int base = hv % g.n, k = hv / g.n;
        return (3 * (*pos)[base] + k * d0) % D;
      };
      for (int x = 0; x < h.completed.n; ++x)
        for (int y = 0; y < h.completed.n; ++y) {
          if (x == y) continue;
          int d = ((hat_pos(y) - hat_pos(x)) % D + D) % D;
          bool fwd = d < d0;  // strict: boundary arcs are non-edges in the circle
          CHECK(arc(h.completed, x, y) == fwd);
        }
      // antipode map is a fixed-point-free order-3 rotation preserving arcs
      for (int v = 0; v < h.completed.n; ++v) {
        CHECK(h.antipode[v] != v);
        CHECK(h.antipode[h.antipode[h.antipode[v]]] == v);
      }
      for (int x = 0; x < h.completed.n; ++x)
        for (int y = 0; y < h.completed.n; ++y) {
          if (x == y) continue;
          CHECK(arc(h.completed, x, y) ==
                arc(h.completed, h.antipode[x], h.antipode[y]));
        }
    }
}

TEST_CASE("c4 part completion") {
  // one complete part: completion is itself
  auto p = oriented(2, {});
  CHECK(is_member(p, {ClassTag::C4Enlarged}).ok);
  auto h = hat_completion(p, {ClassTag::C4Enlarged});
  CHECK(h.completed.n == 2);
  // hat of a hat-complete structure is itself (idempotence)
  auto h2 = hat_completion(h.completed, {ClassTag::C4Enlarged});
  CHECK(h2.completed == h.completed);
  // single vertex completes to a part of two
  FinStructure pt(class_signature({ClassTag::C4Enlarged}), 1);
  auto h3 = hat_completion(pt, {ClassTag::C4Enlarged});
  CHECK(h3.completed.n == 2);
  CHECK(is_member(h3.completed, {ClassTag::C4Enlarged}).ok);
}

TEST_CASE("cuts") {
  // S(2) singleton: (a,a') and (a',a)
  FinStructure pt(class_signature({ClassTag::LocalOrderS2}), 1);
  auto cs = cuts(pt, {ClassTag::LocalOrderS2});
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].u != cs[0].v);

  // circular order on 3 points has 3 cuts
  auto circ3 = enumerate_members({ClassTag::Circular}, 3)[0];
  CHECK(cuts(circ3, {ClassTag::Circular}).size() == 3);

  // meet tree chain r < a: cuts (-inf, r), (r, a)
  auto trees = enumerate_members(ClassId::meet_tree(), 2);
  REQUIRE(trees.size() == 1);
  auto tc = cuts(trees[0], ClassId::meet_tree());
  CHECK(tc.size() == 2);
}

TEST_CASE("switch, tau, gamma") {
  auto g = graph_from_edges(4, {{0, 1}, {1, 2}});
  CHECK(switch_graph(g, {}) == g);
  uint64_t seed = 99;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 3 + static_cast<int>(rng_next(seed) % 4);
    FinStructure rg(class_signature(ClassId::graph()), n);
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        if (rng_next(seed) & 1) {
          Vertex t[2] = {x, y};
          rg.rels[0].add_closed(t, Symmetry::Set);
        }
    rg.normalize();
    std::vector<Vertex> u;
    for (int x = 0; x < n; ++x)
      if (rng_next(seed) & 1) u.push_back(x);
    CHECK(switch_graph(switch_graph(rg, u), u) == rg);
    // tau is switching-invariant
    CHECK(tau(switch_graph(rg, u)) == tau(rg));
  }
  // path a-b-c has an even edge count on its unique triple
  auto path = graph_from_edges(3, {{0, 1}, {1, 2}});
  CHECK(tau(path).rels[0].empty());
  auto single = graph_from_edges(3, {{0, 1}});
  CHECK(tau(single).rels[0].empty() == false);
  auto tri = graph_from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK(tau(tri).has3(0, 0, 1, 2));
  // tau(gamma(T, u)) = T
  auto t4 = two_graph_from_triples(4, {{0, 1, 2}, {0, 1, 3}});
  for (Vertex u2 = 0; u2 < 4; ++u2) CHECK(tau(gamma(t4, u2)) == t4);

  // tau(G) = tau(G') iff same switching class: exhaustive on 4 vertices
  std::vector<FinStructure> graphs;
  for (int bits = 0; bits < 64; ++bits) {
    FinStructure gg(class_signature(ClassId::graph()), 4);
    int idx = 0;
    for (int x = 0; x < 4; ++x)
      for (int y = x + 1; y < 4; ++y, ++idx)
        if (bits >> idx & 1) {
          Vertex t[2] = {x, y};
          gg.rels[0].add_closed(t, Symmetry::Set);
        }
    gg.normalize();
    graphs.push_back(gg);
  }
  auto switching_class = [&](const FinStructure& gg) {
    std::set<std::string> orbit;
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<Vertex> u;
      for (int v = 0; v < 4; ++v)
        if (mask >> v & 1) u.push_back(v);
      orbit.insert(switch_graph(gg, u).code());
    }
    return orbit;
  };
  for (auto& g1 : graphs)
    for (auto& g2 : graphs) {
      bool same_tau = tau(g1) == tau(g2);
      bool same_class = switching_class(g1).count(g2.code()) > 0;
      CHECK(same_tau == same_class);
    }
}

TEST_CASE("two-graph amalgam") {
  auto a = two_graph_from_triples(2, {});
  auto b0 = two_graph_from_triples(3, {{0, 1, 2}});
  auto b1 = two_graph_from_triples(3, {});
  auto am = two_graph_amalgam(a, b0, b1, {0, 1}, {0, 1});
  CHECK(am.d.n == 4);
  CHECK(is_member(am.d, ClassId::two_graph()).ok);
  CHECK(is_embedding_map(b0, am.d, am.leg_b));
  CHECK(is_embedding_map(b1, am.d, am.leg_c));

  // B0 = B1 = A gives A back
  auto idm = two_graph_amalgam(b0, b0, b0, {0, 1, 2}, {0, 1, 2});
  CHECK(idm.d == b0);

  // empty base
  FinStructure pt(class_signature(ClassId::two_graph()), 1);
  FinStructure em(class_signature(ClassId::two_graph()), 0);
  auto am2 = two_graph_amalgam(em, pt, pt, {}, {});
  CHECK(am2.d.n == 2);
}

TEST_CASE("superposition and lex product") {
  auto og = ClassId::parse("free_superposition(graph,linear_order)");
  auto sig = class_signature(og);
  FinStructure s(sig, 2);
  Vertex t[2] = {0, 1};
  s.rels[1].add(t);
  s.normalize();
  CHECK(is_member(s, og).ok);  // edge-free ordered graph
  // missing order fails the right reduct
  FinStructure s2(sig, 2);
  auto m = is_member(s2, og);
  CHECK_FALSE(m.ok);
  CHECK(m.reason.find("linear_order") != std::string::npos);

  // lex product of a 2-point tournament with fibres of sizes 1 and 2
  auto lp = ClassId::lex_product(ClassId::tournament(), ClassId::tournament());
  auto base = tournament_from_arcs(2, {{0, 1}});
  FinStructure f1(class_signature(ClassId::tournament()), 1);
  auto f2 = tournament_from_arcs(2, {{0, 1}});
  auto prod = lex_product_structure(lp, base, {f1, f2});
  CHECK(prod.n == 3);
  CHECK(is_member(prod, lp).ok);
  auto dec = lex_decompose(prod, lp);
  CHECK(dec.base.n == 2);
  CHECK(dec.fibers[0].n + dec.fibers[1].n == 3);
  // round trip: rebuild and compare canonical forms
  auto rebuilt = lex_product_structure(lp, dec.base, dec.fibers);
  CHECK(canonical_form(rebuilt).canon == canonical_form(prod).canon);

  // all-singleton fibres reproduce the base
  auto prod2 = lex_product_structure(lp, base, {f1, f1});
  auto dec2 = lex_decompose(prod2, lp);
  CHECK(canonical_form(dec2.base).canon == canonical_form(base).canon);

  // embedding decomposition: embeddings correspond to (base, fibre) tuples
  auto embs = find_embedding_maps(prod2, prod);
  CHECK(!embs.empty());
}

TEST_CASE("semigeneric membership and expansion search") {
  // paper instance: directed 4-cycle with two 2-parts satisfies the parity rule
  auto c = oriented(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(is_member(c, {ClassTag::Semigeneric}).ok);

  // forgetting rel of any expansion member yields a semigeneric member, and
  // every semigeneric member with <= 4 vertices admits at least one expansion
  auto exp_cls = ClassId{ClassTag::SemigenericExpansion};
  auto exp_sig = class_signature(exp_cls);
  for (int n = 1; n <= 4; ++n)
    for (auto& m2 : enumerate_members({ClassTag::Semigeneric}, n)) {
      // exhaustive delta search: enumerate all rel-sets via extension growth is
      // costly; here check via the expansion class member list
      bool found = false;
      for (auto& em : enumerate_members(exp_cls, n)) {
        FinStructure red(class_signature({ClassTag::Semigeneric}), em.n);
        red.rels[0] = em.rels[0];
        if (canonical_form(red).canon == canonical_form(m2).canon) found = true;
      }
      CHECK(found);
    }
  for (auto& em : enumerate_members(exp_cls, 4)) {
    FinStructure red(class_signature({ClassTag::Semigeneric}), em.n);
    red.rels[0] = em.rels[0];
    CHECK(is_member(red, {ClassTag::Semigeneric}).ok);
  }
  (void)exp_sig;
}

TEST_CASE("amalgamation property holds for catalogue classes") {
  // for every problem with |B|,|C| <= 3 over |A| <= 1, some completion exists
  std::vector<ClassId> classes = {
      ClassId::tournament(), ClassId::graph(), ClassId::two_graph(),
      {ClassTag::Circular},  {ClassTag::Betweenness}, {ClassTag::LocalOrderS2},
      {ClassTag::Poset},     ClassId::n_partite(0),   {ClassTag::C4Enlarged}};
  for (auto& cls : classes) {
    for (int na = 0; na <= 1; ++na)
      for (auto& a : enumerate_members(cls, na))
        for (auto& ext_b : enumerate_extensions(a, cls))
          for (auto& ext_c : enumerate_extensions(a, cls)) {
            // search a completion of the 1+1 extension problem by brute force:
            // any member of size |a|+2 admitting both embeddings over a
            bool found = false;
            for (int nd = a.n; nd <= a.n + 2 && !found; ++nd)
              for (auto& d : enumerate_members(cls, nd)) {
                std::vector<std::pair<int, int>> fix;
                for (auto& ea : find_embedding_maps(a, d)) {
                  std::vector<std::pair<int, int>> fb;
                  for (int i = 0; i < a.n; ++i) fb.push_back({i, ea[i]});
                  if (find_embedding_maps(ext_b.ext, d, fb).empty()) continue;
                  if (find_embedding_maps(ext_c.ext, d, fb).empty()) continue;
                  found = true;
                  break;
                }
                if (found) break;
              }
            CHECK(found);
          }
  }
}
