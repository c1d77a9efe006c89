#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "fraisse/katetov.hpp"
#include "helpers.hpp"

using namespace fraisse;
using namespace fraisse::testing;

TEST_CASE("tournament functor on a singleton") {
  auto engine = engine_for(ClassId::tournament());
  FinStructure pt(class_signature(ClassId::tournament()), 1);
  auto r = katetov_apply(engine, pt);
  REQUIRE(r.k.n == 3);
  // labels: empty in-neighbourhood copy beats the other copy and the point
  // index is sorted by code: [0] (empty enum) before [1,0]
  Vertex e_empty = r.index[0].apex;
  Vertex e_a = r.index[1].apex;
  CHECK(arc(r.k, e_empty, 0));
  CHECK(arc(r.k, 0, e_a));
  CHECK(arc(r.k, e_empty, e_a));
}

TEST_CASE("two-graph functor satisfies the parity identities") {
  auto engine = engine_for(ClassId::two_graph());
  for (int n = 1; n <= 3; ++n)
    for (auto& a : enumerate_members(ClassId::two_graph(), n)) {
      auto r = katetov_apply(engine, a);
      auto chk = is_member(r.k, ClassId::two_graph());
      INFO(chk.reason);
      CHECK(chk.ok);  // even 3-edge count on every 4-subset
    }
}

TEST_CASE("circular functor adds one point per cut") {
  auto engine = engine_for(ClassId{ClassTag::Circular});
  auto circ3 = enumerate_members({ClassTag::Circular}, 3)[0];
  auto r = katetov_apply(engine, circ3);
  CHECK(r.k.n == 6);
  CHECK(is_member(r.k, {ClassTag::Circular}).ok);
  // every apex sits inside its cut: gamma(u, apex, v)
  for (auto& e : r.index) {
    Vertex u = e.label.code[0], v = e.label.code[1];
    CHECK(r.k.has3(0, u, e.apex, v));
  }
  FinStructure pt(class_signature({ClassTag::Circular}), 1);
  CHECK(katetov_apply(engine, pt).k.n == 2);
}

TEST_CASE("meet-tree functor realizes every extension type") {
  auto engine = engine_for(ClassId::meet_tree());
  auto chains = enumerate_members(ClassId::meet_tree(), 2);
  REQUIRE(chains.size() == 1);
  auto r = katetov_apply(engine, chains[0]);
  CHECK(is_member(r.k, ClassId::meet_tree()).ok);
  for (auto& ext : enumerate_extensions(chains[0], ClassId::meet_tree())) {
    std::vector<std::pair<int, int>> fix;
    for (int i = 0; i < 2; ++i) fix.push_back({i, i});
    CHECK_FALSE(find_embedding_maps(ext.ext, r.k, fix).empty());
  }
}

TEST_CASE("lex tournament comparison") {
  auto c3 = cycle3();
  std::vector<int> x = {0}, y = {0, 1}, z = {1};
  CHECK(lex_tournament_compare(c3, 0, x, y) == 1);   // shorter first
  CHECK(lex_tournament_compare(c3, 0, x, z) == 1);   // 0 -> 1 in the cycle
  CHECK(lex_tournament_compare(c3, 0, z, x) == -1);
  CHECK(lex_tournament_compare(c3, 0, x, x) == 0);
}

TEST_CASE("structural order on ordered-graph labels") {
  ClassId og{ClassTag::OrderedGraph};
  auto engine = engine_for(og);
  auto members = enumerate_members(og, 2);
  REQUIRE(!members.empty());
  auto& a = members[0];
  auto labs = engine->labels(a);
  REQUIRE(labs.size() >= 2);
  // the order is total and irreflexive on distinct labels
  for (size_t i = 0; i < labs.size(); ++i)
    for (size_t j = 0; j < labs.size(); ++j) {
      int c = structural_order_compare(a, labs[i], labs[j], og);
      if (i == j)
        CHECK(c == 0);
      else
        CHECK(c == -structural_order_compare(a, labs[j], labs[i], og));
    }
  // empty support precedes any non-empty support
  const LabelKey* empty_s = nullptr;
  const LabelKey* some_s = nullptr;
  for (auto& l : labs) {
    if (l.code[0] == 0 && !empty_s) empty_s = &l;
    if (l.code[0] != 0 && !some_s) some_s = &l;
  }
  if (empty_s && some_s) CHECK(structural_order_compare(a, *empty_s, *some_s, og) < 0);
}

TEST_CASE("transport is monotone for the ordered engine") {
  ClassId og{ClassTag::OrderedGraph};
  auto engine = engine_for(og);
  for (auto& a : enumerate_members(og, 2))
    for (auto& b : enumerate_members(og, 3))
      for (auto& f : find_embedding_maps(a, b)) {
        auto labs = engine->labels(a);
        for (size_t i = 0; i < labs.size(); ++i)
          for (size_t j = 0; j < labs.size(); ++j) {
            if (i == j) continue;
            int before = structural_order_compare(a, labs[i], labs[j], og);
            auto ti = engine->transport(a, b, f, labs[i]);
            auto tj = engine->transport(a, b, f, labs[j]);
            int after = structural_order_compare(b, ti, tj, og);
            CHECK(before == after);
          }
      }
}

TEST_CASE("law suites pass at small bounds") {
  struct Row {
    ClassId cls;
    int bound;
    int map_bound;
  };
  std::vector<Row> rows = {
      {ClassId::tournament(), 3, 3},
      {ClassId::two_graph(), 3, 3},
      {ClassId::hypertournament({3}), 3, 3},
      {ClassId::n_partite(2), 3, 3},
      {ClassId::n_partite(3), 4, 4},
      {ClassId::n_partite(0), 3, 3},
      {{ClassTag::Circular}, 3, 3},
      {{ClassTag::Betweenness}, 3, 3},
      {{ClassTag::Separation}, 4, 4},
      {ClassId::linear_order(), 3, 4},
      {{ClassTag::LocalOrderS2}, 3, 3},
      {{ClassTag::S3Age}, 3, 3},
      {{ClassTag::QHatAge}, 3, 3},
      {{ClassTag::C4Enlarged}, 3, 3},
      {ClassId::meet_tree(), 3, 3},
      {ClassId::graph(), 3, 3},
      {{ClassTag::Poset}, 3, 3},
      {{ClassTag::OrderedGraph}, 3, 3},
      {ClassId::superposition(ClassId::graph(), ClassId::tournament()), 2, 3},
      {ClassId::lex_product(ClassId::tournament(), ClassId::tournament()), 2, 3},
  };
  for (auto& row : rows) {
    auto engine = engine_for(row.cls);
    LawSuiteOptions opts;
    opts.bound = row.bound;
    opts.map_bound = row.map_bound;
    auto rep = functor_law_suite(engine, opts);
    INFO(row.cls.to_string(), " ", rep.to_json().dump().substr(0, 800));
    CHECK(rep.pass);
  }
}

TEST_CASE("corrupted engine fails the extension property") {
  auto engine = corrupt_engine(engine_for(ClassId::tournament()));
  LawSuiteOptions opts;
  opts.bound = 2;
  opts.map_bound = 2;
  auto rep = functor_law_suite(engine, opts);
  CHECK_FALSE(rep.pass);
  bool ext_failed = false;
  for (auto& f : rep.failures)
    if (f.law == "extension_property" || f.law == "map" || f.law == "index_membership")
      ext_failed = true;
  CHECK(ext_failed);
}

TEST_CASE("symmetric-rule functor is enumeration-order independent") {
  auto engine = engine_for(ClassId::graph());
  for (auto& a : enumerate_members(ClassId::graph(), 3)) {
    auto r = katetov_apply(engine, a);
    // rebuilding after a relabeling of a gives an isomorphic K
    std::vector<int> perm(a.n);
    for (int i = 0; i < a.n; ++i) perm[i] = (i + 1) % a.n;
    auto a2 = a.relabeled(perm, a.n);
    auto r2 = katetov_apply(engine, a2);
    CHECK(canonical_form(r.k).canon == canonical_form(r2.k).canon);
  }
}

TEST_CASE("functor obstructions") {
  for (auto cls : {ClassId::n_partite(3), ClassId{ClassTag::Betweenness},
                   ClassId{ClassTag::Separation}}) {
    auto cert = no_katetov_witness(cls);
    INFO(cls.to_string());
    CHECK(cert.obstructed);
    CHECK(cert.certificate.at("verdict") == "no functor");
  }
  CHECK_THROWS(no_katetov_witness(ClassId{ClassTag::OrderedGraph}));
  CHECK_THROWS(no_katetov_witness(ClassId::tournament()));
}

TEST_CASE("betweenness map hits both endpoint branches") {
  ClassId cls{ClassTag::Betweenness};
  auto engine = engine_for(cls);
  auto m2 = enumerate_members(cls, 2)[0];
  auto m3 = enumerate_members(cls, 3)[0];
  int hit_cut = 0, hit_endpoint = 0;
  for (auto& f : find_embedding_maps(m2, m3)) {
    auto km = katetov_map(engine, m2, m3, f);
    auto ka = katetov_apply(engine, m2);
    auto kb = katetov_apply(engine, m3);
    CHECK(is_embedding_map(ka.k, kb.k, km));
    for (auto& e : ka.index) {
      if (e.label.code[1] != -1) continue;
      auto tl = engine->transport(m2, m3, f, e.label);
      (tl.code[1] == -1 ? hit_endpoint : hit_cut) += 1;
    }
  }
  CHECK(hit_cut > 0);       // endpoint image falls beside an interior vertex
  CHECK(hit_endpoint > 0);  // endpoint image stays an endpoint
}
