#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "fraisse/json_io.hpp"
#include "fraisse/sao.hpp"

namespace fraisse {

using nlohmann::json;

namespace {

struct Pointed {
  FinStructure s;
  std::vector<int> emb;  // a -> s
};

// canonical key of a structure with a pointwise-marked base
std::string marked_key(const FinStructure& s, const std::vector<int>& emb) {
  std::vector<RelSpec> rels = s.sig->relations;
  for (size_t i = 0; i < emb.size(); ++i)
    rels.push_back({"pin" + std::to_string(i), 1, Symmetry::None});
  FinStructure marked(make_signature(std::move(rels), s.sig->has_meet), s.n);
  for (size_t r = 0; r < s.rels.size(); ++r) marked.rels[r] = s.rels[r];
  marked.meet = s.meet;
  for (size_t i = 0; i < emb.size(); ++i) {
    Vertex t[1] = {emb[i]};
    marked.rels[s.rels.size() + i].add(t);
  }
  return canonical_form(marked).canon.code();
}

std::vector<Pointed> pointed_over(const ClassId& cls, const FinStructure& a, int max_size) {
  std::vector<Pointed> out;
  std::map<std::string, bool> seen;
  for (int n = a.n; n <= max_size; ++n)
    for (auto& m : enumerate_members(cls, n))
      for (auto& e : find_embedding_maps(a, m)) {
        auto key = marked_key(m, e);
        if (seen.emplace(key, true).second) out.push_back({m, e});
      }
  return out;
}

json problem_to_json(const AmalgamationProblem& p) {
  return {{"a", structure_to_json(p.a)}, {"b", structure_to_json(p.b)},
          {"c", structure_to_json(p.c)}, {"e", p.e},
          {"f", p.f}};
}

AmalgamationProblem problem_from_json(const json& j) {
  AmalgamationProblem p;
  p.a = structure_from_json(j.at("a"));
  p.b = structure_from_json(j.at("b"));
  p.c = structure_from_json(j.at("c"));
  p.e = j.at("e").get<std::vector<int>>();
  p.f = j.at("f").get<std::vector<int>>();
  return p;
}

// forced map between two amalgams along vertex correspondences of their legs
std::optional<std::vector<int>> forced_map(const Amalgam& from, const Amalgam& to,
                                           const std::vector<int>& b_corr,
                                           const std::vector<int>& c_corr) {
  std::vector<int> j(from.d.n, -1);
  auto assign = [&](int src, int dst) {
    if (j[src] >= 0 && j[src] != dst) return false;
    j[src] = dst;
    return true;
  };
  for (size_t x = 0; x < b_corr.size(); ++x)
    if (!assign(from.leg_b[x], to.leg_b[b_corr[x]])) return std::nullopt;
  for (size_t y = 0; y < c_corr.size(); ++y)
    if (!assign(from.leg_c[y], to.leg_c[c_corr[y]])) return std::nullopt;
  for (auto v : j)
    if (v < 0) return std::nullopt;
  return j;
}

bool is_iso(const FinStructure& x, const FinStructure& y, const std::vector<int>& map) {
  if (x.n != y.n) return false;
  return is_embedding_map(x, y, map);
}

struct Checker {
  SaoId sao;
  SaoInfo info;
  bool class_strong;

  explicit Checker(const SaoId& s) : sao(s), info(sao_info(s)) {
    class_strong = class_has_strong_amalgamation(info.cls);
  }

  Amalgam run(const AmalgamationProblem& p) const { return sao_amalgamate(sao, p); }

  std::optional<std::string> check_basic(const AmalgamationProblem& p, const Amalgam& am) const {
    if (!is_embedding_map(p.b, am.d, am.leg_b)) return "leg_b not an embedding";
    if (!is_embedding_map(p.c, am.d, am.leg_c)) return "leg_c not an embedding";
    for (int i = 0; i < p.a.n; ++i)
      if (am.leg_b[p.e[i]] != am.leg_c[p.f[i]]) return "legs do not commute over the base";
    auto m = is_member(am.d, info.cls);
    if (!m.ok) return "amalgam not in class: " + m.reason;
    std::vector<Vertex> gens;
    for (auto v : am.leg_b) gens.push_back(v);
    for (auto v : am.leg_c) gens.push_back(v);
    auto gen = generated_substructure(am.d, gens);
    if (gen.sub.n != am.d.n) return "amalgam not generated by the leg images";
    if (class_strong) {
      std::vector<char> inb(am.d.n, 0), ina(am.d.n, 0);
      for (auto v : am.leg_b) inb[v] = 1;
      for (int i = 0; i < p.a.n; ++i) ina[am.leg_b[p.e[i]]] = 1;
      for (auto v : am.leg_c)
        if (inb[v] && !ina[v]) return "leg images overlap outside the base";
    }
    return std::nullopt;
  }

  std::optional<std::string> check_iso(const Amalgam& am, const Amalgam& an,
                                       const std::vector<int>& ib,
                                       const std::vector<int>& ic) const {
    auto j = forced_map(am, an, ib, ic);
    if (!j) return "no consistent induced map between amalgams";
    if (!is_iso(am.d, an.d, *j)) return "induced map is not an isomorphism";
    return std::nullopt;
  }

  std::optional<std::string> check_left_tr(const AmalgamationProblem& p, const Amalgam& d1,
                                           const FinStructure& bp,
                                           const std::vector<int>& bmap) const {
    AmalgamationProblem p2{p.b, bp, d1.d, bmap, d1.leg_b};
    auto d2 = run(p2);
    AmalgamationProblem p3{p.a, bp, p.c, compose_maps(p.e, bmap), p.f};
    auto d3 = run(p3);
    std::vector<int> j(d2.d.n, -1);
    auto assign = [&](int src, int dst) {
      if (j[src] >= 0 && j[src] != dst) return false;
      j[src] = dst;
      return true;
    };
    for (int x = 0; x < bp.n; ++x)
      if (!assign(d2.leg_b[x], d3.leg_b[x])) return "left-tr: inconsistent over B'";
    for (int x = 0; x < p.b.n; ++x)
      if (!assign(d2.leg_c[d1.leg_b[x]], d3.leg_b[bmap[x]])) return "left-tr: inconsistent over B";
    for (int y = 0; y < p.c.n; ++y)
      if (!assign(d2.leg_c[d1.leg_c[y]], d3.leg_c[y])) return "left-tr: inconsistent over C";
    for (auto v : j)
      if (v < 0) return "left-tr: map not total";
    if (!is_iso(d2.d, d3.d, j)) return "left-tr: not a diagram isomorphism";
    return std::nullopt;
  }

  std::optional<std::string> check_right_tr(const AmalgamationProblem& p, const Amalgam& d1,
                                            const FinStructure& cp,
                                            const std::vector<int>& cmap) const {
    AmalgamationProblem p2{p.c, d1.d, cp, d1.leg_c, cmap};
    auto d2 = run(p2);
    AmalgamationProblem p3{p.a, p.b, cp, p.e, compose_maps(p.f, cmap)};
    auto d3 = run(p3);
    std::vector<int> j(d2.d.n, -1);
    auto assign = [&](int src, int dst) {
      if (j[src] >= 0 && j[src] != dst) return false;
      j[src] = dst;
      return true;
    };
    for (int x = 0; x < p.b.n; ++x)
      if (!assign(d2.leg_b[d1.leg_b[x]], d3.leg_b[x])) return "right-tr: inconsistent over B";
    for (int y = 0; y < p.c.n; ++y)
      if (!assign(d2.leg_b[d1.leg_c[y]], d3.leg_c[cmap[y]]))
        return "right-tr: inconsistent over C";
    for (int y = 0; y < cp.n; ++y)
      if (!assign(d2.leg_c[y], d3.leg_c[y])) return "right-tr: inconsistent over C'";
    for (auto v : j)
      if (v < 0) return "right-tr: map not total";
    if (!is_iso(d2.d, d3.d, j)) return "right-tr: not a diagram isomorphism";
    return std::nullopt;
  }

  std::optional<std::string> check_mon(const AmalgamationProblem& p, const Amalgam& d1,
                                       const FinStructure& bp,
                                       const std::vector<int>& bmap) const {
    AmalgamationProblem p3{p.a, bp, p.c, compose_maps(p.e, bmap), p.f};
    auto d3 = run(p3);
    std::vector<int> j(d1.d.n, -1);
    for (int x = 0; x < p.b.n; ++x) j[d1.leg_b[x]] = d3.leg_b[bmap[x]];
    for (int y = 0; y < p.c.n; ++y) {
      int src = d1.leg_c[y], dst = d3.leg_c[y];
      if (j[src] >= 0 && j[src] != dst) return "mon: inconsistent forced map";
      j[src] = dst;
    }
    for (auto v : j)
      if (v < 0) return "mon: forced map not total";
    if (!is_embedding_map(d1.d, d3.d, j)) return "mon: forced map not an embedding";
    return std::nullopt;
  }

  std::optional<std::string> check_assoc(const AmalgamationProblem& p, const Amalgam& bc,
                                         const FinStructure& ap, const std::vector<int>& g,
                                         const FinStructure& dd,
                                         const std::vector<int>& h) const {
    AmalgamationProblem left{ap, bc.d, dd, compose_maps(g, bc.leg_c), h};
    auto lhs = run(left);
    AmalgamationProblem cd{ap, p.c, dd, g, h};
    auto cdam = run(cd);
    AmalgamationProblem right{p.a, p.b, cdam.d, p.e, compose_maps(p.f, cdam.leg_b)};
    auto rhs = run(right);
    std::vector<int> j(lhs.d.n, -1);
    auto assign = [&](int src, int dst) {
      if (j[src] >= 0 && j[src] != dst) return false;
      j[src] = dst;
      return true;
    };
    for (int x = 0; x < p.b.n; ++x)
      if (!assign(lhs.leg_b[bc.leg_b[x]], rhs.leg_b[x])) return "assoc: inconsistent over B";
    for (int y = 0; y < p.c.n; ++y)
      if (!assign(lhs.leg_b[bc.leg_c[y]], rhs.leg_c[cdam.leg_b[y]]))
        return "assoc: inconsistent over C";
    for (int z = 0; z < dd.n; ++z)
      if (!assign(lhs.leg_c[z], rhs.leg_c[cdam.leg_c[z]])) return "assoc: inconsistent over D";
    for (auto v : j)
      if (v < 0) return "assoc: map not total";
    if (!is_iso(lhs.d, rhs.d, j)) return "assoc: not a diagram isomorphism";
    return std::nullopt;
  }

  std::optional<std::string> check_base_trivial(const FinStructure& a,
                                                const Pointed& b) const {
    std::vector<int> ida(a.n);
    std::iota(ida.begin(), ida.end(), 0);
    AmalgamationProblem right{a, b.s, a, b.emb, ida};
    auto am = run(right);
    if (am.d.n != b.s.n) return "B (x)_A A has extra points";
    if (!is_iso(b.s, am.d, am.leg_b)) return "B (x)_A A not isomorphic to B";
    AmalgamationProblem left{a, a, b.s, ida, b.emb};
    auto am2 = run(left);
    if (am2.d.n != b.s.n) return "A (x)_A B has extra points";
    if (!is_iso(b.s, am2.d, am2.leg_c)) return "A (x)_A B not isomorphic to B";
    return std::nullopt;
  }

  std::optional<std::string> check_symmetry(const AmalgamationProblem& p,
                                            const Amalgam& am) const {
    AmalgamationProblem q{p.a, p.c, p.b, p.f, p.e};
    auto an = run(q);
    std::vector<int> j(am.d.n, -1);
    auto assign = [&](int src, int dst) {
      if (j[src] >= 0 && j[src] != dst) return false;
      j[src] = dst;
      return true;
    };
    for (int x = 0; x < p.b.n; ++x)
      if (!assign(am.leg_b[x], an.leg_c[x])) return "symmetry: inconsistent over B";
    for (int y = 0; y < p.c.n; ++y)
      if (!assign(am.leg_c[y], an.leg_b[y])) return "symmetry: inconsistent over C";
    for (auto v : j)
      if (v < 0) return "symmetry: map not total";
    if (!is_iso(am.d, an.d, j)) return "symmetry: not a diagram isomorphism";
    return std::nullopt;
  }
};

// deterministic index sampling once a product space exceeds the cap
struct Sampler {
  long long space;
  long long cap;
  uint64_t state;
  bool sampled;
  Sampler(long long space_, long long cap_, uint64_t seed)
      : space(space_), cap(cap_), state(seed ^ 0x9E3779B97F4A7C15ULL), sampled(space_ > cap_) {}
  template <typename F>
  void for_each(F&& fn) {
    if (space <= 0) return;
    if (!sampled) {
      for (long long i = 0; i < space; ++i) fn(i);
      return;
    }
    for (long long k = 0; k < cap; ++k) {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      fn(static_cast<long long>(state % static_cast<uint64_t>(space)));
    }
  }
};

SaoAuditReport audit_impl(const SaoId& sao, const AuditOptions& opts,
                          const std::function<Amalgam(const AmalgamationProblem&)>& amalg) {
  Checker ck(sao);
  SaoAuditReport rep{sao, opts, {}};
  auto info = ck.info;

  AxiomResult basic{"minimality+membership+legs+strongness"};
  AxiomResult inv{"invariance"};
  AxiomResult equi{"equivariance"};
  AxiomResult ltr{"left_transitivity"};
  AxiomResult rtr{"right_transitivity"};
  AxiomResult mon{"monotonicity"};
  AxiomResult assoc{"associativity"};
  AxiomResult basetriv{"base_triviality"};
  AxiomResult symm{"symmetry"};

  uint64_t seed = opts.seed;
  std::vector<FinStructure> bases;
  for (int n = info.local ? 1 : 0; n <= opts.max_a; ++n)
    for (auto& a : enumerate_members(info.cls, n)) bases.push_back(a);

  for (auto& a : bases) {
    auto pb = pointed_over(info.cls, a, opts.max_b);
    auto pc = opts.max_c == opts.max_b ? pb : pointed_over(info.cls, a, opts.max_c);
    long long space = static_cast<long long>(pb.size()) * pc.size();

    for (auto& b : pb) {
      if (!basetriv.pass) break;
      ++basetriv.checked;
      if (auto err = ck.check_base_trivial(a, b)) {
        basetriv.pass = false;
        basetriv.counterexample = {{"axiom", "base_triviality"},
                                   {"a", structure_to_json(a)},
                                   {"b", structure_to_json(b.s)},
                                   {"emb", b.emb},
                                   {"detail", *err}};
      }
    }

    Sampler main_sampler(space, opts.problem_cap, seed);
    bool s1 = main_sampler.sampled;
    basic.sampled |= s1;
    inv.sampled |= s1;
    equi.sampled |= s1;
    symm.sampled |= s1;
    main_sampler.for_each([&](long long idx) {
      if (!basic.pass && !inv.pass && !equi.pass && !symm.pass) return;
      const auto& B = pb[idx / pc.size()];
      const auto& C = pc[idx % pc.size()];
      AmalgamationProblem p{a, B.s, C.s, B.emb, C.emb};
      Amalgam am;
      try {
        am = amalg(p);
      } catch (const std::exception& ex) {
        if (basic.pass) {
          basic.pass = false;
          basic.counterexample = {{"axiom", "basic"},
                                  {"problem", problem_to_json(p)},
                                  {"detail", std::string("exception: ") + ex.what()}};
        }
        return;
      }
      ++basic.checked;
      if (basic.pass)
        if (auto err = ck.check_basic(p, am)) {
          basic.pass = false;
          basic.counterexample = {
              {"axiom", "basic"}, {"problem", problem_to_json(p)}, {"detail", *err}};
        }
      if (inv.pass) {
        for (auto& ia : automorphism_maps(p.a)) {
          std::vector<std::pair<int, int>> fixb, fixc;
          for (int i = 0; i < p.a.n; ++i) {
            fixb.push_back({p.e[i], p.e[ia[i]]});
            fixc.push_back({p.f[i], p.f[ia[i]]});
          }
          for (auto& ib : find_embedding_maps(p.b, p.b, fixb)) {
            for (auto& ic : find_embedding_maps(p.c, p.c, fixc)) {
              ++inv.checked;
              if (auto err = ck.check_iso(am, am, ib, ic)) {
                inv.pass = false;
                inv.counterexample = {{"axiom", "invariance"},
                                      {"problem", problem_to_json(p)},
                                      {"ib", ib},
                                      {"ic", ic},
                                      {"detail", *err}};
                break;
              }
            }
            if (!inv.pass) break;
          }
          if (!inv.pass) break;
        }
      }
      if (equi.pass) {
        uint64_t s2 = seed + 7919 * (idx + 1);
        auto perm = [&](int n) {
          std::vector<int> pm(n);
          std::iota(pm.begin(), pm.end(), 0);
          for (int i = n - 1; i > 0; --i) {
            s2 ^= s2 << 13;
            s2 ^= s2 >> 7;
            s2 ^= s2 << 17;
            std::swap(pm[i], pm[s2 % (i + 1)]);
          }
          return pm;
        };
        auto pa = perm(p.a.n), pbm = perm(p.b.n), pcm = perm(p.c.n);
        AmalgamationProblem q{p.a.relabeled(pa, p.a.n), p.b.relabeled(pbm, p.b.n),
                              p.c.relabeled(pcm, p.c.n), std::vector<int>(p.a.n),
                              std::vector<int>(p.a.n)};
        for (int i = 0; i < p.a.n; ++i) {
          q.e[pa[i]] = pbm[p.e[i]];
          q.f[pa[i]] = pcm[p.f[i]];
        }
        ++equi.checked;
        try {
          auto an = amalg(q);
          if (auto err = ck.check_iso(am, an, pbm, pcm)) {
            equi.pass = false;
            equi.counterexample = {{"axiom", "equivariance"},
                                   {"problem", problem_to_json(p)},
                                   {"pa", pa},
                                   {"pb", pbm},
                                   {"pc", pcm},
                                   {"detail", *err}};
          }
        } catch (const std::exception& ex) {
          equi.pass = false;
          equi.counterexample = {{"axiom", "equivariance"},
                                 {"problem", problem_to_json(p)},
                                 {"detail", std::string("exception: ") + ex.what()}};
        }
      }
      if (info.symmetric && symm.pass) {
        ++symm.checked;
        if (auto err = ck.check_symmetry(p, am)) {
          symm.pass = false;
          symm.counterexample = {
              {"axiom", "symmetry"}, {"problem", problem_to_json(p)}, {"detail", *err}};
        }
      }
    });

    long long tr_space = space * static_cast<long long>(pb.size());
    Sampler tr_sampler(tr_space, opts.problem_cap, seed + 1);
    bool s2f = tr_sampler.sampled;
    ltr.sampled |= s2f;
    rtr.sampled |= s2f;
    mon.sampled |= s2f;
    tr_sampler.for_each([&](long long idx) {
      if (!ltr.pass && !rtr.pass && !mon.pass) return;
      long long pi = idx / pb.size();
      const auto& BP = pb[idx % pb.size()];
      const auto& B = pb[pi / pc.size()];
      const auto& C = pc[pi % pc.size()];
      AmalgamationProblem p{a, B.s, C.s, B.emb, C.emb};
      Amalgam d1;
      try {
        d1 = amalg(p);
      } catch (...) {
        return;
      }
      for (auto& bmap : find_embedding_maps(B.s, BP.s)) {
        if (ltr.pass) {
          ++ltr.checked;
          try {
            if (auto err = ck.check_left_tr(p, d1, BP.s, bmap)) {
              ltr.pass = false;
              ltr.counterexample = {{"axiom", "left_transitivity"},
                                    {"problem", problem_to_json(p)},
                                    {"bprime", structure_to_json(BP.s)},
                                    {"bmap", bmap},
                                    {"detail", *err}};
            }
          } catch (const std::exception& ex) {
            ltr.pass = false;
            ltr.counterexample = {{"axiom", "left_transitivity"},
                                  {"problem", problem_to_json(p)},
                                  {"detail", std::string("exception: ") + ex.what()}};
          }
        }
        if (mon.pass) {
          ++mon.checked;
          if (auto err = ck.check_mon(p, d1, BP.s, bmap)) {
            mon.pass = false;
            mon.counterexample = {{"axiom", "monotonicity"},
                                  {"problem", problem_to_json(p)},
                                  {"bprime", structure_to_json(BP.s)},
                                  {"bmap", bmap},
                                  {"detail", *err}};
          }
        }
      }
      if (rtr.pass)
        for (auto& cmap : find_embedding_maps(C.s, BP.s)) {
          ++rtr.checked;
          try {
            if (auto err = ck.check_right_tr(p, d1, BP.s, cmap)) {
              rtr.pass = false;
              rtr.counterexample = {{"axiom", "right_transitivity"},
                                    {"problem", problem_to_json(p)},
                                    {"cprime", structure_to_json(BP.s)},
                                    {"cmap", cmap},
                                    {"detail", *err}};
            }
          } catch (const std::exception& ex) {
            rtr.pass = false;
            rtr.counterexample = {{"axiom", "right_transitivity"},
                                  {"problem", problem_to_json(p)},
                                  {"detail", std::string("exception: ") + ex.what()}};
          }
        }
    });

    if (opts.check_assoc) {
      Sampler as(space, std::max<long long>(opts.problem_cap / 16, 1), seed + 2);
      assoc.sampled |= as.sampled;
      as.for_each([&](long long idx) {
        if (!assoc.pass) return;
        const auto& B = pb[idx / pc.size()];
        const auto& C = pc[idx % pc.size()];
        AmalgamationProblem p{a, B.s, C.s, B.emb, C.emb};
        Amalgam bc;
        try {
          bc = amalg(p);
        } catch (...) {
          return;
        }
        for (auto& ap : bases) {
          if (info.local && ap.n == 0) continue;
          auto gs = find_embedding_maps(ap, C.s);
          if (gs.empty()) continue;
          auto pd = pointed_over(info.cls, ap, std::min(opts.max_c, ap.n + 2));
          for (auto& g : gs) {
            for (auto& D : pd) {
              ++assoc.checked;
              try {
                if (auto err = ck.check_assoc(p, bc, ap, g, D.s, D.emb)) {
                  assoc.pass = false;
                  assoc.counterexample = {{"axiom", "associativity"},
                                          {"problem", problem_to_json(p)},
                                          {"aprime", structure_to_json(ap)},
                                          {"g", g},
                                          {"d", structure_to_json(D.s)},
                                          {"h", D.emb},
                                          {"detail", *err}};
                }
              } catch (const std::exception& ex) {
                assoc.pass = false;
                assoc.counterexample = {{"axiom", "associativity"},
                                        {"problem", problem_to_json(p)},
                                        {"detail", std::string("exception: ") + ex.what()}};
              }
              if (!assoc.pass) return;
              break;  // one pointed D per (A', g)
            }
            break;  // one g per A'
          }
        }
      });
    }
  }

  rep.axioms = {basic, inv, equi, ltr, rtr, mon, basetriv};
  if (opts.check_assoc) rep.axioms.push_back(assoc);
  if (info.symmetric) rep.axioms.push_back(symm);
  return rep;
}

}  // namespace

json SaoAuditReport::to_json() const {
  json ax = json::array();
  for (auto& a : axioms)
    ax.push_back({{"axiom", a.axiom},
                  {"pass", a.pass},
                  {"checked", a.checked},
                  {"sampled", a.sampled},
                  {"counterexample", a.counterexample}});
  return {{"sao", sao.to_string()},
          {"bounds", {{"max_a", opts.max_a}, {"max_b", opts.max_b}, {"max_c", opts.max_c}}},
          {"pass", all_pass()},
          {"axioms", ax}};
}

SaoAuditReport audit_sao(const SaoId& sao, const AuditOptions& opts) {
  return audit_impl(sao, opts,
                    [&](const AmalgamationProblem& p) { return sao_amalgamate(sao, p); });
}

SaoAuditReport audit_sao_corrupted(const SaoId& sao, const AuditOptions& opts) {
  return audit_impl(
      sao, opts, [&](const AmalgamationProblem& p) { return sao_amalgamate_corrupted(sao, p); });
}

bool audit_replay(const SaoId& sao, const json& cx) {
  Checker ck(sao);
  std::string axiom = cx.at("axiom").get<std::string>();
  if (axiom == "base_triviality") {
    auto a = structure_from_json(cx.at("a"));
    Pointed b{structure_from_json(cx.at("b")), cx.at("emb").get<std::vector<int>>()};
    return ck.check_base_trivial(a, b).has_value();
  }
  auto p = problem_from_json(cx.at("problem"));
  Amalgam am;
  try {
    am = sao_amalgamate(sao, p);
  } catch (...) {
    return axiom == "basic";
  }
  if (axiom == "basic") return ck.check_basic(p, am).has_value();
  if (axiom == "invariance")
    return ck
        .check_iso(am, am, cx.at("ib").get<std::vector<int>>(),
                   cx.at("ic").get<std::vector<int>>())
        .has_value();
  if (axiom == "equivariance") {
    auto pa = cx.at("pa").get<std::vector<int>>();
    auto pbm = cx.at("pb").get<std::vector<int>>();
    auto pcm = cx.at("pc").get<std::vector<int>>();
    AmalgamationProblem q{p.a.relabeled(pa, p.a.n), p.b.relabeled(pbm, p.b.n),
                          p.c.relabeled(pcm, p.c.n), std::vector<int>(p.a.n),
                          std::vector<int>(p.a.n)};
    for (int i = 0; i < p.a.n; ++i) {
      q.e[pa[i]] = pbm[p.e[i]];
      q.f[pa[i]] = pcm[p.f[i]];
    }
    auto an = sao_amalgamate(sao, q);
    return ck.check_iso(am, an, pbm, pcm).has_value();
  }
  if (axiom == "left_transitivity")
    return ck
        .check_left_tr(p, am, structure_from_json(cx.at("bprime")),
                       cx.at("bmap").get<std::vector<int>>())
        .has_value();
  if (axiom == "right_transitivity")
    return ck
        .check_right_tr(p, am, structure_from_json(cx.at("cprime")),
                        cx.at("cmap").get<std::vector<int>>())
        .has_value();
  if (axiom == "monotonicity")
    return ck
        .check_mon(p, am, structure_from_json(cx.at("bprime")),
                   cx.at("bmap").get<std::vector<int>>())
        .has_value();
  if (axiom == "associativity")
    return ck
        .check_assoc(p, am, structure_from_json(cx.at("aprime")),
                     cx.at("g").get<std::vector<int>>(), structure_from_json(cx.at("d")),
                     cx.at("h").get<std::vector<int>>())
        .has_value();
  if (axiom == "symmetry") return ck.check_symmetry(p, am).has_value();
  return false;
}

}  // namespace fraisse
