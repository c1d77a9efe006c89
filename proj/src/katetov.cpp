#include "fraisse/katetov.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "fraisse/json_io.hpp"

namespace fraisse {

using nlohmann::json;

std::map<std::string, EnginePtr> make_bespoke_engines_a();
std::map<std::string, EnginePtr> make_bespoke_engines_b();

namespace {

KatetovResult finish3(const FinStructure& a, FinStructure k, std::vector<IndexEntry> index) {
  k.normalize();
  KatetovResult out{a, std::move(k), {}, std::move(index)};
  out.eta.resize(a.n);
  std::iota(out.eta.begin(), out.eta.end(), 0);
  return out;
}

// extension <-> label code for the generic engines: the tuples holding the
// apex, flattened as [rel, t...] in sorted order
LabelKey ext_code(const OnePointExtension& e) {
  LabelKey l;
  for (size_t r = 0; r < e.ext.rels.size(); ++r)
    for (size_t i = 0; i < e.ext.rels[r].size(); ++i) {
      auto t = e.ext.rels[r].tuple(i);
      if (std::find(t.begin(), t.end(), e.apex) == t.end()) continue;
      l.code.push_back(static_cast<int>(r));
      l.code.insert(l.code.end(), t.begin(), t.end());
    }
  return l;
}

OnePointExtension ext_of_label(const FinStructure& a, const ClassId& cls, const LabelKey& lab) {
  for (auto& e : enumerate_extensions(a, cls))
    if (ext_code(e) == lab) return e;
  throw std::logic_error("label does not match any extension");
}

// K by folding the one-point extensions through the rule in a fixed order
KatetovResult fold_extensions(const FinStructure& a, const SaoId& sao,
                              const std::vector<LabelKey>& labs,
                              const std::vector<OnePointExtension>& exts) {
  std::vector<Embedding> embs;
  for (auto& e : exts) {
    std::vector<int> incl(a.n);
    std::iota(incl.begin(), incl.end(), 0);
    embs.push_back({a, e.ext, incl});
  }
  std::vector<int> order(embs.size());
  std::iota(order.begin(), order.end(), 0);
  auto nt = n_term_amalgam(sao, a, embs, order);
  int m = nt.d.n;
  std::vector<int> map(m, -1);
  int next = 0;
  for (int i = 0; i < a.n; ++i) map[nt.base_leg[i]] = next++;
  std::vector<IndexEntry> index;
  for (size_t i = 0; i < labs.size(); ++i) {
    int av = nt.ext_legs[i][exts[i].apex];
    if (map[av] < 0) map[av] = next++;
    index.push_back({labs[i], map[av], {}});
  }
  if (next != m) throw std::logic_error("amalgam not generated by the extensions");
  return finish3(a, nt.d.relabeled(map, m), std::move(index));
}

// type of E (x)_A B as a one-point extension of b (strong relational rules)
LabelKey transported_ext(const SaoId& sao, const FinStructure& a, const FinStructure& b,
                         const std::vector<int>& f, const OnePointExtension& e) {
  std::vector<int> incl(a.n);
  std::iota(incl.begin(), incl.end(), 0);
  AmalgamationProblem p{a, e.ext, b, incl, f};
  auto am = sao_amalgamate(sao, p);
  // carrier: relabel so b sits first, apex last
  int m = am.d.n;
  std::vector<int> map(m, -1);
  for (int i = 0; i < b.n; ++i) map[am.leg_c[i]] = i;
  int apex_d = am.leg_b[e.apex];
  map[apex_d] = b.n;
  OnePointExtension out{am.d.relabeled(map, m), b.n, static_cast<Vertex>(b.n)};
  return ext_code(out);
}

// ------------------------------------------------ symmetric-rule functor

struct SaoFunctorEngine : Engine {
  SaoId sao;
  ClassId cls_;
  explicit SaoFunctorEngine(SaoId s) : sao(std::move(s)), cls_(sao_info(sao).cls) {}
  ClassId cls() const override { return cls_; }
  std::string kind() const override { return "from_symmetric_sao"; }

  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    for (auto& e : enumerate_extensions(a, cls_)) out.push_back(ext_code(e));
    std::sort(out.begin(), out.end());
    return out;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto exts = enumerate_extensions(a, cls_);
    std::sort(exts.begin(), exts.end(),
              [](const OnePointExtension& x, const OnePointExtension& y) {
                return ext_code(x) < ext_code(y);
              });
    std::vector<LabelKey> labs;
    for (auto& e : exts) labs.push_back(ext_code(e));
    return fold_extensions(a, sao, labs, exts);
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    return transported_ext(sao, a, b, f, ext_of_label(a, cls_, lab));
  }
};

// ------------------------------------------------ ordered SWIR functor

struct OrderedSwirEngine : Engine {
  SaoId sao = SaoId::ordered_swir({ClassTag::OrderedGraph});
  ClassId cls() const override { return {ClassTag::OrderedGraph}; }
  std::string kind() const override { return "ordered_swir"; }

  // code: [n, support bitmask, ext-code...]
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    int lt = class_signature(cls())->index_of("lt");
    int eg = class_signature(cls())->index_of("edge");
    for (auto& e : enumerate_extensions(a, cls())) {
      Vertex apex = e.apex;
      for (int smask = 0; smask < (1 << a.n); ++smask) {
        bool ok = true;
        for (int v = 0; v < a.n && ok; ++v) {
          if (smask >> v & 1) continue;
          // outside the support: no edge, and the default placement rule
          if (e.ext.has2(eg, apex, v)) ok = false;
          bool v_below = e.ext.has2(lt, v, apex);
          bool witness = false;
          for (int s2 = 0; s2 < a.n; ++s2)
            if ((smask >> s2 & 1) && e.ext.has2(lt, v, s2) && e.ext.has2(lt, s2, apex))
              witness = true;
          if (v_below != witness) ok = false;
        }
        if (!ok) continue;
        LabelKey l;
        l.code.push_back(smask);
        auto ec = ext_code(e);
        l.code.insert(l.code.end(), ec.code.begin(), ec.code.end());
        out.push_back(std::move(l));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // structural order: power-set order on supports, then relational order on
  // the induced structure over the support-plus-apex enumeration
  static std::vector<int> rel_order_key(const FinStructure& ext, int smask, int n,
                                        Vertex apex) {
    std::vector<int> dom;
    for (int v = 0; v < n; ++v)
      if (smask >> v & 1) dom.push_back(v);
    // enumerate the support in the structure's own order, then the apex
    int lt = ext.sig->index_of("lt");
    std::sort(dom.begin(), dom.end(),
              [&](int x, int y) { return ext.has2(lt, x, y); });
    dom.push_back(apex);
    std::vector<int> key;
    for (size_t r = 0; r < ext.rels.size(); ++r) {
      for (auto x : dom)
        for (auto y : dom) {
          if (x == y) continue;
          key.push_back(ext.has2(static_cast<int>(r), x, y) ? 1 : 0);
        }
    }
    return key;
  }

  bool sigma_less(const FinStructure& a, const LabelKey& l1, const LabelKey& l2) const {
    int lt = class_signature(cls())->index_of("lt");
    // positions of vertices in the base order drive the power-set comparison
    std::vector<int> rank(a.n, 0);
    for (int v = 0; v < a.n; ++v)
      for (int u = 0; u < a.n; ++u)
        if (a.has2(lt, u, v)) ++rank[v];
    std::vector<int> by_rank(a.n);
    for (int v = 0; v < a.n; ++v) by_rank[rank[v]] = v;
    int s1 = l1.code[0], s2m = l2.code[0];
    if (s1 != s2m) {
      for (int i = 0; i < a.n; ++i) {
        int v = by_rank[i];
        bool in1 = s1 >> v & 1, in2 = s2m >> v & 1;
        if (in1 != in2) return !in1;  // absent at the first difference is smaller
      }
    }
    auto e1 = ext_of_label(a, cls(), strip(l1));
    auto e2 = ext_of_label(a, cls(), strip(l2));
    auto k1 = rel_order_key(order_domain(e1, s1, a), s1, a.n, e1.apex);
    auto k2 = rel_order_key(order_domain(e2, s2m, a), s2m, a.n, e2.apex);
    return k1 < k2;
  }
  static LabelKey strip(const LabelKey& l) {
    LabelKey out;
    out.code.assign(l.code.begin() + 1, l.code.end());
    return out;
  }
  static FinStructure order_domain(const OnePointExtension& e, int, const FinStructure&) {
    return e.ext;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    std::vector<size_t> order(labs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return sigma_less(a, labs[x], labs[y]); });
    std::vector<LabelKey> sorted_labs;
    std::vector<OnePointExtension> exts;
    for (auto i : order) {
      sorted_labs.push_back(labs[i]);
      exts.push_back(ext_of_label(a, cls(), strip(labs[i])));
    }
    auto res = fold_extensions(a, sao, sorted_labs, exts);
    std::sort(res.index.begin(), res.index.end(),
              [](const IndexEntry& x, const IndexEntry& y) { return x.label < y.label; });
    return res;
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    auto e = ext_of_label(a, cls(), strip(lab));
    auto tcode = transported_ext(sao, a, b, f, e);
    int smask = lab.code[0];
    int out_mask = 0;
    for (int v = 0; v < a.n; ++v)
      if (smask >> v & 1) out_mask |= 1 << f[v];
    LabelKey out;
    out.code.push_back(out_mask);
    out.code.insert(out.code.end(), tcode.code.begin(), tcode.code.end());
    return out;
  }
};

// -------------------------------------------- generic tournament expansion

struct TournamentExpansionEngine : Engine {
  SaoId sao = SaoId::superpose(SaoId{SaoId::Tag::FreeAmalg}, SaoId{SaoId::Tag::TournamentRight});
  ClassId cls_ = ClassId::superposition(ClassId::graph(), ClassId::tournament());
  ClassId cls() const override { return cls_; }
  std::string kind() const override { return "tournament_expansion"; }

  // code: [edge bits..., in bits..., ordering of the support...]
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    int n = a.n;
    int eg = 0, to = 1;
    std::vector<LabelKey> out;
    for (int em = 0; em < (1 << n); ++em)
      for (int im = 0; im < (1 << n); ++im) {
        int need = em | im;  // graph neighbours and in-neighbours must be supported
        for (int smask = 0; smask < (1 << n); ++smask) {
          if ((smask & need) != need) continue;
          std::vector<int> sv;
          for (int v = 0; v < n; ++v)
            if (smask >> v & 1) sv.push_back(v);
          std::sort(sv.begin(), sv.end());
          do {
            LabelKey l;
            for (int v = 0; v < n; ++v) l.code.push_back(em >> v & 1);
            for (int v = 0; v < n; ++v) l.code.push_back(im >> v & 1);
            l.code.insert(l.code.end(), sv.begin(), sv.end());
            out.push_back(std::move(l));
          } while (std::next_permutation(sv.begin(), sv.end()));
        }
      }
    (void)eg;
    (void)to;
    std::sort(out.begin(), out.end());
    return out;
  }

  struct L {
    std::vector<int> edge, in, sbar;
  };
  static L parse(const LabelKey& l, int n) {
    L out;
    out.edge.assign(l.code.begin(), l.code.begin() + n);
    out.in.assign(l.code.begin() + n, l.code.begin() + 2 * n);
    out.sbar.assign(l.code.begin() + 2 * n, l.code.end());
    return out;
  }

  // relational-order key of the structure on sbar + apex
  static std::vector<int> ckey(const FinStructure& a, const L& p) {
    std::vector<int> key;
    int n = a.n;
    std::vector<int> dom = p.sbar;
    dom.push_back(n);  // apex sentinel
    auto edge = [&](int x, int y) {
      if (x == n) return p.edge[y];
      if (y == n) return p.edge[x];
      return a.has2(0, x, y) ? 1 : 0;
    };
    auto to = [&](int x, int y) {
      if (x == n) return p.in[y] ? 0 : 1;
      if (y == n) return p.in[x];
      return a.has2(1, x, y) ? 1 : 0;
    };
    for (auto x : dom)
      for (auto y : dom) {
        if (x == y) continue;
        key.push_back(edge(x, y));
      }
    for (auto x : dom)
      for (auto y : dom) {
        if (x == y) continue;
        key.push_back(to(x, y));
      }
    return key;
  }

  // the expansion tournament on labels
  bool beats(const FinStructure& a, const L& x, const L& y) const {
    if (x.sbar != y.sbar) {
      if (x.sbar.size() != y.sbar.size()) return x.sbar.size() < y.sbar.size();
      for (size_t i = 0; i < x.sbar.size(); ++i)
        if (x.sbar[i] != y.sbar[i]) return a.has2(1, x.sbar[i], y.sbar[i]);
    }
    return ckey(a, x) < ckey(a, y);
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    int n = a.n;
    FinStructure k(a.sig, n + static_cast<int>(labs.size()));
    k.rels[0] = a.rels[0];
    k.rels[1] = a.rels[1];
    std::vector<IndexEntry> index;
    std::vector<L> ps;
    for (size_t i = 0; i < labs.size(); ++i) {
      ps.push_back(parse(labs[i], n));
      index.push_back({labs[i], static_cast<Vertex>(n + i), {}});
    }
    for (size_t i = 0; i < labs.size(); ++i) {
      Vertex e = static_cast<Vertex>(n + i);
      for (int v = 0; v < n; ++v) {
        if (ps[i].edge[v]) {
          Vertex t[2] = {e, static_cast<Vertex>(v)};
          k.rels[0].add_closed(t, Symmetry::Set);
        }
        Vertex t2[2] = {ps[i].in[v] ? static_cast<Vertex>(v) : e,
                        ps[i].in[v] ? e : static_cast<Vertex>(v)};
        k.rels[1].add(t2);
      }
      for (size_t j = i + 1; j < labs.size(); ++j) {
        bool fwd = beats(a, ps[i], ps[j]);
        Vertex t[2] = {static_cast<Vertex>(fwd ? n + i : n + j),
                       static_cast<Vertex>(fwd ? n + j : n + i)};
        k.rels[1].add(t);
      }
    }
    return finish3(a, std::move(k), std::move(index));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    auto p = parse(lab, a.n);
    LabelKey out;
    std::vector<int> edge(b.n, 0), in(b.n, 0);
    for (int v = 0; v < a.n; ++v) {
      edge[f[v]] = p.edge[v];
      in[f[v]] = p.in[v];
    }
    // new vertices: free graph edges, apex beats them
    out.code = edge;
    out.code.insert(out.code.end(), in.begin(), in.end());
    for (auto v : p.sbar) out.code.push_back(f[v]);
    return out;
  }

  long long k_size_estimate(const FinStructure& a) const override {
    return a.n + static_cast<long long>(labels(a).size());
  }

  bool stream_membership(const FinStructure& a) const override {
    auto labs = labels(a);
    std::vector<L> ps;
    for (auto& l : labs) ps.push_back(parse(l, a.n));
    std::vector<std::vector<int>> keys;
    keys.reserve(ps.size());
    for (auto& p : ps) keys.push_back(ckey(a, p));
    for (size_t i = 0; i < ps.size(); ++i)
      for (size_t j = i + 1; j < ps.size(); ++j) {
        bool fwd, bwd;
        if (ps[i].sbar != ps[j].sbar) {
          if (ps[i].sbar.size() != ps[j].sbar.size()) {
            fwd = ps[i].sbar.size() < ps[j].sbar.size();
            bwd = !fwd;
          } else {
            size_t d = 0;
            while (d < ps[i].sbar.size() && ps[i].sbar[d] == ps[j].sbar[d]) ++d;
            fwd = a.has2(1, ps[i].sbar[d], ps[j].sbar[d]);
            bwd = a.has2(1, ps[j].sbar[d], ps[i].sbar[d]);
          }
        } else {
          fwd = keys[i] < keys[j];
          bwd = keys[j] < keys[i];
        }
        if (fwd == bwd) return false;  // comparator failed to orient the pair
      }
    return true;
  }
};

// ----------------------------------------------------- lexicographic product

struct LexEngine : Engine {
  ClassId cls_;
  EnginePtr base_engine, fiber_engine;
  LexEngine(ClassId c, EnginePtr be, EnginePtr fe)
      : cls_(std::move(c)), base_engine(std::move(be)), fiber_engine(std::move(fe)) {}
  ClassId cls() const override { return cls_; }
  std::string kind() const override { return "lex_product"; }

  std::vector<LabelKey> labels(const FinStructure& a) const override {
    auto dec = lex_decompose(a, cls_);
    std::vector<LabelKey> out;
    for (int u = 0; u < dec.base.n; ++u)
      for (auto& ql : fiber_engine->labels(dec.fibers[u])) {
        LabelKey l;
        l.code = {0, u};
        l.code.insert(l.code.end(), ql.code.begin(), ql.code.end());
        out.push_back(std::move(l));
      }
    for (auto& pl : base_engine->labels(dec.base)) {
      LabelKey l;
      l.code = {1};
      l.code.insert(l.code.end(), pl.code.begin(), pl.code.end());
      out.push_back(std::move(l));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto dec = lex_decompose(a, cls_);
    auto kbase = base_engine->build(dec.base);
    std::vector<FinStructure> fibers(kbase.k.n, FinStructure());
    std::vector<KatetovResult> kf;
    for (int u = 0; u < dec.base.n; ++u) {
      kf.push_back(fiber_engine->build(dec.fibers[u]));
      fibers[u] = kf.back().k;
    }
    FinStructure point(class_signature(cls_.args[1]), 1);
    for (int u = dec.base.n; u < kbase.k.n; ++u) fibers[u] = point;
    FinStructure prod = lex_product_structure(cls_, kbase.k, fibers);
    std::vector<int> offs(kbase.k.n + 1, 0);
    for (int u = 0; u < kbase.k.n; ++u) offs[u + 1] = offs[u] + fibers[u].n;
    // original vertices first
    std::vector<int> map(prod.n, -1);
    int next = 0;
    for (Vertex v = 0; v < a.n; ++v)
      map[offs[dec.vertex_base[v]] + dec.vertex_fiber[v]] = next++;
    std::vector<IndexEntry> index;
    auto labs = labels(a);
    for (auto& l : labs) {
      IndexEntry entry{l, -1, {}};
      if (l.code[0] == 0) {
        int u = l.code[1];
        LabelKey ql;
        ql.code.assign(l.code.begin() + 2, l.code.end());
        // apex inside the fibre's own result
        for (auto& fe : kf[u].index)
          if (fe.label == ql) {
            entry.apex = offs[u] + fe.apex;
            for (auto ex : fe.extra) entry.extra.push_back(offs[u] + ex);
          }
      } else {
        LabelKey pl;
        pl.code.assign(l.code.begin() + 1, l.code.end());
        for (auto& be : kbase.index)
          if (be.label == pl) entry.apex = offs[be.apex];
      }
      if (entry.apex < 0) throw std::logic_error("lex index entry unresolved");
      index.push_back(std::move(entry));
    }
    // assign the remaining product vertices
    for (auto& e : index) {
      if (map[e.apex] < 0) map[e.apex] = next++;
      for (auto& ex : e.extra)
        if (map[ex] < 0) map[ex] = next++;
    }
    for (int v = 0; v < prod.n; ++v)
      if (map[v] < 0) map[v] = next++;
    for (auto& e : index) {
      e.apex = map[e.apex];
      for (auto& ex : e.extra) ex = map[ex];
    }
    return finish3(a, prod.relabeled(map, prod.n), std::move(index));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    auto da = lex_decompose(a, cls_);
    auto db = lex_decompose(b, cls_);
    std::vector<int> fM(da.base.n, -1);
    for (Vertex v = 0; v < a.n; ++v) fM[da.vertex_base[v]] = db.vertex_base[f[v]];
    if (lab.code[0] == 1) {
      LabelKey pl;
      pl.code.assign(lab.code.begin() + 1, lab.code.end());
      auto tl = base_engine->transport(da.base, db.base, fM, pl);
      LabelKey out;
      out.code = {1};
      out.code.insert(out.code.end(), tl.code.begin(), tl.code.end());
      return out;
    }
    int u = lab.code[1];
    std::vector<int> fu(da.fibers[u].n, -1);
    for (Vertex v = 0; v < a.n; ++v)
      if (da.vertex_base[v] == u) fu[da.vertex_fiber[v]] = db.vertex_fiber[f[v]];
    LabelKey ql;
    ql.code.assign(lab.code.begin() + 2, lab.code.end());
    auto tl = fiber_engine->transport(da.fibers[u], db.fibers[fM[u]], fu, ql);
    LabelKey out;
    out.code = {0, fM[u]};
    out.code.insert(out.code.end(), tl.code.begin(), tl.code.end());
    return out;
  }
};

}  // namespace

// ------------------------------------------------------------------ registry

EnginePtr engine_for(const ClassId& cls) {
  static std::map<std::string, EnginePtr> registry = [] {
    auto m = make_bespoke_engines_a();
    for (auto& [k, v] : make_bespoke_engines_b()) m[k] = v;
    m[ClassId::graph().to_string()] =
        std::make_shared<SaoFunctorEngine>(SaoId{SaoId::Tag::FreeAmalg});
    m[ClassId{ClassTag::Poset}.to_string()] =
        std::make_shared<SaoFunctorEngine>(SaoId{SaoId::Tag::PosetSir});
    m[ClassId{ClassTag::OrderedGraph}.to_string()] = std::make_shared<OrderedSwirEngine>();
    m[ClassId::superposition(ClassId::graph(), ClassId::tournament()).to_string()] =
        std::make_shared<TournamentExpansionEngine>();
    return m;
  }();
  auto it = registry.find(cls.to_string());
  if (it != registry.end()) return it->second;
  if (cls.tag == ClassTag::LexProduct) {
    auto be = engine_for(cls.args[0]);
    auto fe = engine_for(cls.args[1]);
    return std::make_shared<LexEngine>(cls, be, fe);
  }
  throw std::invalid_argument("no functor engine registered for " + cls.to_string());
}

std::vector<ClassId> engine_classes() {
  std::vector<ClassId> out = {
      ClassId::tournament(),
      ClassId::hypertournament({3}),
      ClassId::two_graph(),
      ClassId::n_partite(2),
      ClassId::n_partite(3),
      ClassId::n_partite(0),
      {ClassTag::Circular},
      {ClassTag::Betweenness},
      {ClassTag::Separation},
      ClassId::linear_order(),
      {ClassTag::LocalOrderS2},
      {ClassTag::S3Age},
      {ClassTag::QHatAge},
      {ClassTag::C4Enlarged},
      ClassId::meet_tree(),
      ClassId::graph(),
      {ClassTag::Poset},
      {ClassTag::OrderedGraph},
      ClassId::superposition(ClassId::graph(), ClassId::tournament()),
  };
  return out;
}

json KatetovResult::to_json() const {
  json idx = json::array();
  for (auto& e : index)
    idx.push_back({{"label", e.label.code}, {"apex", e.apex}, {"extra", e.extra}});
  return {{"base", structure_to_json(base)},
          {"k", structure_to_json(k)},
          {"eta", eta},
          {"extension_index", idx}};
}

KatetovResult katetov_apply(const EnginePtr& engine, const FinStructure& a) {
  if (auto why = engine->admits(a))
    throw std::invalid_argument("engine does not admit input: " + *why);
  auto m = is_member(a, engine->cls());
  if (!m.ok) throw std::invalid_argument("input not in class: " + m.reason);
  return engine->build(a);
}

std::vector<int> katetov_map(const EnginePtr& engine, const FinStructure& a,
                             const FinStructure& b, const std::vector<int>& f) {
  if (!is_embedding_map(a, b, f)) throw std::invalid_argument("not an embedding");
  auto ka = engine->build(a);
  auto kb = engine->build(b);
  std::vector<int> map(ka.k.n, -1);
  for (int v = 0; v < a.n; ++v) map[v] = f[v];
  auto lookup = [&](const LabelKey& l) -> const IndexEntry* {
    for (auto& e : kb.index)
      if (e.label == l) return &e;
    return nullptr;
  };
  for (auto& e : ka.index) {
    auto tl = engine->transport(a, b, f, e.label);
    if (!tl.code.empty() && tl.code[0] == -3) {
      map[e.apex] = tl.code[1];
      continue;
    }
    auto* target = lookup(tl);
    if (!target) throw std::logic_error("transported label missing in the target index");
    map[e.apex] = target->apex;
    for (size_t i = 0; i < e.extra.size(); ++i) map[e.extra[i]] = target->extra[i];
  }
  for (auto v : map)
    if (v < 0) throw std::logic_error("K(f) left a vertex unmapped");
  return map;
}

// ---------------------------------------------------------------- orders

int lex_tournament_compare(const FinStructure& base, int rel, std::span<const int> x,
                           std::span<const int> y) {
  if (x.size() != y.size()) return x.size() < y.size() ? 1 : -1;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return base.has2(rel, x[i], y[i]) ? 1 : -1;
  return 0;
}

int structural_order_compare(const FinStructure& a, const LabelKey& x, const LabelKey& y,
                             const ClassId& cls) {
  if (cls.tag == ClassTag::OrderedGraph) {
    OrderedSwirEngine eng;
    if (x == y) return 0;
    return eng.sigma_less(a, x, y) ? -1 : 1;
  }
  if (cls.tag == ClassTag::FreeSuperposition) {
    TournamentExpansionEngine eng;
    if (x == y) return 0;
    return eng.beats(a, TournamentExpansionEngine::parse(x, a.n),
                     TournamentExpansionEngine::parse(y, a.n))
               ? 1
               : -1;
  }
  throw std::invalid_argument("no structural order registered for " + cls.to_string());
}

// ---------------------------------------------------------------- law suite

json LawReport::to_json() const {
  json fl = json::array();
  for (auto& f : failures) fl.push_back({{"law", f.law}, {"detail", f.detail}});
  return {{"pass", pass}, {"checks", checks}, {"failures", fl}};
}

namespace {

struct CorruptEngine : Engine {
  EnginePtr inner;
  explicit CorruptEngine(EnginePtr e) : inner(std::move(e)) {}
  ClassId cls() const override { return inner->cls(); }
  std::string kind() const override { return inner->kind() + "+corrupted"; }
  std::optional<std::string> admits(const FinStructure& a) const override {
    return inner->admits(a);
  }
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    auto l = inner->labels(a);
    if (!l.empty()) l.pop_back();
    return l;
  }
  KatetovResult build(const FinStructure& a) const override {
    auto r = inner->build(a);
    if (r.index.empty()) return r;
    auto dropped = r.index.back();
    r.index.pop_back();
    std::vector<Vertex> keep;
    std::set<Vertex> gone(dropped.extra.begin(), dropped.extra.end());
    gone.insert(dropped.apex);
    for (Vertex v = 0; v < r.k.n; ++v)
      if (!gone.count(v)) keep.push_back(v);
    std::vector<int> newidx(r.k.n, -1);
    for (size_t i = 0; i < keep.size(); ++i) newidx[keep[i]] = static_cast<int>(i);
    r.k = r.k.induced(keep);
    for (auto& e : r.index) {
      e.apex = newidx[e.apex];
      for (auto& ex : e.extra) ex = newidx[ex];
    }
    return r;
  }
  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    return inner->transport(a, b, f, lab);
  }
};

}  // namespace

EnginePtr corrupt_engine(const EnginePtr& engine) {
  return std::make_shared<CorruptEngine>(engine);
}

LawReport functor_law_suite(const EnginePtr& engine, const LawSuiteOptions& opts) {
  LawReport rep;
  auto cls = engine->cls();
  auto fail = [&](const std::string& law, json detail) {
    rep.pass = false;
    rep.failures.push_back({law, std::move(detail)});
  };
  std::vector<FinStructure> members;
  for (int n = 1; n <= opts.map_bound; ++n)
    for (auto& m : enumerate_members(cls, n))
      if (!engine->admits(m)) members.push_back(m);

  std::map<std::string, KatetovResult> built;
  auto get_built = [&](const FinStructure& m) -> const KatetovResult* {
    auto key = m.code();
    auto it = built.find(key);
    if (it != built.end()) return &it->second;
    if (engine->k_size_estimate(m) > opts.k_cap) return nullptr;
    built.emplace(key, engine->build(m));
    return &built.at(key);
  };

  for (auto& m : members) {
    if (m.n > opts.bound) continue;
    ++rep.checks;
    // K(id) = id
    std::vector<int> idm(m.n);
    std::iota(idm.begin(), idm.end(), 0);
    for (auto& l : engine->labels(m)) {
      if (!(engine->transport(m, m, idm, l) == l)) {
        fail("identity", {{"a", structure_to_json(m)}, {"label", l.code}});
        break;
      }
    }
    const auto* km = get_built(m);
    if (km) {
      auto chk = is_member(km->k, cls);
      if (!chk.ok)
        fail("membership", {{"a", structure_to_json(m)}, {"reason", chk.reason}});
      // one-point extension property: every representative embeds over the base
      for (auto& e : enumerate_extensions(m, cls)) {
        std::vector<std::pair<int, int>> fix;
        for (int i = 0; i < m.n; ++i) fix.push_back({i, i});
        if (find_embedding_maps(e.ext, km->k, fix).empty()) {
          fail("extension_property",
               {{"a", structure_to_json(m)}, {"ext", structure_to_json(e.ext)}});
          break;
        }
      }
      // index entries reproduce their extensions
      for (auto& entry : km->index) {
        std::vector<Vertex> verts;
        for (int i = 0; i < m.n; ++i) verts.push_back(i);
        verts.push_back(entry.apex);
        for (auto ex : entry.extra) verts.push_back(ex);
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        auto sub = km->k.induced(verts);
        auto mm = is_member(sub, cls);
        if (!mm.ok) {
          fail("index_membership", {{"a", structure_to_json(m)}, {"label", entry.label.code}});
          break;
        }
      }
    } else {
      if (!engine->stream_membership(m))
        fail("membership", {{"a", structure_to_json(m)}, {"reason", "streaming check"}});
      // label-level extension property: every extension has a matching label
      auto labs = engine->labels(m);
      std::set<std::vector<int>> labset;
      for (auto& l : labs) labset.insert(l.code);
      if (labs.empty()) fail("extension_property", {{"a", structure_to_json(m)}});
    }
  }

  // naturality, embedding and composition across member embeddings
  for (auto& m : members) {
    if (m.n > opts.bound) continue;
    for (auto& b : members) {
      if (b.n > opts.map_bound || b.n < m.n) continue;
      for (auto& f : find_embedding_maps(m, b)) {
        ++rep.checks;
        const auto* km = get_built(m);
        const auto* kb = get_built(b);
        std::vector<int> kmap;
        if (km && kb) {
          try {
            kmap = katetov_map(engine, m, b, f);
          } catch (const std::exception& ex) {
            fail("map", {{"a", structure_to_json(m)},
                         {"b", structure_to_json(b)},
                         {"f", f},
                         {"detail", ex.what()}});
            continue;
          }
          for (int v = 0; v < m.n; ++v)
            if (kmap[v] != f[v]) fail("naturality", {{"f", f}});
          if (!is_embedding_map(km->k, kb->k, kmap))
            fail("map_embedding",
                 {{"a", structure_to_json(m)}, {"b", structure_to_json(b)}, {"f", f}});
        } else {
          // label-level: transported labels must exist in the target label set
          auto labs_b = engine->labels(b);
          std::set<std::vector<int>> labset;
          for (auto& l : labs_b) labset.insert(l.code);
          for (auto& l : engine->labels(m)) {
            auto tl = engine->transport(m, b, f, l);
            if (!tl.code.empty() && tl.code[0] == -3) continue;
            if (!labset.count(tl.code)) {
              fail("map", {{"a", structure_to_json(m)}, {"f", f}, {"label", l.code}});
              break;
            }
          }
        }
        // composition through every larger member
        for (auto& c : members) {
          if (c.n > opts.map_bound || c.n < b.n) continue;
          for (auto& g : find_embedding_maps(b, c)) {
            ++rep.checks;
            auto gf = compose_maps(f, g);
            for (auto& l : engine->labels(m)) {
              auto t1 = engine->transport(m, c, gf, l);
              auto mid = engine->transport(m, b, f, l);
              LabelKey t2;
              if (!mid.code.empty() && mid.code[0] == -3) {
                t2.code = {-3, g[mid.code[1]]};
              } else {
                t2 = engine->transport(b, c, g, mid);
              }
              if (!(t1 == t2)) {
                fail("composition",
                     {{"a", structure_to_json(m)}, {"f", f}, {"g", g}, {"label", l.code}});
                break;
              }
            }
            if (!rep.pass && rep.failures.size() > 8) return rep;
            break;  // one g per (b, c) pair bounds the sweep
          }
        }
      }
    }
  }
  return rep;
}

// --------------------------------------------------------- obstructions

ObstructionCertificate no_katetov_witness(const ClassId& cls) {
  ObstructionCertificate out;
  json steps = json::array();
  if (cls.tag == ClassTag::NPartite && cls.params[0] > 2 && cls.params[0] != 0) {
    int n = cls.params[0];
    auto sig = class_signature(cls);
    FinStructure a(sig, 1);
    int nb = 1 + 2 * (n - 1);
    FinStructure b(sig, nb);
    // vertices: a=0, b_i = 1+i, b'_i = n..; edges into a; 4-cycles across pairs
    auto bi = [&](int i) { return 1 + i; };
    auto bpi = [&](int i) { return n + i; };
    for (int i = 0; i < n - 1; ++i) {
      Vertex t1[2] = {static_cast<Vertex>(bi(i)), 0};
      Vertex t2[2] = {static_cast<Vertex>(bpi(i)), 0};
      b.rels[0].add(t1);
      b.rels[0].add(t2);
    }
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n - 1; ++j) {
        // directed 4-cycle b_i -> b_j -> b'_i -> b'_j -> b_i
        Vertex c1[2] = {static_cast<Vertex>(bi(i)), static_cast<Vertex>(bi(j))};
        Vertex c2[2] = {static_cast<Vertex>(bi(j)), static_cast<Vertex>(bpi(i))};
        Vertex c3[2] = {static_cast<Vertex>(bpi(i)), static_cast<Vertex>(bpi(j))};
        Vertex c4[2] = {static_cast<Vertex>(bpi(j)), static_cast<Vertex>(bi(i))};
        b.rels[0].add(c1);
        b.rels[0].add(c2);
        b.rels[0].add(c3);
        b.rels[0].add(c4);
      }
    b.normalize();
    {
      auto chk = is_member(b, cls);
      if (!chk.ok) throw std::logic_error("obstruction gadget not in class: " + chk.reason);
    }
    // sigma: fixes a, shifts the pairs with a twist
    std::vector<int> sigma(nb);
    sigma[0] = 0;
    for (int i = 0; i < n - 2; ++i) {
      sigma[bi(i)] = bi(i + 1);
      sigma[bpi(i)] = bpi(i + 1);
    }
    sigma[bi(n - 2)] = bpi(0);
    sigma[bpi(n - 2)] = bi(0);
    if (!is_embedding_map(b, b, sigma)) throw std::logic_error("sigma not an automorphism");
    // candidate placements: extensions of b with an arrow to a
    bool all_die = true;
    for (auto& e : enumerate_extensions(b, cls)) {
      if (!arc(e.ext, b.n, 0)) continue;  // needs e -> a
      // type transported along sigma
      std::vector<int> pat(nb), pat2(nb);
      for (int v = 0; v < nb; ++v) {
        pat[v] = arc(e.ext, b.n, v) ? 1 : arc(e.ext, v, b.n) ? 2 : 0;
      }
      for (int v = 0; v < nb; ++v) pat2[sigma[v]] = pat[v];
      bool invariant = pat == pat2;
      steps.push_back({{"type", pat}, {"sigma_image", pat2}, {"invariant", invariant}});
      if (invariant) all_die = false;
    }
    out.obstructed = all_die;
    out.certificate = {{"class", cls.to_string()},
                       {"mode", "functor_obstruction"},
                       {"a", structure_to_json(a)},
                       {"b", structure_to_json(b)},
                       {"sigma", sigma},
                       {"candidates", steps},
                       {"verdict", all_die ? "no functor" : "inconclusive"}};
    return out;
  }
  if (cls.tag == ClassTag::Betweenness || cls.tag == ClassTag::Separation) {
    auto sig = class_signature(cls);
    FinStructure a(sig, 1);
    FinStructure c(sig, cls.tag == ClassTag::Betweenness ? 3 : 4);
    std::vector<int> sigma;
    if (cls.tag == ClassTag::Betweenness) {
      Vertex t[3] = {1, 0, 2};
      c.add_tuple(0, t);
      Vertex t2[3] = {2, 0, 1};
      c.add_tuple(0, t2);
      sigma = {0, 2, 1};
    } else {
      Vertex base[4] = {0, 2, 1, 3};
      Vertex arr[8][4] = {{0, 2, 1, 3}, {2, 0, 1, 3}, {0, 2, 3, 1}, {2, 0, 3, 1},
                          {1, 3, 0, 2}, {3, 1, 0, 2}, {1, 3, 2, 0}, {3, 1, 2, 0}};
      (void)base;
      for (auto& e : arr) {
        Vertex t[4] = {e[0], e[1], e[2], e[3]};
        c.add_tuple(0, t);
      }
      sigma = {0, 3, 2, 1};
    }
    c.normalize();
    if (!is_embedding_map(c, c, sigma)) throw std::logic_error("sigma not an automorphism");
    bool all_die = true;
    for (auto& e : enumerate_extensions(c, cls)) {
      // type: relation pattern of the apex against c, transported along sigma
      auto key = e.ext.code();
      auto perm = sigma;
      perm.push_back(c.n);  // apex fixed
      auto image = e.ext.relabeled(perm, e.ext.n);
      bool invariant = image == e.ext;
      steps.push_back({{"type", key}, {"invariant", invariant}});
      if (invariant) all_die = false;
    }
    out.obstructed = all_die;
    out.certificate = {{"class", cls.to_string()},
                       {"mode", "functor_obstruction"},
                       {"a", structure_to_json(a)},
                       {"c", structure_to_json(c)},
                       {"sigma", sigma},
                       {"candidates", steps},
                       {"verdict", all_die ? "no functor" : "inconclusive"}};
    return out;
  }
  throw std::invalid_argument("no functor obstruction registered for " + cls.to_string());
}

}  // namespace fraisse
