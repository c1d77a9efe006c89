#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "fraisse/katetov.hpp"

namespace fraisse {

namespace {

struct Skeleton2 {
  FinStructure k;
  std::vector<IndexEntry> index;
};

KatetovResult finish2(const FinStructure& a, FinStructure k, std::vector<IndexEntry> index) {
  k.normalize();
  KatetovResult out{a, std::move(k), {}, std::move(index)};
  out.eta.resize(a.n);
  std::iota(out.eta.begin(), out.eta.end(), 0);
  return out;
}

void put2b(FinStructure& k, int rel, Vertex x, Vertex y) {
  Vertex t[2] = {x, y};
  k.rels[rel].add(t);
}

// ------------------------------------------- circle-model oriented graphs

struct CircleModelEngine : Engine {
  ClassTag tag;  // LocalOrderS2, S3Age, QHatAge
  explicit CircleModelEngine(ClassTag t) : tag(t) {}
  ClassId cls() const override { return {tag}; }
  std::string kind() const override { return "bespoke"; }

  int rot() const { return tag == ClassTag::S3Age ? 3 : 2; }

  // label: [u, v] a cut of the hat; [-2, a] the missing antipode (Q-hat)
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    for (auto& c : cuts(a, cls())) out.push_back({{c.u, c.v}});
    if (tag == ClassTag::QHatAge) {
      for (Vertex v = 0; v < a.n; ++v) {
        bool mate = false;
        for (Vertex u = 0; u < a.n; ++u)
          if (u != v && bot(a, u, v)) mate = true;
        if (!mate) out.push_back({{-2, v}});
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    int n = a.n, r = rot();
    int d0 = std::max(14 * n, 6);
    auto pos = realize_circle(a, cls(), d0);
    if (!pos) throw std::invalid_argument("not in class");
    auto hat = hat_completion(a, cls());
    int nh = hat.completed.n;
    // hat positions on grid r*d0
    std::vector<long long> hp(nh);
    if (tag == ClassTag::QHatAge) {
      for (int v = 0; v < n; ++v) hp[v] = 2LL * (*pos)[v];
      for (int v = n; v < nh; ++v) hp[v] = (2LL * (*pos)[hat.antipode[v]] + d0) % (2 * d0);
    } else {
      for (int v = 0; v < nh; ++v)
        hp[v] = (static_cast<long long>(r) * (*pos)[v % n] + (v / n) * d0) % (r * d0);
    }
    long long K = r + 2;
    long long D = static_cast<long long>(r) * d0 * K;
    FinStructure k(a.sig, n + static_cast<int>(labs.size()));
    k.rels[0] = a.rels[0];
    std::vector<IndexEntry> index;
    std::vector<long long> xp(k.n);
    for (int v = 0; v < n; ++v) xp[v] = hp[v] * K;
    for (size_t i = 0; i < labs.size(); ++i) {
      auto& c = labs[i].code;
      Vertex apex = static_cast<Vertex>(n + i);
      long long p;
      if (c[0] == -2) {
        p = (hp[c[1]] * K + (D / 2)) % D;
      } else {
        // offset inside the gap by the rotation class of the cut start
        int j = tag == ClassTag::QHatAge ? 0 : c[0] / n;
        p = (hp[c[0]] * K + j + 1) % D;
      }
      xp[apex] = p;
      index.push_back({labs[i], apex, {}});
    }
    auto classify = [&](long long dd) -> int {
      if (r == 3) {
        if (3 * dd < D) return 1;
        if (3 * dd > 2 * D) return -1;
        return 0;
      }
      if (2 * dd < D) return 1;
      if (2 * dd > D) return -1;
      return 0;
    };
    for (int x = 0; x < k.n; ++x)
      for (int y = 0; y < k.n; ++y) {
        if (x == y || (x < n && y < n)) continue;
        long long dd = ((xp[y] - xp[x]) % D + D) % D;
        if (classify(dd) == 1) put2b(k, 0, x, y);
      }
    return finish2(a, std::move(k), std::move(index));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    auto hata = hat_completion(a, cls());
    auto hatb = hat_completion(b, cls());
    int n = a.n, nb = b.n;
    // hat map induced by f
    auto fhat = [&](int u) -> int {
      if (tag != ClassTag::QHatAge) return f[u % n] + (u / n) * nb;
      if (u < n) return f[u];
      int base = hata.antipode[u];  // base vertex whose mate u is
      int fb = f[base];
      int mate = hatb.antipode[fb];
      return mate;
    };
    if (lab.code[0] == -2) {
      int fb = f[lab.code[1]];
      // if the image already has its mate in b, the apex lands on it
      for (Vertex u = 0; u < nb; ++u)
        if (u != fb && bot(b, u, fb)) return LabelKey{{-3, u}};
      return LabelKey{{-2, fb}};
    }
    int fu = fhat(lab.code[0]);
    // the unique cut of the b-hat starting at fu
    for (auto& c : cuts(b, cls()))
      if (c.u == fu) return LabelKey{{c.u, c.v}};
    throw std::logic_error("no cut starts at the image vertex");
  }
};

// ------------------------------------------------------------- c4-enlarged

struct C4Engine : Engine {
  ClassId cls() const override { return {ClassTag::C4Enlarged}; }
  std::string kind() const override { return "bespoke"; }

  // labels: [-2, a] the missing part mate of a; [p..., P, |Qbar|, Qbar...]
  // where p is the apex pattern over the completed hat (1 = apex beats) and
  // parts are named by their smallest hat vertex
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    auto hat = hat_completion(a, cls());
    const auto& h = hat.completed;
    int nh = h.n;
    auto parts = *bot_parts(h);
    int np = static_cast<int>(parts.size());
    for (Vertex v = 0; v < a.n; ++v)
      if (hat.antipode[v] >= a.n) out.push_back({{-2, v}});
    // extension patterns: choose, per part, which member the apex beats
    for (int mask = 0; mask < (1 << np); ++mask) {
      std::vector<int> beat(nh, 0);  // 1 = apex -> u, else u -> apex
      for (int pi = 0; pi < np; ++pi) {
        Vertex win = parts[pi][mask >> pi & 1];
        Vertex lose = parts[pi][1 - (mask >> pi & 1)];
        beat[win] = 1;
        beat[lose] = 0;
      }
      auto beaten_in = [&](int pi) { return parts[pi][beat[parts[pi][0]] ? 0 : 1]; };
      for (int pi = 0; pi < np; ++pi) {
        // Qbar over parts Q with Q(apex) != Q(P(apex))
        Vertex pe = beaten_in(pi);
        std::vector<int> qs;
        for (int qi = 0; qi < np; ++qi) {
          if (qi == pi) continue;
          // Q(P(e)): the vertex of Q beaten by pe
          Vertex qpe = arc(h, pe, parts[qi][0]) ? parts[qi][0] : parts[qi][1];
          if (beaten_in(qi) != qpe) qs.push_back(qi);
        }
        std::sort(qs.begin(), qs.end());
        do {
          LabelKey l;
          l.code = beat;
          l.code.push_back(pi);
          l.code.push_back(static_cast<int>(qs.size()));
          l.code.insert(l.code.end(), qs.begin(), qs.end());
          out.push_back(std::move(l));
        } while (std::next_permutation(qs.begin(), qs.end()));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto hat = hat_completion(a, cls());
    const auto& h = hat.completed;
    int nh = h.n;
    auto parts = *bot_parts(h);
    auto labs = labels(a);
    int apexes = 0;
    for (auto& l : labs)
      if (l.code[0] != -2) ++apexes;
    FinStructure k(a.sig, nh + apexes);
    k.rels[0] = h.rels[0];
    std::vector<IndexEntry> index;
    std::vector<std::vector<int>> apex_lab;
    int next = nh;
    for (auto& l : labs) {
      if (l.code[0] == -2) {
        index.push_back({l, hat.antipode[l.code[1]], {}});
        continue;
      }
      index.push_back({l, static_cast<Vertex>(next), {}});
      apex_lab.push_back(l.code);
      ++next;
    }
    auto beat = [&](const std::vector<int>& code, int u) { return code[u]; };
    auto part_of = [&](int u) {
      for (size_t pi = 0; pi < parts.size(); ++pi)
        for (auto v : parts[pi])
          if (v == u) return static_cast<int>(pi);
      return -1;
    };
    (void)part_of;
    auto beaten_in = [&](const std::vector<int>& code, int pi) {
      return beat(code, parts[pi][0]) ? parts[pi][0] : parts[pi][1];
    };
    for (int i = 0; i < apexes; ++i) {
      Vertex e = nh + i;
      const auto& code = apex_lab[i];
      for (int u = 0; u < nh; ++u)
        put2b(k, 0, beat(code, u) ? e : u, beat(code, u) ? u : static_cast<Vertex>(e));
      for (int j = i + 1; j < apexes; ++j) {
        Vertex e2 = nh + j;
        const auto& code2 = apex_lab[j];
        int pi = code[nh], pj = code2[nh];
        if (pi != pj) {
          Vertex x = beaten_in(code, pi), y = beaten_in(code2, pj);
          if (arc(h, x, y))
            put2b(k, 0, e, e2);
          else
            put2b(k, 0, e2, e);
          continue;
        }
        std::vector<int> qi(code.begin() + nh + 2, code.end());
        std::vector<int> qj(code2.begin() + nh + 2, code2.end());
        if (qi == qj) continue;  // the reversed twin: no edge
        bool fwd;
        if (qi.size() != qj.size()) {
          // anchored edge: the shorter label's part choice against the longer
          // label's first disagreement choice; blind length tie-breaks would
          // orient both members of a twin part the same way
          bool i_short = qi.size() < qj.size();
          const auto& cs = i_short ? code : code2;
          const auto& cl = i_short ? code2 : code;
          const auto& ql = i_short ? qj : qi;
          Vertex y = beaten_in(cs, cs[nh]);
          Vertex z = beaten_in(cl, ql[0]);
          bool short_beats = arc(h, y, z);
          fwd = i_short ? short_beats : !short_beats;
        } else {
          size_t d = 0;
          while (d < qi.size() && qi[d] == qj[d]) ++d;
          Vertex x = beaten_in(code, qi[d]), y = beaten_in(code2, qj[d]);
          fwd = arc(h, x, y);
        }
        put2b(k, 0, fwd ? e : e2, fwd ? e2 : e);
      }
    }
    return finish2(a, std::move(k), std::move(index));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    auto hata = hat_completion(a, cls());
    auto hatb = hat_completion(b, cls());
    const auto& ha = hata.completed;
    const auto& hb = hatb.completed;
    auto parts_a = *bot_parts(ha);
    auto parts_b = *bot_parts(hb);
    // hat extension of f: mates map to mates
    std::vector<int> fh(ha.n, -1);
    for (int v = 0; v < a.n; ++v) fh[v] = f[v];
    for (int v = a.n; v < ha.n; ++v) fh[v] = hatb.antipode[f[hata.antipode[v]]];
    if (lab.code[0] == -2) {
      int fb = f[lab.code[1]];
      if (hatb.antipode[fb] < b.n) return LabelKey{{-3, hatb.antipode[fb]}};
      return LabelKey{{-2, fb}};
    }
    int nha = ha.n, nhb = hb.n;
    std::vector<int> beat(nhb, -1);
    for (int u = 0; u < nha; ++u) beat[fh[u]] = lab.code[u];
    // new parts: the apex beats the vertex beaten by the image of P(e)
    int pi = lab.code[nha];
    Vertex pe_a = lab.code[parts_a[pi][0]] ? parts_a[pi][0] : parts_a[pi][1];
    Vertex pe_b = fh[pe_a];
    for (size_t qb = 0; qb < parts_b.size(); ++qb) {
      if (beat[parts_b[qb][0]] >= 0) continue;  // image part, already set
      Vertex target = arc(hb, pe_b, parts_b[qb][0]) ? parts_b[qb][0] : parts_b[qb][1];
      for (auto v : parts_b[qb]) beat[v] = v == target ? 1 : 0;
    }
    // part index of the image of P, and transported Qbar
    auto part_index_b = [&](Vertex v) {
      for (size_t i = 0; i < parts_b.size(); ++i)
        for (auto w : parts_b[i])
          if (w == v) return static_cast<int>(i);
      return -1;
    };
    LabelKey out;
    out.code = beat;
    out.code.push_back(part_index_b(pe_b));
    int qlen = lab.code[nha + 1];
    out.code.push_back(qlen);
    for (int i = 0; i < qlen; ++i) {
      int qa = lab.code[nha + 2 + i];
      out.code.push_back(part_index_b(fh[parts_a[qa][0]]));
    }
    return out;
  }
};

// --------------------------------------------------------------- meet trees

struct MeetTreeEngine : Engine {
  ClassId cls() const override { return ClassId::meet_tree(); }
  std::string kind() const override { return "bespoke"; }

  // labels: [0, v] branch at vertex; [1, u, v] inside the cut; [2, u, v]
  // branch point plus apex inside the cut (u = -1 encodes the root cut)
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    for (Vertex v = 0; v < a.n; ++v) out.push_back({{0, v}});
    for (auto& c : cuts(a, cls())) {
      out.push_back({{1, c.u, c.v}});
      out.push_back({{2, c.u, c.v}});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    // fold the extensions through the local rule in label order: inside each
    // cut the in-cut point is amalgamated before the branch pair, which pins
    // the one free choice of the construction
    auto exts = enumerate_extensions(a, cls());
    std::vector<Embedding> embs;
    std::vector<int> apex_of, extra_of;
    for (auto& l : labs) {
      bool matched = false;
      for (auto& e : exts) {
        if (classify(a, e) == l) {
          std::vector<int> incl(a.n);
          std::iota(incl.begin(), incl.end(), 0);
          embs.push_back({a, e.ext, incl});
          apex_of.push_back(e.apex);
          extra_of.push_back(e.ext.n == a.n + 2 ? (e.apex == a.n ? a.n + 1 : a.n) : -1);
          matched = true;
          break;
        }
      }
      if (!matched) throw std::logic_error("meet tree label without extension");
    }
    std::vector<int> order(embs.size());
    std::iota(order.begin(), order.end(), 0);
    auto nt = n_term_amalgam(SaoId{SaoId::Tag::MeetTreeLocal}, a, embs, order);
    // relabel so the base sits first and apexes follow label order
    int m = nt.d.n;
    std::vector<int> map(m, -1);
    int next = 0;
    for (int i = 0; i < a.n; ++i) map[nt.base_leg[i]] = next++;
    std::vector<IndexEntry> index;
    for (size_t i = 0; i < labs.size(); ++i) {
      IndexEntry e{labs[i], -1, {}};
      int av = nt.ext_legs[i][apex_of[i]];
      if (map[av] < 0) map[av] = next++;
      e.apex = map[av];
      if (extra_of[i] >= 0) {
        int wv = nt.ext_legs[i][extra_of[i]];
        if (map[wv] < 0) map[wv] = next++;
        e.extra.push_back(map[wv]);
      }
      index.push_back(std::move(e));
    }
    if (next != m) throw std::logic_error("meet tree amalgam not generated by extensions");
    FinStructure k = nt.d.relabeled(map, m);
    return finish2(a, std::move(k), std::move(index));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    // send the extension to the type of its canonical amalgam with b
    auto exts = enumerate_extensions(a, cls());
    // reconstruct the extension for the label
    int lt = a.sig->index_of("lt");
    (void)lt;
    FinStructure ext;
    Vertex apex = a.n;
    bool found = false;
    for (auto& e : exts) {
      // classify e against the label
      auto kd = classify(a, e);
      if (kd == lab) {
        ext = e.ext;
        apex = e.apex;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("meet tree label without extension");
    std::vector<int> incl(a.n);
    std::iota(incl.begin(), incl.end(), 0);
    AmalgamationProblem p{a, ext, b, incl, f};
    auto am = sao_amalgamate(SaoId{SaoId::Tag::MeetTreeLocal}, p);
    // classify the apex image over b
    FinStructure bx = am.d;
    // restrict to b-image plus the new points
    std::vector<Vertex> keep;
    for (auto v : am.leg_c) keep.push_back(v);
    for (Vertex v = 0; v < ext.n; ++v)
      if (v >= a.n) keep.push_back(am.leg_b[v]);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    auto sub = bx.induced(keep);
    // vertex of the apex inside the restriction
    Vertex ap = -1;
    for (size_t i = 0; i < keep.size(); ++i)
      if (keep[i] == am.leg_b[apex]) ap = static_cast<Vertex>(i);
    // base indices inside the restriction follow am.leg_c order
    std::vector<int> border(keep.size(), -1);
    for (int i = 0; i < b.n; ++i) {
      auto it = std::lower_bound(keep.begin(), keep.end(), am.leg_c[i]);
      border[it - keep.begin()] = i;
    }
    return classify_over(sub, border, b, ap);
  }

  // label of an enumerated extension of `a`
  LabelKey classify(const FinStructure& a, const OnePointExtension& e) const {
    std::vector<int> ident(e.ext.n, -1);
    for (int i = 0; i < a.n; ++i) ident[i] = i;
    return classify_over(e.ext, ident, a, e.apex);
  }

  // classify apex (+ possible fresh branch point) over the base inside `s`;
  // base_of[v] = base index of vertex v of s, or -1 for new points
  LabelKey classify_over(const FinStructure& s, const std::vector<int>& base_of,
                         const FinStructure& base, Vertex apex) const {
    int lt = s.sig->index_of("lt");
    auto le = [&](Vertex x, Vertex y) { return x == y || s.has2(lt, x, y); };
    // highest base vertex below the apex
    int best = -1;
    for (Vertex v = 0; v < s.n; ++v) {
      if (base_of[v] < 0 || !le(v, apex)) continue;
      if (best < 0 || le(static_cast<Vertex>(best), v)) best = v;
    }
    if (best >= 0) {
      bool at_point = true;
      for (Vertex w = 0; w < s.n; ++w) {
        if (base_of[w] < 0 || !s.has2(lt, best, w)) continue;
        Vertex mm = s.meet_of(apex, w);
        if (mm != static_cast<Vertex>(best)) {
          at_point = false;
          // cut (best, w0) with w0 the covering successor toward w
          for (Vertex w0 = 0; w0 < s.n; ++w0) {
            if (base_of[w0] < 0 || !s.has2(lt, best, w0)) continue;
            bool covering = true;
            for (Vertex z = 0; z < s.n; ++z)
              if (base_of[z] >= 0 && s.has2(lt, best, z) && s.has2(lt, z, w0))
                covering = false;
            if (!covering) continue;
            Vertex m0 = s.meet_of(apex, w0);
            if (m0 != static_cast<Vertex>(best)) {
              int kind = m0 == apex ? 1 : 2;
              return LabelKey{{kind, base_of[best], base_of[w0]}};
            }
          }
        }
      }
      if (at_point) return LabelKey{{0, base_of[best]}};
      throw std::logic_error("unclassifiable meet tree extension");
    }
    // root cut
    Vertex root = -1;
    for (Vertex v = 0; v < s.n; ++v) {
      if (base_of[v] < 0) continue;
      bool minimal = true;
      for (Vertex u = 0; u < s.n; ++u)
        if (base_of[u] >= 0 && s.has2(lt, u, v)) minimal = false;
      if (minimal) root = v;
    }
    Vertex mm = s.meet_of(apex, root);
    return LabelKey{{mm == apex ? 1 : 2, -1, base_of[root]}};
  }
};

}  // namespace

std::map<std::string, EnginePtr> make_bespoke_engines_b() {
  std::map<std::string, EnginePtr> m;
  m[ClassId{ClassTag::LocalOrderS2}.to_string()] =
      std::make_shared<CircleModelEngine>(ClassTag::LocalOrderS2);
  m[ClassId{ClassTag::S3Age}.to_string()] =
      std::make_shared<CircleModelEngine>(ClassTag::S3Age);
  m[ClassId{ClassTag::QHatAge}.to_string()] =
      std::make_shared<CircleModelEngine>(ClassTag::QHatAge);
  m[ClassId{ClassTag::C4Enlarged}.to_string()] = std::make_shared<C4Engine>();
  m[ClassId::meet_tree().to_string()] = std::make_shared<MeetTreeEngine>();
  return m;
}

}  // namespace fraisse
