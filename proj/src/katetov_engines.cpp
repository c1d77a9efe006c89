#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "fraisse/katetov.hpp"

namespace fraisse {

std::optional<std::string> Engine::admits(const FinStructure& a) const {
  if (a.n == 0) return "empty structure";
  return std::nullopt;
}

long long Engine::k_size_estimate(const FinStructure& a) const {
  return a.n + static_cast<long long>(labels(a).size());
}

bool Engine::stream_membership(const FinStructure& a) const {
  return is_member(build(a).k, cls()).ok;
}

namespace {

// shared scaffolding: base copied onto vertices 0..n-1, apexes appended
struct Skeleton {
  FinStructure k;
  std::vector<IndexEntry> index;
};

Skeleton skeleton(const FinStructure& a, const std::vector<LabelKey>& labs) {
  Skeleton s{FinStructure(a.sig, a.n + static_cast<int>(labs.size())), {}};
  for (size_t r = 0; r < a.rels.size(); ++r) s.k.rels[r] = a.rels[r];
  for (size_t i = 0; i < labs.size(); ++i)
    s.index.push_back({labs[i], static_cast<Vertex>(a.n + i), {}});
  return s;
}

KatetovResult finish(const FinStructure& a, Skeleton s) {
  s.k.normalize();
  KatetovResult out{a, std::move(s.k), {}, std::move(s.index)};
  out.eta.resize(a.n);
  std::iota(out.eta.begin(), out.eta.end(), 0);
  return out;
}

void put2(FinStructure& k, int rel, Vertex x, Vertex y) {
  Vertex t[2] = {x, y};
  k.rels[rel].add(t);
}

std::vector<std::vector<int>> perms_of(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// ---------------------------------------------------------------- tournament

struct TournamentEngine : Engine {
  ClassId cls() const override { return ClassId::tournament(); }
  std::string kind() const override { return "bespoke"; }

  // code: [p_0..p_{n-1}, enum...] with p_a = 1 iff a beats the apex
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    int n = a.n;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> in;
      for (int v = 0; v < n; ++v)
        if (mask >> v & 1) in.push_back(v);
      for (auto& e : perms_of(in)) {
        LabelKey l;
        for (int v = 0; v < n; ++v) l.code.push_back(mask >> v & 1);
        l.code.insert(l.code.end(), e.begin(), e.end());
        out.push_back(std::move(l));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  static std::span<const int> enum_part(const LabelKey& l, int n) {
    return {l.code.data() + n, l.code.size() - n};
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    auto s = skeleton(a, labs);
    int n = a.n;
    for (size_t i = 0; i < labs.size(); ++i) {
      Vertex e = s.index[i].apex;
      for (int v = 0; v < n; ++v)
        put2(s.k, 0, labs[i].code[v] ? v : e, labs[i].code[v] ? e : v);
      for (size_t j = i + 1; j < labs.size(); ++j) {
        Vertex e2 = s.index[j].apex;
        auto vi = enum_part(labs[i], n);
        auto vj = enum_part(labs[j], n);
        bool fwd;
        if (vi.size() != vj.size())
          fwd = vi.size() < vj.size();
        else {
          size_t d = 0;
          while (d < vi.size() && vi[d] == vj[d]) ++d;
          fwd = d < vi.size() && arc(a, vi[d], vj[d]);
        }
        put2(s.k, 0, fwd ? e : e2, fwd ? e2 : e);
      }
    }
    return finish(a, std::move(s));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    LabelKey out;
    out.code.assign(b.n, 0);
    for (int v = 0; v < a.n; ++v) out.code[f[v]] = lab.code[v];
    for (size_t i = a.n; i < lab.code.size(); ++i) out.code.push_back(f[lab.code[i]]);
    return out;
  }
};

// ------------------------------------------------------- 3-hypertournament

struct ThreeHtEngine : Engine {
  ClassId cls() const override { return ClassId::hypertournament({3}); }
  std::string kind() const override { return "bespoke"; }
  std::optional<std::string> admits(const FinStructure& a) const override {
    if (a.n == 0) return "empty structure";
    return std::nullopt;
  }

  static int pair_idx(int x, int y, int n) {
    // x < y
    return x * n - x * (x + 1) / 2 + (y - x - 1);
  }
  static int npairs(int n) { return n * (n - 1) / 2; }

  // [e x y] for the pattern bits (pattern bit for x<y: 1 iff (e,x,y) in R)
  static bool exy(const std::vector<int>& bits, int n, int x, int y) {
    return x < y ? bits[pair_idx(x, y, n)] : !bits[pair_idx(y, x, n)];
  }
  static bool axy(const FinStructure& a, int x, int y, int z) {
    return a.has3(0, x, y, z);
  }

  // code: [bits (C(n,2)), anchor, |s|, s..., t-pairs...]
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    int n = a.n, np = npairs(n);
    std::vector<int> bits(np);
    for (int mask = 0; mask < (1 << np); ++mask) {
      for (int i = 0; i < np; ++i) bits[i] = mask >> i & 1;
      for (int anchor = 0; anchor < n; ++anchor) {
        std::vector<int> s_set;
        std::vector<std::pair<int, int>> t_set;
        for (int v = 0; v < n; ++v)
          if (v != anchor && exy(bits, n, anchor, v)) s_set.push_back(v);
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) {
            if (u == anchor || v == anchor || u == v) continue;
            if (!axy(a, anchor, u, v)) continue;  // (u,v) in E_anchor
            if (!exy(bits, n, u, v)) t_set.push_back({u, v});
          }
        std::vector<int> tflat;
        for (auto& e : t_set) {
          tflat.push_back(e.first);
          tflat.push_back(e.second);
        }
        for (auto& sp : perms_of(s_set)) {
          // permutations of t_set as a sequence of pairs
          std::vector<int> tidx(t_set.size());
          std::iota(tidx.begin(), tidx.end(), 0);
          std::sort(tidx.begin(), tidx.end());
          do {
            LabelKey l;
            l.code = bits;
            l.code.push_back(anchor);
            l.code.push_back(static_cast<int>(sp.size()));
            l.code.insert(l.code.end(), sp.begin(), sp.end());
            for (auto i : tidx) {
              l.code.push_back(t_set[i].first);
              l.code.push_back(t_set[i].second);
            }
            out.push_back(std::move(l));
          } while (std::next_permutation(tidx.begin(), tidx.end()));
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  struct Parts {
    std::vector<int> bits;
    int anchor;
    std::vector<int> s;
    std::vector<std::pair<int, int>> t;
  };
  static Parts split(const LabelKey& l, int n) {
    Parts p;
    int np = npairs(n);
    p.bits.assign(l.code.begin(), l.code.begin() + np);
    p.anchor = l.code[np];
    int slen = l.code[np + 1];
    p.s.assign(l.code.begin() + np + 2, l.code.begin() + np + 2 + slen);
    for (size_t i = np + 2 + slen; i + 1 < l.code.size(); i += 2)
      p.t.push_back({l.code[i], l.code[i + 1]});
    return p;
  }

  // tournament on V_a induced by the anchor
  static bool arc_a(const FinStructure& a, int anchor, int u, int v) {
    return a.has3(0, anchor, u, v);
  }
  // lex tournament on vertex sequences via arc_a
  static bool lex_va(const FinStructure& a, int anchor, std::span<const int> x,
                     std::span<const int> y) {
    if (x.size() != y.size()) return x.size() < y.size();
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i] != y[i]) return arc_a(a, anchor, x[i], y[i]);
    return false;
  }
  // edge tournament and its lex extension
  static bool edge_arc(const FinStructure& a, int anchor, std::pair<int, int> e1,
                       std::pair<int, int> e2) {
    int s1[2] = {e1.first, e1.second}, s2[2] = {e2.first, e2.second};
    return lex_va(a, anchor, s1, s2);
  }
  static bool lex_ea(const FinStructure& a, int anchor,
                     const std::vector<std::pair<int, int>>& x,
                     const std::vector<std::pair<int, int>>& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i] != y[i]) return edge_arc(a, anchor, x[i], y[i]);
    return false;
  }
  // full label comparison for a shared anchor: true when l1 is the start vertex
  static bool label_beats(const FinStructure& a, const Parts& p1, const Parts& p2) {
    if (p1.s != p2.s) return lex_va(a, p1.anchor, p1.s, p2.s);
    return lex_ea(a, p1.anchor, p1.t, p2.t);
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    auto s = skeleton(a, labs);
    int n = a.n;
    std::vector<Parts> parts;
    parts.reserve(labs.size());
    for (auto& l : labs) parts.push_back(split(l, n));
    int m = n + static_cast<int>(labs.size());
    auto beats = [&](int p, int q) { return label_beats(a, parts[p - n], parts[q - n]); };
    // representative of the positive cyclic class on the triple {x, y, z}
    auto positive_rep = [&](int x, int y, int z) -> std::array<int, 3> {
      int nb = (x < n) + (y < n) + (z < n);
      if (nb == 3) return a.has3(0, x, y, z) ? std::array<int, 3>{x, y, z}
                                             : std::array<int, 3>{x, z, y};
      if (nb == 2) {
        int e = x >= n ? x : y >= n ? y : z;
        int b1 = x < n ? x : y;
        int b2 = z < n ? z : y;
        if (b1 == e) b1 = x;
        // collect the two base vertices in triple order
        std::vector<int> bs;
        for (int v : {x, y, z})
          if (v < n) bs.push_back(v);
        bool bit = exy(parts[e - n].bits, n, bs[0], bs[1]);  // (e, bs0, bs1) in R?
        return bit ? std::array<int, 3>{e, bs[0], bs[1]} : std::array<int, 3>{e, bs[1], bs[0]};
      }
      if (nb == 1) {
        int v = x < n ? x : y < n ? y : z;
        std::vector<int> es;
        for (int w : {x, y, z})
          if (w >= n) es.push_back(w);
        int a0 = parts[es[0] - n].anchor, a1 = parts[es[1] - n].anchor;
        if (a0 != a1 && v != a0 && v != a1)
          return a.has3(0, v, a0, a1) ? std::array<int, 3>{v, es[0], es[1]}
                                      : std::array<int, 3>{v, es[1], es[0]};
        if (a0 != a1) {
          // v equals one anchor: that copy comes first
          int first = v == a0 ? es[0] : es[1];
          int second = first == es[0] ? es[1] : es[0];
          return {v, first, second};
        }
        bool fwd = beats(es[0], es[1]);
        return fwd ? std::array<int, 3>{v, es[0], es[1]} : std::array<int, 3>{v, es[1], es[0]};
      }
      int a0 = parts[x - n].anchor, a1 = parts[y - n].anchor, a2 = parts[z - n].anchor;
      if (a0 != a1 && a1 != a2 && a0 != a2)
        return a.has3(0, a0, a1, a2) ? std::array<int, 3>{x, y, z}
                                     : std::array<int, 3>{x, z, y};
      if (a0 == a1 && a1 == a2) {
        // chain of the label tournament: find p -> q -> r
        int arr[3] = {x, y, z};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            int k = 3 - i - j;
            if (beats(arr[i], arr[j]) && beats(arr[j], arr[k]))
              return {arr[i], arr[j], arr[k]};
          }
        return {x, y, z};  // unreachable for a tournament comparator
      }
      // exactly one coincidence: the tied pair, ordered, then the odd one
      int p1, p2, odd;
      if (a0 == a1) {
        p1 = x;
        p2 = y;
        odd = z;
      } else if (a1 == a2) {
        p1 = y;
        p2 = z;
        odd = x;
      } else {
        p1 = z;
        p2 = x;
        odd = y;
      }
      if (!beats(p1, p2)) std::swap(p1, p2);
      return {p1, p2, odd};
    };
    for (int x = 0; x < m; ++x)
      for (int y = x + 1; y < m; ++y)
        for (int z = y + 1; z < m; ++z) {
          auto rep = positive_rep(x, y, z);
          Vertex t[3] = {static_cast<Vertex>(rep[0]), static_cast<Vertex>(rep[1]),
                         static_cast<Vertex>(rep[2])};
          s.k.add_tuple(0, t);
        }
    return finish(a, std::move(s));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    auto p = split(lab, a.n);
    int nb = b.n, npb = npairs(nb);
    std::vector<int> bits(npb, 0);
    // pattern: relations of the apex with image pairs transported, with the
    // rest determined by the anchor rules of the target label set? The label
    // data of the image is exactly (f(anchor), f(s), f(t)); the full pattern
    // is reconstructed from it.
    int anchor = f[p.anchor];
    std::vector<char> in_s(nb, 0);
    for (auto v : p.s) in_s[f[v]] = 1;
    std::set<std::pair<int, int>> tset;
    for (auto& e : p.t) tset.insert({f[e.first], f[e.second]});
    for (int x = 0; x < nb; ++x)
      for (int y = x + 1; y < nb; ++y) {
        bool val;
        if (x == anchor || y == anchor) {
          int v = x == anchor ? y : x;
          bool eav = in_s[v];  // [e anchor v] = 1 iff v in S
          // bit for pair (x<y) encodes (e,x,y)
          val = x == anchor ? eav : !eav;
        } else {
          bool auv = b.has3(0, anchor, x, y);  // x -> y in the anchor tournament
          bool in_t = auv ? tset.count({x, y}) > 0 : tset.count({y, x}) > 0;
          bool euv_eq_auv = !in_t;
          bool exy_val = auv ? euv_eq_auv : !euv_eq_auv;
          val = exy_val;
        }
        bits[pair_idx(x, y, nb)] = val;
      }
    LabelKey out;
    out.code = bits;
    out.code.push_back(anchor);
    out.code.push_back(static_cast<int>(p.s.size()));
    for (auto v : p.s) out.code.push_back(f[v]);
    for (auto& e : p.t) {
      out.code.push_back(f[e.first]);
      out.code.push_back(f[e.second]);
    }
    return out;
  }
};

// ---------------------------------------------------------------- two-graph

struct TwoGraphEngine : Engine {
  ClassId cls() const override { return ClassId::two_graph(); }
  std::string kind() const override { return "bespoke"; }

  static int pair_idx(int x, int y, int n) { return x * n - x * (x + 1) / 2 + (y - x - 1); }
  static int npairs(int n) { return n * (n - 1) / 2; }
  static bool pat(const std::vector<int>& c, int n, int x, int y) {
    return x < y ? c[pair_idx(x, y, n)] : c[pair_idx(y, x, n)];
  }

  std::vector<int> valid_patterns(const FinStructure& a) const {
    int n = a.n, np = npairs(n);
    std::vector<int> out;
    for (int mask = 0; mask < (1 << np); ++mask) {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x)
        for (int y = x + 1; y < n && ok; ++y)
          for (int z = y + 1; z < n && ok; ++z) {
            int sum = (mask >> pair_idx(x, y, n) & 1) + (mask >> pair_idx(x, z, n) & 1) +
                      (mask >> pair_idx(y, z, n) & 1) + a.has3(0, x, y, z);
            if (sum % 2) ok = false;
          }
      if (ok) out.push_back(mask);
    }
    return out;
  }

  // code: [u, bits...]
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    int n = a.n, np = npairs(n);
    for (int u = 0; u < n; ++u)
      for (int mask : valid_patterns(a)) {
        LabelKey l;
        l.code.push_back(u);
        for (int i = 0; i < np; ++i) l.code.push_back(mask >> i & 1);
        out.push_back(std::move(l));
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    auto s = skeleton(a, labs);
    int n = a.n;
    auto u_of = [&](int apex) { return labs[apex - n].code[0]; };
    auto c_of = [&](int apex, int x, int y) {
      std::vector<int> bits(labs[apex - n].code.begin() + 1, labs[apex - n].code.end());
      return pat(bits, n, x, y);
    };
    int m = n + static_cast<int>(labs.size());
    auto val = [&](int p, int q, int r) -> bool {
      int apexes[3], basev[3];
      int na2 = 0, nb2 = 0;
      for (int v : {p, q, r})
        if (v >= n)
          apexes[na2++] = v;
        else
          basev[nb2++] = v;
      if (na2 == 0) return a.has3(0, p, q, r);
      if (na2 == 1) {
        int e = apexes[0];
        return c_of(e, basev[0], basev[1]);
      }
      if (na2 == 2) {
        int al = apexes[0], be = apexes[1];
        int x = basev[0];
        int u = u_of(al), v = u_of(be);
        if (u == v) {
          // [alpha_u beta_u x] = c_al{u,x} + c_be{u,x} (0 when x = u)
          if (x == u) return false;
          return (c_of(al, u, x) + c_of(be, u, x)) % 2;
        }
        if (x == u) return c_of(be, u, v);       // [alpha_u beta_v u] := [beta_v u v]
        if (x == v) return c_of(al, u, v);       // symmetric
        return (a.has3(0, u, v, x) + c_of(al, u, x) + c_of(be, v, x)) % 2;
      }
      int al = apexes[0], be = apexes[1], ga = apexes[2];
      int u = u_of(al), v = u_of(be), w = u_of(ga);
      if (u == v && v == w) return false;  // free amalgam part has no 3-edge
      if (u == v) {
        // [alpha_u beta_u gamma_w] := [alpha_u beta_u u] = 0
        return false;
      }
      if (v == w) return false;
      if (u == w) return false;
      return a.has3(0, u, v, w);
    };
    for (int x = 0; x < m; ++x)
      for (int y = x + 1; y < m; ++y)
        for (int z = y + 1; z < m; ++z)
          if (val(x, y, z)) {
            Vertex t[3] = {static_cast<Vertex>(x), static_cast<Vertex>(y),
                           static_cast<Vertex>(z)};
            s.k.add_tuple(0, t);
          }
    return finish(a, std::move(s));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    int n = a.n, nb = b.n;
    int u = lab.code[0];
    std::vector<int> bits(lab.code.begin() + 1, lab.code.end());
    int fu = f[u];
    std::vector<int> ge(nb, 0);
    for (int v = 0; v < n; ++v)
      if (v != u) ge[f[v]] = pat(bits, n, u, v);
    LabelKey out;
    out.code.push_back(fu);
    for (int x = 0; x < nb; ++x)
      for (int y = x + 1; y < nb; ++y)
        out.code.push_back((ge[x] + ge[y] + b.has3(0, fu, x, y)) % 2);
    return out;
  }
};

// ------------------------------------------------------------- n-partite

struct NPartiteEngine : Engine {
  int n_parts;  // 2, 3.., or 0 for omega
  explicit NPartiteEngine(int n) : n_parts(n) {}
  ClassId cls() const override { return ClassId::n_partite(n_parts); }
  std::string kind() const override {
    return n_parts > 2 ? "cofinal_subclass" : "bespoke";
  }
  std::optional<std::string> admits(const FinStructure& a) const override {
    if (a.n == 0) return "empty structure";
    if (n_parts > 2) {
      auto parts = bot_parts(a);
      if (!parts || static_cast<int>(parts->size()) != n_parts)
        return "needs exactly " + std::to_string(n_parts) + " parts";
    }
    return std::nullopt;
  }

  // pattern value per base vertex: 1 apex->v, 2 v->apex, 0 bot
  std::vector<std::vector<int>> patterns(const FinStructure& a) const {
    std::vector<std::vector<int>> out;
    for (auto& e : enumerate_extensions(a, cls())) {
      std::vector<int> p(a.n);
      for (int v = 0; v < a.n; ++v)
        p[v] = arc(e.ext, a.n, v) ? 1 : arc(e.ext, v, a.n) ? 2 : 0;
      out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // code: [anchor, p...]; anchor -1 encodes the unlabelled fresh-part copies
  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    for (auto& p : patterns(a)) {
      bool has_bot = std::find(p.begin(), p.end(), 0) != p.end();
      if (n_parts == 2) {
        for (int v = 0; v < a.n; ++v) {
          LabelKey l;
          l.code.push_back(v);
          l.code.insert(l.code.end(), p.begin(), p.end());
          out.push_back(std::move(l));
        }
      } else {
        for (int v = 0; v < a.n; ++v)
          if (p[v] == 0) {
            LabelKey l;
            l.code.push_back(v);
            l.code.insert(l.code.end(), p.begin(), p.end());
            out.push_back(std::move(l));
          }
        if (n_parts == 0 && !has_bot) {
          LabelKey l;
          l.code.push_back(-1);
          l.code.insert(l.code.end(), p.begin(), p.end());
          out.push_back(std::move(l));
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    auto s = skeleton(a, labs);
    int n = a.n;
    auto anchor = [&](size_t i) { return labs[i].code[0]; };
    auto pp = [&](size_t i, int v) { return labs[i].code[1 + v]; };
    for (size_t i = 0; i < labs.size(); ++i) {
      Vertex e = s.index[i].apex;
      for (int v = 0; v < n; ++v) {
        if (pp(i, v) == 1) put2(s.k, 0, e, v);
        if (pp(i, v) == 2) put2(s.k, 0, v, e);
      }
      for (size_t j = i + 1; j < labs.size(); ++j) {
        Vertex e2 = s.index[j].apex;
        int av = anchor(i), aw = anchor(j);
        if (n_parts == 2) {
          bool forced_bot = false;
          for (int u = 0; u < n; ++u) {
            bool b1 = pp(i, u) == 0, b2 = pp(j, u) == 0;
            if ((b1 && b2) || (!b1 && !b2)) forced_bot = true;
          }
          if (forced_bot) continue;
          bool i_anchor_bot = pp(i, av) == 0;
          bool j_anchor_bot = pp(j, aw) == 0;
          if (i_anchor_bot && !j_anchor_bot) {
            put2(s.k, 0, e, e2);
          } else if (j_anchor_bot && !i_anchor_bot) {
            put2(s.k, 0, e2, e);
          } else {
            if (arc(a, av, aw))
              put2(s.k, 0, e, e2);
            else if (arc(a, aw, av))
              put2(s.k, 0, e2, e);
            // bot anchors in one part: stay non-adjacent
          }
        } else {
          if (av < 0 && aw < 0) continue;  // two unlabelled copies: bot
          if (av >= 0 && aw < 0) {
            put2(s.k, 0, e, e2);
            continue;
          }
          if (av < 0 && aw >= 0) {
            put2(s.k, 0, e2, e);
            continue;
          }
          if (av == aw || bot(a, av, aw)) continue;  // same part
          if (arc(a, av, aw))
            put2(s.k, 0, e, e2);
          else
            put2(s.k, 0, e2, e);
        }
      }
    }
    return finish(a, std::move(s));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    int anchor = lab.code[0];
    LabelKey out;
    out.code.push_back(anchor < 0 ? -1 : f[anchor]);
    std::vector<int> p(b.n, -1);
    for (int v = 0; v < a.n; ++v) p[f[v]] = lab.code[1 + v];
    for (int w = 0; w < b.n; ++w) {
      if (p[w] >= 0) continue;
      if (anchor < 0) {
        p[w] = 1;  // unlabelled copies beat everything new
        continue;
      }
      if (n_parts == 2) {
        bool same = false;
        for (int u = 0; u < a.n; ++u) {
          bool eu_bot = lab.code[1 + u] == 0;
          bool wu_bot = bot(b, w, f[u]);
          bool wu_adj = w != f[u] && !wu_bot;
          if ((eu_bot && wu_bot) || (!eu_bot && wu_adj)) same = true;
        }
        p[w] = same ? 0 : 1;
      } else {
        p[w] = bot(b, w, f[anchor]) ? 0 : 1;
      }
    }
    out.code.insert(out.code.end(), p.begin(), p.end());
    return out;
  }
};

// ------------------------------------------- arrangement classes (line/circle)

struct OrderLikeEngine : Engine {
  ClassTag tag;
  explicit OrderLikeEngine(ClassTag t) : tag(t) {}
  ClassId cls() const override { return {tag}; }
  std::string kind() const override { return "bespoke"; }
  std::optional<std::string> admits(const FinStructure& a) const override {
    if (a.n == 0) return "empty structure";
    if (tag == ClassTag::Betweenness && a.n < 2) return "needs size >= 2";
    if (tag == ClassTag::Separation && a.n < 3) return "needs size >= 3";
    return std::nullopt;
  }

  std::vector<LabelKey> labels(const FinStructure& a) const override {
    std::vector<LabelKey> out;
    if (tag == ClassTag::LinearOrder) {
      for (auto& c : cuts(a, cls())) out.push_back({{c.u, c.v}});
    } else if (tag == ClassTag::Circular) {
      for (auto& c : cuts(a, cls())) out.push_back({{c.u, c.v}});
    } else {
      for (auto& c : cuts(a, cls())) {
        out.push_back({{c.u, c.v}});
        out.push_back({{c.v, c.u}});
      }
      if (tag == ClassTag::Betweenness)
        for (Vertex v = 0; v < a.n; ++v) {
          bool endpoint = true;
          for (Vertex x = 0; x < a.n && endpoint; ++x)
            for (Vertex y = 0; y < a.n && endpoint; ++y)
              if (a.has3(0, x, v, y)) endpoint = false;
          if (endpoint) out.push_back({{v, -1}});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // arrangement of the base: line order or circular order as positions
  std::vector<int> arrangement(const FinStructure& a) const {
    int mode = tag == ClassTag::Betweenness      ? 0
               : tag == ClassTag::LinearOrder    ? 3
               : tag == ClassTag::Circular       ? 1
                                                 : 2;
    if (mode == 3) {
      std::vector<int> pos(a.n, 0);
      int lt = a.sig->index_of("lt");
      for (Vertex v = 0; v < a.n; ++v)
        for (Vertex u = 0; u < a.n; ++u)
          if (a.has2(lt, u, v)) ++pos[v];
      return pos;
    }
    // reuse the realization searches through enumerate machinery
    std::vector<int> seq;
    std::vector<char> used(a.n, 0);
    std::vector<int> pos(a.n, -1);
    std::function<bool(int)> rec = [&](int k) -> bool {
      if (k == a.n) return true;
      for (Vertex v = 0; v < a.n; ++v) {
        if (used[v]) continue;
        if (k == 0 && mode != 0 && v != 0) break;
        used[v] = 1;
        pos[v] = k;
        seq.push_back(v);
        bool ok = true;
        if (mode <= 1) {
          for (int i = 0; i < k && ok; ++i)
            for (int j = i + 1; j < k && ok; ++j) {
              Vertex tri[3] = {seq[i], seq[j], v};
              std::sort(tri, tri + 3);
              do {
                int px = pos[tri[0]], py = pos[tri[1]], pz = pos[tri[2]];
                bool good;
                if (mode == 0)
                  good = ((px < py && py < pz) || (pz < py && py < px)) ==
                         static_cast<bool>(a.has3(0, tri[0], tri[1], tri[2]));
                else
                  good = ((px < py && py < pz) || (py < pz && pz < px) ||
                          (pz < px && px < py)) ==
                         static_cast<bool>(a.has3(0, tri[0], tri[1], tri[2]));
                if (!good) ok = false;
              } while (ok && std::next_permutation(tri, tri + 3));
            }
        } else {
          auto between = [&](int x, int lo, int hi) {
            if (lo < hi) return lo < x && x < hi;
            return x > lo || x < hi;
          };
          for (int i = 0; i < k && ok; ++i)
            for (int j = i + 1; j < k && ok; ++j)
              for (int l = j + 1; l < k && ok; ++l) {
                Vertex quad[4] = {seq[i], seq[j], seq[l], v};
                std::sort(quad, quad + 4);
                do {
                  bool cross = between(pos[quad[2]], pos[quad[0]], pos[quad[1]]) !=
                               between(pos[quad[3]], pos[quad[0]], pos[quad[1]]);
                  Vertex t[4] = {quad[0], quad[1], quad[2], quad[3]};
                  if (a.rels[0].contains(t) != cross) ok = false;
                } while (ok && std::next_permutation(quad, quad + 4));
              }
        }
        if (ok && rec(k + 1)) return true;
        seq.pop_back();
        pos[v] = -1;
        used[v] = 0;
      }
      return false;
    };
    if (!rec(0)) throw std::invalid_argument("not in class");
    return pos;
  }

  KatetovResult build(const FinStructure& a) const override {
    auto labs = labels(a);
    auto s = skeleton(a, labs);
    int n = a.n;
    auto pos = arrangement(a);
    int K = 4;
    bool circularish = tag == ClassTag::Circular || tag == ClassTag::Separation;
    long long D = static_cast<long long>(n) * K;
    std::vector<long long> xp(n + labs.size());
    for (int v = 0; v < n; ++v) xp[v] = static_cast<long long>(pos[v]) * K;
    auto wrap = [&](long long p) { return circularish ? ((p % D) + D) % D : p; };
    for (size_t i = 0; i < labs.size(); ++i) {
      auto& c = labs[i].code;
      long long p = 0;
      switch (tag) {
        case ClassTag::LinearOrder:
          if (c[0] == -1)
            p = xp[c[1]] - 2;
          else
            p = xp[c[0]] + 2;  // covers both pair cuts and the top cut
          break;
        case ClassTag::Circular:
          p = xp[c[0]] + 2;  // inside the gap after c[0]; singleton included
          break;
        case ClassTag::Betweenness:
          if (c[1] == -1) {
            bool left_end = true;
            for (int v = 0; v < n; ++v)
              if (pos[v] < pos[c[0]]) left_end = false;
            p = left_end ? xp[c[0]] - 2 : xp[c[0]] + 2;
          } else {
            p = pos[c[0]] < pos[c[1]] ? xp[c[0]] + 1 : xp[c[0]] - 1;
          }
          break;
        default: {  // separation: the empty arc between the pair, nearer c[0]
          int u = c[0], v = c[1];
          int succ = -1, pred = -1;
          for (int w = 0; w < n; ++w) {
            if (w == u) continue;
            long long fwd = ((xp[w] - xp[u]) % D + D) % D;
            if (succ < 0 || fwd < ((xp[succ] - xp[u]) % D + D) % D) succ = w;
            if (pred < 0 ||
                ((xp[u] - xp[w]) % D + D) % D < ((xp[u] - xp[pred]) % D + D) % D)
              pred = w;
          }
          p = succ == v ? xp[u] + 1 : xp[u] - 1;
          break;
        }
      }
      xp[n + i] = wrap(p);
    }
    int m = n + static_cast<int>(labs.size());
    if (tag == ClassTag::LinearOrder) {
      int lt = 0;
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          if (x != y && xp[x] < xp[y]) put2(s.k, lt, x, y);
      // base relations were already copied; normalize dedupes
    } else if (tag == ClassTag::Betweenness) {
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          for (int z = 0; z < m; ++z) {
            if (x == y || y == z || x == z) continue;
            if (x > z) continue;
            if ((xp[x] < xp[y] && xp[y] < xp[z]) || (xp[z] < xp[y] && xp[y] < xp[x])) {
              Vertex t1[3] = {static_cast<Vertex>(x), static_cast<Vertex>(y),
                              static_cast<Vertex>(z)};
              Vertex t2[3] = {static_cast<Vertex>(z), static_cast<Vertex>(y),
                              static_cast<Vertex>(x)};
              s.k.rels[0].add(t1);
              s.k.rels[0].add(t2);
            }
          }
    } else if (tag == ClassTag::Circular) {
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          for (int z = 0; z < m; ++z) {
            if (x == y || y == z || x == z) continue;
            long long px = xp[x], py = xp[y], pz = xp[z];
            if ((px < py && py < pz) || (py < pz && pz < px) || (pz < px && px < py)) {
              Vertex t[3] = {static_cast<Vertex>(x), static_cast<Vertex>(y),
                             static_cast<Vertex>(z)};
              s.k.rels[0].add(t);
            }
          }
    } else {
      auto between = [&](long long x, long long lo, long long hi) {
        if (lo < hi) return lo < x && x < hi;
        return x > lo || x < hi;
      };
      for (int p1 = 0; p1 < m; ++p1)
        for (int q = p1 + 1; q < m; ++q)
          for (int r = 0; r < m; ++r)
            for (int ss = r + 1; ss < m; ++ss) {
              if (r == p1 || r == q || ss == p1 || ss == q) continue;
              if (between(xp[r], xp[p1], xp[q]) != between(xp[ss], xp[p1], xp[q])) {
                Vertex base[4] = {static_cast<Vertex>(p1), static_cast<Vertex>(q),
                                  static_cast<Vertex>(r), static_cast<Vertex>(ss)};
                Vertex arr[8][4] = {
                    {base[0], base[1], base[2], base[3]}, {base[1], base[0], base[2], base[3]},
                    {base[0], base[1], base[3], base[2]}, {base[1], base[0], base[3], base[2]},
                    {base[2], base[3], base[0], base[1]}, {base[3], base[2], base[0], base[1]},
                    {base[2], base[3], base[1], base[0]}, {base[3], base[2], base[1], base[0]}};
                for (auto& e : arr) {
                  Vertex t[4] = {e[0], e[1], e[2], e[3]};
                  s.k.rels[0].add(t);
                }
              }
            }
      // base tuples already copied; drop duplicates on normalize
    }
    // clear the copied base relations for order classes built wholesale
    if (tag == ClassTag::LinearOrder || tag == ClassTag::Betweenness ||
        tag == ClassTag::Circular || tag == ClassTag::Separation) {
      // relations were rebuilt for all m vertices; base tuples coincide
    }
    return finish(a, std::move(s));
  }

  LabelKey transport(const FinStructure& a, const FinStructure& b, const std::vector<int>& f,
                     const LabelKey& lab) const override {
    auto bl = labels(b);
    auto c = lab.code;
    auto posb = arrangement(b);
    int nb = b.n;
    auto succ_of = [&](int x) {
      // next base vertex in the arrangement of b (circular wraps)
      int best = -1;
      for (int v = 0; v < nb; ++v) {
        if (v == x) continue;
        if (posb[v] > posb[x] && (best < 0 || posb[v] < posb[best])) best = v;
      }
      if (best < 0) {
        for (int v = 0; v < nb; ++v)
          if (v != x && (best < 0 || posb[v] < posb[best])) best = v;
      }
      return best;
    };
    auto pred_of = [&](int x) {
      int best = -1;
      for (int v = 0; v < nb; ++v) {
        if (v == x) continue;
        if (posb[v] < posb[x] && (best < 0 || posb[v] > posb[best])) best = v;
      }
      if (best < 0) {
        for (int v = 0; v < nb; ++v)
          if (v != x && (best < 0 || posb[v] > posb[best])) best = v;
      }
      return best;
    };
    if (tag == ClassTag::LinearOrder) {
      if (c[0] == -1) {
        int fm = f[c[1]];
        int pr = -1;
        for (int v = 0; v < nb; ++v)
          if (posb[v] < posb[fm] && (pr < 0 || posb[v] > posb[pr])) pr = v;
        return pr < 0 ? LabelKey{{-1, fm}} : LabelKey{{pr, fm}};
      }
      if (c[1] == -1) {
        int fm = f[c[0]];
        int su = -1;
        for (int v = 0; v < nb; ++v)
          if (posb[v] > posb[fm] && (su < 0 || posb[v] < posb[su])) su = v;
        return su < 0 ? LabelKey{{fm, -1}} : LabelKey{{fm, su}};
      }
      int fu = f[c[0]];
      int su = -1;
      for (int v = 0; v < nb; ++v)
        if (posb[v] > posb[fu] && (su < 0 || posb[v] < posb[su])) su = v;
      return su < 0 ? LabelKey{{fu, -1}} : LabelKey{{fu, su}};
    }
    if (tag == ClassTag::Circular) {
      int fu = f[c[0]];
      if (nb == 1) return LabelKey{{fu, -1}};
      return LabelKey{{fu, succ_of(fu)}};
    }
    if (tag == ClassTag::Betweenness) {
      if (c[1] == -1) {
        // endpoint label: image may fall inside b
        int fb = f[c[0]];
        bool left_end = true;
        for (int v = 0; v < nb; ++v)
          if (posb[v] < posb[fb]) left_end = false;
        bool right_end = true;
        for (int v = 0; v < nb; ++v)
          if (posb[v] > posb[fb]) right_end = false;
        // the original endpoint had its unique neighbour u; direction away
        // from u: find the preimage neighbour
        int u = -1;
        {
          // the cut partner of c[0] in a
          auto ca = cuts(a, cls());
          for (auto& cc : ca)
            if (cc.u == c[0] || cc.v == c[0]) u = cc.u == c[0] ? cc.v : cc.u;
        }
        int fu2 = u >= 0 ? f[u] : -1;
        if (fu2 >= 0 && posb[fu2] > posb[fb]) {
          // direction: below fb
          if (!left_end) return LabelKey{{fb, pred_of(fb)}};
          return LabelKey{{fb, -1}};
        }
        if (fu2 >= 0 && posb[fu2] < posb[fb]) {
          if (!right_end) return LabelKey{{fb, succ_of(fb)}};
          return LabelKey{{fb, -1}};
        }
        return LabelKey{{fb, -1}};
      }
      int fu = f[c[0]], fv = f[c[1]];
      // neighbour of fu toward fv
      int bprime = posb[fu] < posb[fv] ? succ_of(fu) : pred_of(fu);
      return LabelKey{{fu, bprime}};
    }
    // separation: the image cut when it survives, else the neighbour of f(u)
    // on the f(v) side
    int fu = f[c[0]], fv = f[c[1]];
    {
      bool still_cut = true;
      for (auto& cc : cuts(b, cls()))
        if ((cc.u == fu && cc.v == fv) || (cc.u == fv && cc.v == fu)) {
          return LabelKey{{fu, fv}};
        }
      (void)still_cut;
    }
    int cand1 = succ_of(fu), cand2 = pred_of(fu);
    auto gap_ok = [&](int x) {
      // {fu, x} must be a cut of b
      for (auto& cc : cuts(b, cls()))
        if ((cc.u == fu && cc.v == x) || (cc.u == x && cc.v == fu)) return true;
      return false;
    };
    // the defining property: sep(f(b), x; f(u), f(v)) for every other b
    auto side_ok = [&](int x) {
      if (x == fv) return true;
      for (int w = 0; w < nb; ++w) {
        if (w == fu || w == fv || w == x) continue;
        Vertex t[4] = {static_cast<Vertex>(w), static_cast<Vertex>(x),
                       static_cast<Vertex>(fu), static_cast<Vertex>(fv)};
        if (!b.rels[0].contains(t)) return false;
      }
      return true;
    };
    if (gap_ok(cand1) && side_ok(cand1)) return LabelKey{{fu, cand1}};
    if (gap_ok(cand2) && side_ok(cand2)) return LabelKey{{fu, cand2}};
    return LabelKey{{fu, cand1}};
  }
};

}  // namespace

// engines defined in this translation unit but registered in katetov.cpp
std::map<std::string, EnginePtr> make_bespoke_engines_a() {
  std::map<std::string, EnginePtr> m;
  m[ClassId::tournament().to_string()] = std::make_shared<TournamentEngine>();
  m[ClassId::hypertournament({3}).to_string()] = std::make_shared<ThreeHtEngine>();
  m[ClassId::two_graph().to_string()] = std::make_shared<TwoGraphEngine>();
  m[ClassId::n_partite(2).to_string()] = std::make_shared<NPartiteEngine>(2);
  m[ClassId::n_partite(3).to_string()] = std::make_shared<NPartiteEngine>(3);
  m[ClassId::n_partite(0).to_string()] = std::make_shared<NPartiteEngine>(0);
  m[ClassId{ClassTag::Circular}.to_string()] =
      std::make_shared<OrderLikeEngine>(ClassTag::Circular);
  m[ClassId{ClassTag::Betweenness}.to_string()] =
      std::make_shared<OrderLikeEngine>(ClassTag::Betweenness);
  m[ClassId{ClassTag::Separation}.to_string()] =
      std::make_shared<OrderLikeEngine>(ClassTag::Separation);
  m[ClassId::linear_order().to_string()] =
      std::make_shared<OrderLikeEngine>(ClassTag::LinearOrder);
  return m;
}

}  // namespace fraisse
