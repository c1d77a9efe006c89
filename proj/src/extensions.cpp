#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "fraisse/classes.hpp"

namespace fraisse {

namespace {

// generic slot-based enumerator: decide, per relation, every tuple orbit
// involving the apex; candidates filtered by full membership
struct SlotEnum {
  const FinStructure& a;
  const ClassId& cls;
  SigPtr sig;
  Vertex apex;
  std::vector<OnePointExtension> out;
  std::set<std::string> seen;

  SlotEnum(const FinStructure& a_, const ClassId& c_)
      : a(a_), cls(c_), sig(a_.sig), apex(a_.n) {}

  struct Slot {
    int rel;
    // each option is a list of tuples added together (e.g. a pattern orbit)
    std::vector<std::vector<std::vector<Vertex>>> options;
  };

  void build_slots(std::vector<Slot>& slots) {
    int n = a.n;
    using TL = std::vector<std::vector<Vertex>>;
    for (size_t r = 0; r < sig->relations.size(); ++r) {
      const auto& spec = sig->relations[r];
      int ri = static_cast<int>(r);
      if (spec.arity == 1) {
        slots.push_back({ri, {TL{{apex}}}});
      } else if (spec.arity == 2) {
        if (spec.sym == Symmetry::Set) {
          for (Vertex x = 0; x < n; ++x) slots.push_back({ri, {TL{{apex, x}}}});
        } else {
          for (Vertex x = 0; x < n; ++x)
            slots.push_back(
                {ri, {TL{{apex, x}}, TL{{x, apex}}, TL{{apex, x}, {x, apex}}}});
        }
      } else if (spec.arity == 3) {
        if (spec.sym == Symmetry::Set) {
          for (Vertex x = 0; x < n; ++x)
            for (Vertex y = x + 1; y < n; ++y) slots.push_back({ri, {TL{{apex, x, y}}}});
        } else if (spec.sym == Symmetry::Cyclic) {
          for (Vertex x = 0; x < n; ++x)
            for (Vertex y = x + 1; y < n; ++y)
              slots.push_back({ri, {TL{{apex, x, y}}, TL{{apex, y, x}}}});
        } else {
          // tail-symmetric dominator patterns: one dominator per triple or none
          for (Vertex x = 0; x < n; ++x)
            for (Vertex y = x + 1; y < n; ++y)
              slots.push_back({ri,
                               {TL{{apex, x, y}, {apex, y, x}},
                                TL{{x, apex, y}, {x, y, apex}},
                                TL{{y, apex, x}, {y, x, apex}}}});
        }
      } else {
        throw std::invalid_argument("generic extension enumeration limited to arity <= 3");
      }
    }
  }

  void emit(const FinStructure& ext) {
    auto key = ext.code();
    if (seen.insert(key).second) out.push_back({ext, a.n, apex});
  }

  void run() {
    std::vector<Slot> slots;
    build_slots(slots);
    FinStructure ext(sig, a.n + 1);
    for (size_t r = 0; r < a.rels.size(); ++r) ext.rels[r] = a.rels[r];
    std::vector<int> choice(slots.size(), -1);
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == slots.size()) {
        FinStructure cand = ext;
        for (size_t s = 0; s < slots.size(); ++s)
          if (choice[s] >= 0)
            for (auto& t : slots[s].options[choice[s]]) cand.add_tuple(slots[s].rel, t);
        cand.normalize();
        if (is_member(cand, cls).ok) emit(cand);
        return;
      }
      const auto& sl = slots[i];
      for (int c = -1; c < static_cast<int>(sl.options.size()); ++c) {
        choice[i] = c;
        rec(i + 1);
      }
      choice[i] = -1;
    };
    rec(0);
  }
};

// arrangement-based enumerators for the line/circle reducts
std::vector<OnePointExtension> arrangement_extensions(const FinStructure& a,
                                                      const ClassId& cls) {
  std::vector<OnePointExtension> out;
  std::set<std::string> seen;
  int n = a.n;
  Vertex apex = n;
  // realize, then read the extension off every insertion gap
  // mode mirrors realize: 0 line, 1 circle, 2 separation
  int mode = cls.tag == ClassTag::Betweenness ? 0 : cls.tag == ClassTag::Circular ? 1 : 2;
  if (n == 0) {
    FinStructure ext(class_signature(cls), 1);
    out.push_back({ext, 0, 0});
    return out;
  }
  // recover an arrangement by brute force (members are realizable)
  std::vector<int> order(n);
  {
    // realize via membership machinery: positions per vertex
    // realize_arrangement is file-local to classes.cpp, so redo a tiny search here
    std::vector<int> seq;
    std::vector<char> used(n, 0);
    std::vector<int> pos(n, -1);
    auto triple_matches = [&](Vertex x, Vertex y, Vertex z) {
      if (mode == 0) {
        bool between =
            (pos[x] < pos[y] && pos[y] < pos[z]) || (pos[z] < pos[y] && pos[y] < pos[x]);
        return a.has3(0, x, y, z) == between;
      }
      int px = pos[x], py = pos[y], pz = pos[z];
      bool cyc = (px < py && py < pz) || (py < pz && pz < px) || (pz < px && px < py);
      return a.has3(0, x, y, z) == cyc;
    };
    auto quad_matches = [&](Vertex p, Vertex q, Vertex r, Vertex s) {
      auto between = [&](int x, int lo, int hi) {
        if (lo < hi) return lo < x && x < hi;
        return x > lo || x < hi;
      };
      bool cross = between(pos[r], pos[p], pos[q]) != between(pos[s], pos[p], pos[q]);
      Vertex t[4] = {p, q, r, s};
      return a.rels[0].contains(t) == cross;
    };
    std::function<bool(int)> rec = [&](int k) -> bool {
      if (k == n) return true;
      for (Vertex v = 0; v < n; ++v) {
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
                if (!triple_matches(tri[0], tri[1], tri[2])) { ok = false; break; }
              } while (std::next_permutation(tri, tri + 3));
            }
        } else {
          for (int i = 0; i < k && ok; ++i)
            for (int j = i + 1; j < k && ok; ++j)
              for (int l = j + 1; l < k && ok; ++l) {
                Vertex quad[4] = {seq[i], seq[j], seq[l], v};
                std::sort(quad, quad + 4);
                do {
                  if (!quad_matches(quad[0], quad[1], quad[2], quad[3])) { ok = false; break; }
                } while (std::next_permutation(quad, quad + 4));
              }
        }
        if (ok && rec(k + 1)) return true;
        seq.pop_back();
        pos[v] = -1;
        used[v] = 0;
      }
      return false;
    };
    if (!rec(0)) throw std::invalid_argument("structure not in class " + cls.to_string());
    for (int i = 0; i < n; ++i) order[i] = seq[i];
  }
  int gaps = mode == 0 ? n + 1 : n;
  for (int g = 0; g < gaps; ++g) {
    // new arrangement with apex inserted after position g-1 (line) / gap g (circle)
    std::vector<Vertex> arr;
    for (int i = 0; i < n; ++i) {
      if (mode == 0 && i == g) arr.push_back(apex);
      arr.push_back(order[i]);
      if (mode != 0 && i == g) arr.push_back(apex);
    }
    if (mode == 0 && g == n) arr.push_back(apex);
    std::vector<int> pos(n + 1);
    for (size_t i = 0; i < arr.size(); ++i) pos[arr[i]] = static_cast<int>(i);
    FinStructure ext(class_signature(cls), n + 1);
    int m = n + 1;
    if (mode == 0) {
      for (Vertex x = 0; x < m; ++x)
        for (Vertex y = 0; y < m; ++y)
          for (Vertex z = 0; z < m; ++z) {
            if (x == y || y == z || x == z) continue;
            if (x > z) continue;  // btw(x,y,z) = btw(z,y,x); store both via add
            if ((pos[x] < pos[y] && pos[y] < pos[z]) ||
                (pos[z] < pos[y] && pos[y] < pos[x])) {
              Vertex t1[3] = {x, y, z}, t2[3] = {z, y, x};
              ext.rels[0].add(t1);
              ext.rels[0].add(t2);
            }
          }
    } else if (mode == 1) {
      for (Vertex x = 0; x < m; ++x)
        for (Vertex y = 0; y < m; ++y)
          for (Vertex z = 0; z < m; ++z) {
            if (x == y || y == z || x == z) continue;
            int px = pos[x], py = pos[y], pz = pos[z];
            if ((px < py && py < pz) || (py < pz && pz < px) || (pz < px && px < py)) {
              Vertex t[3] = {x, y, z};
              ext.rels[0].add(t);
            }
          }
    } else {
      auto between = [&](int x, int lo, int hi) {
        if (lo < hi) return lo < x && x < hi;
        return x > lo || x < hi;
      };
      for (Vertex p = 0; p < m; ++p)
        for (Vertex q = 0; q < m; ++q)
          for (Vertex r = 0; r < m; ++r)
            for (Vertex s = 0; s < m; ++s) {
              if (p == q || p == r || p == s || q == r || q == s || r == s) continue;
              if (between(pos[r], pos[p], pos[q]) != between(pos[s], pos[p], pos[q])) {
                Vertex t[4] = {p, q, r, s};
                ext.rels[0].add(t);
              }
            }
    }
    ext.normalize();
    auto key = ext.code();
    if (seen.insert(key).second) out.push_back({ext, n, apex});
  }
  std::sort(out.begin(), out.end(), [](const OnePointExtension& x, const OnePointExtension& y) {
    return x.ext.code() < y.ext.code();
  });
  return out;
}

// circle-grid enumerators for the S(2), S(3), Q-hat ages: extensions arise from
// cuts of the hat completion (plus the missing antipodes for Q-hat)
std::vector<OnePointExtension> hat_cut_extensions(const FinStructure& a, const ClassId& cls) {
  std::vector<OnePointExtension> out;
  std::set<std::string> seen;
  Vertex apex = a.n;
  auto sig = class_signature(cls);
  if (a.n == 0) {
    FinStructure ext(sig, 1);
    out.push_back({ext, 0, 0});
    return out;
  }
  int rot = cls.tag == ClassTag::S3Age ? 3 : 2;
  int d0 = std::max(14 * a.n, 6);
  auto posA = realize_circle(a, cls, d0);
  if (!posA) throw std::invalid_argument("structure not in class " + cls.to_string());
  // rescale so hat points sit on even positions and rotations are exact;
  // odd midpoints then never hit an orientation boundary
  int scale = 2 * rot;
  int D = scale * d0;
  std::vector<std::pair<int, int>> pts;  // (position, id); ids >= n are hat copies
  for (int v = 0; v < a.n; ++v)
    for (int k = 0; k < rot; ++k)
      pts.push_back({(scale * (*posA)[v] + k * (D / rot)) % D, v + k * a.n});
  std::sort(pts.begin(), pts.end());
  // candidate apex positions: one per gap between consecutive hat points
  auto classify = [&](int d) -> int {
    // 1: arc, 0: bot, -1: reverse arc  (d != 0)
    if (rot == 3) {
      if (3 * d < D) return 1;
      if (3 * d > 2 * D) return -1;
      return 0;
    }
    if (2 * d < D) return 1;
    if (2 * d > D) return -1;
    return 0;
  };
  int np = static_cast<int>(pts.size());
  for (int g = 0; g < np; ++g) {
    int lo = pts[g].first;
    int hi = pts[(g + 1) % np].first + (g + 1 == np ? D : 0);
    if (hi - lo < 2) continue;  // no strict interior slot on the doubled grid
    int p = lo + (hi - lo) / 2;
    FinStructure ext(sig, a.n + 1);
    for (size_t r = 0; r < a.rels.size(); ++r) ext.rels[r] = a.rels[r];
    for (int v = 0; v < a.n; ++v) {
      int d = ((scale * (*posA)[v] - p) % D + D) % D;
      int c = classify(d);  // apex -> v
      Vertex t1[2] = {apex, static_cast<Vertex>(v)};
      Vertex t2[2] = {static_cast<Vertex>(v), apex};
      if (c == 1) ext.rels[0].add(t1);
      if (c == -1) ext.rels[0].add(t2);
    }
    ext.normalize();
    auto key = ext.code();
    if (seen.insert(key).second) out.push_back({ext, a.n, apex});
  }
  if (cls.tag == ClassTag::QHatAge) {
    // missing antipodes: a vertex with no bot-mate extends by its mate
    for (Vertex v = 0; v < a.n; ++v) {
      bool has_mate = false;
      for (Vertex u = 0; u < a.n; ++u)
        if (u != v && bot(a, u, v)) has_mate = true;
      if (has_mate) continue;
      FinStructure ext(sig, a.n + 1);
      for (size_t r = 0; r < a.rels.size(); ++r) ext.rels[r] = a.rels[r];
      int pv = (scale * (*posA)[v] + D / 2) % D;
      for (Vertex u = 0; u < a.n; ++u) {
        if (u == v) continue;
        int d = ((scale * (*posA)[u] - pv) % D + D) % D;
        int c = classify(d);
        Vertex t1[2] = {apex, u}, t2[2] = {u, apex};
        if (c == 1) ext.rels[0].add(t1);
        if (c == -1) ext.rels[0].add(t2);
      }
      ext.normalize();
      auto key = ext.code();
      if (is_member(ext, cls).ok && seen.insert(key).second) out.push_back({ext, a.n, apex});
    }
  }
  std::sort(out.begin(), out.end(), [](const OnePointExtension& x, const OnePointExtension& y) {
    return x.ext.code() < y.ext.code();
  });
  return out;
}

// meet-tree extensions: branch at a vertex, sit inside a cut, or hang off a
// fresh point inside a cut (two new vertices)
std::vector<OnePointExtension> meet_tree_extensions(const FinStructure& a) {
  std::vector<OnePointExtension> out;
  auto sig = a.sig;
  int LT = sig->index_of("lt");
  Vertex apex = a.n;
  auto lt = [&](const FinStructure& s, Vertex x, Vertex y) { return s.has2(LT, x, y); };
  auto le = [&](const FinStructure& s, Vertex x, Vertex y) { return x == y || lt(s, x, y); };
  if (a.n == 0) {
    FinStructure ext(sig, 1);
    ext.meet.assign(1, 0);
    out.push_back({ext, 0, 0});
    return out;
  }

  auto push = [&](FinStructure ext) {
    ext.normalize();
    out.push_back({std::move(ext), a.n, apex});
  };

  // shared scaffold: copy a, add m new vertices
  auto base_copy = [&](int extra) {
    FinStructure ext(sig, a.n + extra);
    ext.rels[LT] = a.rels[LT];
    for (Vertex x = 0; x < a.n; ++x)
      for (Vertex y = 0; y < a.n; ++y) ext.meet[x * ext.n + y] = a.meet[x * a.n + y];
    return ext;
  };
  auto add_lt = [&](FinStructure& ext, Vertex x, Vertex y) {
    Vertex t[2] = {x, y};
    ext.rels[LT].add(t);
  };

  // type 1: branch at vertex v (apex > v, incomparable to everything above v)
  for (Vertex v = 0; v < a.n; ++v) {
    FinStructure ext = base_copy(1);
    add_lt(ext, v, apex);
    for (Vertex x = 0; x < a.n; ++x)
      if (lt(a, x, v)) add_lt(ext, x, apex);
    for (Vertex x = 0; x < a.n; ++x)
      ext.set_meet(x, apex, le(a, x, v) ? x : a.meet_of(x, v));
    ext.set_meet(apex, apex, apex);
    push(std::move(ext));
  }

  // cuts: covering pairs (u, v) plus the root cut (-1, root)
  std::vector<std::pair<Vertex, Vertex>> cut_list;
  Vertex root = 0;
  for (Vertex v = 0; v < a.n; ++v) {
    bool minimal = true;
    for (Vertex x = 0; x < a.n; ++x)
      if (lt(a, x, v)) minimal = false;
    if (minimal) root = v;
  }
  cut_list.push_back({-1, root});
  for (Vertex u = 0; u < a.n; ++u)
    for (Vertex v = 0; v < a.n; ++v) {
      if (!lt(a, u, v)) continue;
      bool covering = true;
      for (Vertex w = 0; w < a.n; ++w)
        if (lt(a, u, w) && lt(a, w, v)) covering = false;
      if (covering) cut_list.push_back({u, v});
    }

  for (auto [u, v] : cut_list) {
    // type 2: apex strictly inside the cut
    {
      FinStructure ext = base_copy(1);
      for (Vertex x = 0; x < a.n; ++x) {
        bool below = u >= 0 && le(a, x, u);
        bool above = le(a, v, x);
        if (below) add_lt(ext, x, apex);
        if (above) add_lt(ext, apex, x);
        if (below)
          ext.set_meet(x, apex, x);
        else if (above)
          ext.set_meet(x, apex, apex);
        else
          ext.set_meet(x, apex, a.meet_of(x, u));
      }
      ext.set_meet(apex, apex, apex);
      push(std::move(ext));
    }
    // type 3: fresh branch point w inside the cut, apex hangs off w
    {
      Vertex w = a.n + 1;
      FinStructure ext = base_copy(2);
      add_lt(ext, w, apex);
      for (Vertex x = 0; x < a.n; ++x) {
        bool below = u >= 0 && le(a, x, u);
        bool above = le(a, v, x);
        if (u < 0) {
          // w below the whole tree
          add_lt(ext, w, x);
          ext.set_meet(x, w, w);
          ext.set_meet(x, apex, w);
        } else if (below) {
          add_lt(ext, x, w);
          add_lt(ext, x, apex);
          ext.set_meet(x, w, x);
          ext.set_meet(x, apex, x);
        } else if (above) {
          add_lt(ext, w, x);
          ext.set_meet(x, w, w);
          ext.set_meet(x, apex, w);
        } else {
          ext.set_meet(x, w, a.meet_of(x, u));
          ext.set_meet(x, apex, a.meet_of(x, u));
        }
      }
      ext.set_meet(w, w, w);
      ext.set_meet(apex, apex, apex);
      ext.set_meet(w, apex, w);
      push(std::move(ext));
    }
  }
  std::sort(out.begin(), out.end(), [](const OnePointExtension& x, const OnePointExtension& y) {
    return x.ext.code() < y.ext.code();
  });
  return out;
}

// superposition: pair each left-reduct extension with each right-reduct one
std::vector<OnePointExtension> superposition_extensions(const FinStructure& a,
                                                        const ClassId& cls) {
  auto sig = class_signature(cls);
  auto l = class_signature(cls.args[0]);
  auto r = class_signature(cls.args[1]);
  size_t nl = l->relations.size();
  FinStructure la(l, a.n), ra(r, a.n);
  for (size_t i = 0; i < nl; ++i) la.rels[i] = a.rels[i];
  for (size_t i = 0; i < r->relations.size(); ++i) ra.rels[i] = a.rels[nl + i];
  if (l->has_meet) la.meet = a.meet;
  if (r->has_meet) ra.meet = a.meet;
  auto le = enumerate_extensions(la, cls.args[0]);
  auto re = enumerate_extensions(ra, cls.args[1]);
  std::vector<OnePointExtension> out;
  for (auto& x : le)
    for (auto& y : re) {
      if (x.ext.n != a.n + 1 || y.ext.n != a.n + 1) continue;  // meet closure size must agree
      FinStructure ext(sig, a.n + 1);
      for (size_t i = 0; i < nl; ++i) ext.rels[i] = x.ext.rels[i];
      for (size_t i = 0; i < r->relations.size(); ++i) ext.rels[nl + i] = y.ext.rels[i];
      if (l->has_meet) ext.meet = x.ext.meet;
      if (r->has_meet) ext.meet = y.ext.meet;
      out.push_back({std::move(ext), a.n, a.n});
    }
  // a functional factor may grow by two vertices; pair those with the other
  // factor extended freely is not needed for the catalogue (meet trees are
  // only superposed with relational classes in witnesses, handled below)
  for (auto& x : le) {
    if (x.ext.n != a.n + 2) continue;
    // right factor: relational, extend the new vertices with no relations is
    // wrong in general; enumerate right extensions twice (w then apex)
    auto re1 = enumerate_extensions(ra, cls.args[1]);
    for (auto& y1 : re1) {
      if (y1.ext.n != a.n + 1) continue;
      FinStructure rmid(r, a.n + 1);
      rmid.rels = y1.ext.rels;
      auto re2 = enumerate_extensions(rmid, cls.args[1]);
      for (auto& y2 : re2) {
        if (y2.ext.n != a.n + 2) continue;
        FinStructure ext(sig, a.n + 2);
        for (size_t i = 0; i < nl; ++i) ext.rels[i] = x.ext.rels[i];
        for (size_t i = 0; i < r->relations.size(); ++i) ext.rels[nl + i] = y2.ext.rels[i];
        if (l->has_meet) ext.meet = x.ext.meet;
        if (is_member(ext, cls).ok) out.push_back({std::move(ext), a.n, x.apex});
      }
    }
  }
  std::set<std::string> seen;
  std::vector<OnePointExtension> ded;
  for (auto& e : out)
    if (seen.insert(e.ext.code()).second) ded.push_back(e);
  std::sort(ded.begin(), ded.end(), [](const OnePointExtension& x, const OnePointExtension& y) {
    return x.ext.code() < y.ext.code();
  });
  return ded;
}

std::vector<OnePointExtension> lex_extensions(const FinStructure& a, const ClassId& cls) {
  auto sig = class_signature(cls);
  auto dec = lex_decompose(a, cls);
  std::vector<OnePointExtension> out;
  Vertex apex = a.n;
  int nb = dec.base.n;
  // apex joins fibre u: extend that fibre in the right class
  for (int u = 0; u < nb; ++u) {
    auto fexts = enumerate_extensions(dec.fibers[u], cls.args[1]);
    for (auto& fe : fexts) {
      if (fe.ext.n != dec.fibers[u].n + 1) continue;
      auto fibers = dec.fibers;
      fibers[u] = fe.ext;
      FinStructure prod = lex_product_structure(cls, dec.base, fibers);
      // product vertex order: fibres in base order; remap to put base of a first
      std::vector<int> map(prod.n, -1);
      std::vector<int> offs(nb + 1, 0);
      for (int b = 0; b < nb; ++b) offs[b + 1] = offs[b] + fibers[b].n;
      for (Vertex v = 0; v < a.n; ++v) map[offs[dec.vertex_base[v]] + dec.vertex_fiber[v]] = v;
      map[offs[u] + dec.fibers[u].n] = apex;
      FinStructure ext = prod.relabeled(map, a.n + 1);
      out.push_back({std::move(ext), a.n, apex});
    }
  }
  // apex spawns a fresh fibre: extend the base in the left class
  auto bexts = enumerate_extensions(dec.base, cls.args[0]);
  auto fsig = class_signature(cls.args[1]);
  FinStructure point(fsig, 1);
  for (auto& be : bexts) {
    if (be.ext.n != nb + 1) continue;
    auto fibers = dec.fibers;
    fibers.push_back(point);
    FinStructure prod = lex_product_structure(cls, be.ext, fibers);
    std::vector<int> map(prod.n, -1);
    std::vector<int> offs(nb + 2, 0);
    for (int b = 0; b < nb + 1; ++b) offs[b + 1] = offs[b] + fibers[b].n;
    for (Vertex v = 0; v < a.n; ++v) map[offs[dec.vertex_base[v]] + dec.vertex_fiber[v]] = v;
    map[offs[nb]] = apex;
    FinStructure ext = prod.relabeled(map, a.n + 1);
    out.push_back({std::move(ext), a.n, apex});
  }
  std::set<std::string> seen;
  std::vector<OnePointExtension> ded;
  for (auto& e : out)
    if (seen.insert(e.ext.code()).second) ded.push_back(e);
  std::sort(ded.begin(), ded.end(), [](const OnePointExtension& x, const OnePointExtension& y) {
    return x.ext.code() < y.ext.code();
  });
  return ded;
}

}  // namespace

std::vector<OnePointExtension> enumerate_extensions(const FinStructure& a, const ClassId& cls) {
  if (!(*a.sig == *class_signature(cls)))
    throw std::invalid_argument("signature mismatch for class " + cls.to_string());
  {
    auto m = is_member(a, cls);
    if (!m.ok)
      throw std::invalid_argument("structure not in class " + cls.to_string() + ": " + m.reason);
  }
  switch (cls.tag) {
    case ClassTag::Betweenness:
    case ClassTag::Circular:
    case ClassTag::Separation:
      return arrangement_extensions(a, cls);
    case ClassTag::LocalOrderS2:
    case ClassTag::S3Age:
    case ClassTag::QHatAge:
      return hat_cut_extensions(a, cls);
    case ClassTag::MeetTree:
      return meet_tree_extensions(a);
    case ClassTag::FreeSuperposition:
      return superposition_extensions(a, cls);
    case ClassTag::LexProduct:
      return lex_extensions(a, cls);
    default: {
      SlotEnum se(a, cls);
      se.run();
      std::sort(se.out.begin(), se.out.end(),
                [](const OnePointExtension& x, const OnePointExtension& y) {
                  return x.ext.code() < y.ext.code();
                });
      return se.out;
    }
  }
}

std::vector<FinStructure> enumerate_members(const ClassId& cls, int size) {
  static std::map<std::pair<std::string, int>, std::vector<FinStructure>> cache;
  auto key = std::make_pair(cls.to_string(), size);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::vector<FinStructure> out;
  if (size == 0) {
    out.push_back(FinStructure(class_signature(cls), 0));
  } else {
    std::map<std::string, FinStructure> reps;
    auto grow = [&](const std::vector<FinStructure>& from) {
      for (auto& p : from)
        for (auto& e : enumerate_extensions(p, cls)) {
          if (e.ext.n != size) continue;  // meet closure may jump past the target
          auto cf = canonical_form(e.ext);
          reps.emplace(cf.canon.code(), cf.canon);
        }
    };
    grow(enumerate_members(cls, size - 1));
    if (!class_is_relational(cls) && size >= 2) grow(enumerate_members(cls, size - 2));
    for (auto& [k, v] : reps) out.push_back(v);
  }
  cache[key] = out;
  return out;
}

std::vector<FinStructure> enumerate_members_upto(const ClassId& cls, int max_size) {
  std::vector<FinStructure> out;
  for (int s = 0; s <= max_size; ++s) {
    auto m = enumerate_members(cls, s);
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

}  // namespace fraisse
