#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "fraisse/classes.hpp"

namespace fraisse {

namespace {

void add_arc(FinStructure& s, Vertex x, Vertex y) {
  Vertex t[2] = {x, y};
  s.rels[0].add(t);
}

}  // namespace

HatCompletion hat_completion(const FinStructure& a, const ClassId& cls) {
  auto m = is_member(a, cls);
  if (!m.ok) throw std::invalid_argument("not in class " + cls.to_string() + ": " + m.reason);
  HatCompletion out;
  out.base = a;
  auto sig = a.sig;
  switch (cls.tag) {
    case ClassTag::LocalOrderS2: {
      FinStructure h(sig, 2 * a.n);
      out.antipode.assign(2 * a.n, 0);
      for (Vertex v = 0; v < a.n; ++v) {
        out.antipode[v] = v + a.n;
        out.antipode[v + a.n] = v;
      }
      for (Vertex x = 0; x < a.n; ++x)
        for (Vertex y = 0; y < a.n; ++y) {
          if (x == y) continue;
          if (!arc(a, x, y)) continue;
          add_arc(h, x, y);
          add_arc(h, x + a.n, y + a.n);  // a' -> b'
          add_arc(h, y, x + a.n);        // b -> a'
          add_arc(h, y + a.n, x);        // b' -> a
        }
      h.normalize();
      out.completed = std::move(h);
      return out;
    }
    case ClassTag::S3Age: {
      FinStructure h(sig, 3 * a.n);
      out.antipode.assign(3 * a.n, 0);
      for (Vertex v = 0; v < a.n; ++v)
        for (int k = 0; k < 3; ++k) out.antipode[v + k * a.n] = v + ((k + 1) % 3) * a.n;
      // m = rotation offset of y relative to x; orientation from the circle model
      for (Vertex x = 0; x < a.n; ++x)
        for (Vertex y = 0; y < a.n; ++y) {
          if (x == y) continue;
          int rel;  // 1: x->y, 0: bot, -1: y->x
          rel = arc(a, x, y) ? 1 : arc(a, y, x) ? -1 : 0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              int mshift = ((j - i) % 3 + 3) % 3;
              Vertex xu = x + i * a.n, yv = y + j * a.n;
              // arc(x,y) + mshift*(2pi/3); rel classifies the base arc
              int eff;
              if (mshift == 0)
                eff = rel;
              else if (mshift == 1)
                eff = rel == -1 ? 1 : rel == 1 ? 0 : -1;
              else
                eff = rel == 0 ? 1 : rel == 1 ? -1 : 0;
              if (eff == 1) add_arc(h, xu, yv);
            }
        }
      h.normalize();
      out.completed = std::move(h);
      return out;
    }
    case ClassTag::QHatAge: {
      // add a mate for every vertex without one
      std::vector<int> mate(a.n, -1);
      for (Vertex x = 0; x < a.n; ++x)
        for (Vertex y = 0; y < a.n; ++y)
          if (x != y && bot(a, x, y)) mate[x] = y;
      std::vector<Vertex> fresh;
      for (Vertex x = 0; x < a.n; ++x)
        if (mate[x] < 0) fresh.push_back(x);
      int n2 = a.n + static_cast<int>(fresh.size());
      FinStructure h(sig, n2);
      out.antipode.assign(n2, -1);
      for (Vertex x = 0; x < a.n; ++x)
        if (mate[x] >= 0) out.antipode[x] = mate[x];
      std::vector<int> mate_idx(a.n, -1);
      for (size_t i = 0; i < fresh.size(); ++i) {
        mate_idx[fresh[i]] = a.n + static_cast<int>(i);
        out.antipode[fresh[i]] = a.n + static_cast<int>(i);
        out.antipode[a.n + i] = fresh[i];
      }
      for (Vertex x = 0; x < a.n; ++x)
        for (Vertex y = 0; y < a.n; ++y)
          if (x != y && arc(a, x, y)) add_arc(h, x, y);
      auto hat_of = [&](Vertex v) { return mate_idx[v]; };
      for (auto v : fresh) {
        Vertex vp = hat_of(v);
        for (Vertex u = 0; u < a.n; ++u) {
          if (u == v) continue;
          if (arc(a, u, v)) add_arc(h, vp, u);  // u -> v  =>  v' -> u
          if (arc(a, v, u)) add_arc(h, u, vp);
        }
        for (auto u : fresh) {
          if (u == v) continue;
          Vertex up = hat_of(u);
          if (arc(a, u, v)) add_arc(h, up, vp);
        }
        // fresh mate vs existing mates: u has mate w in a; v' vs u uses v->u
        // (already covered since u < a.n above)
      }
      h.normalize();
      out.completed = std::move(h);
      return out;
    }
    case ClassTag::C4Enlarged: {
      auto parts = *bot_parts(a);
      std::vector<Vertex> lonely;
      for (auto& p : parts)
        if (p.size() == 1) lonely.push_back(p[0]);
      int n2 = a.n + static_cast<int>(lonely.size());
      FinStructure h(sig, n2);
      out.antipode.assign(n2, -1);
      for (auto& p : parts)
        if (p.size() == 2) {
          out.antipode[p[0]] = p[1];
          out.antipode[p[1]] = p[0];
        }
      std::vector<int> mate_idx(a.n, -1);
      for (size_t i = 0; i < lonely.size(); ++i) {
        mate_idx[lonely[i]] = a.n + static_cast<int>(i);
        out.antipode[lonely[i]] = a.n + static_cast<int>(i);
        out.antipode[a.n + i] = lonely[i];
      }
      for (Vertex x = 0; x < a.n; ++x)
        for (Vertex y = 0; y < a.n; ++y)
          if (x != y && arc(a, x, y)) add_arc(h, x, y);
      for (auto v : lonely) {
        Vertex vt = mate_idx[v];
        for (Vertex u = 0; u < a.n; ++u) {
          if (u == v) continue;
          if (arc(a, u, v)) add_arc(h, vt, u);
          if (arc(a, v, u)) add_arc(h, u, vt);
        }
        for (auto u : lonely) {
          if (u == v) continue;
          if (arc(a, u, v)) add_arc(h, mate_idx[u], vt);  // mates copy the base arc
        }
      }
      h.normalize();
      out.completed = std::move(h);
      return out;
    }
    default:
      throw std::invalid_argument("no hat completion for class " + cls.to_string());
  }
}

std::vector<Cut> cuts(const FinStructure& a, const ClassId& cls) {
  std::vector<Cut> out;
  switch (cls.tag) {
    case ClassTag::LocalOrderS2:
    case ClassTag::S3Age:
    case ClassTag::QHatAge: {
      if (a.n == 0) return out;
      auto hat = hat_completion(a, cls);
      // consecutive pairs in circular position order of the hat
      int rot = cls.tag == ClassTag::S3Age ? 3 : 2;
      int d0 = std::max(14 * a.n, 6);
      auto pos = realize_circle(a, cls, d0);
      if (!pos) throw std::invalid_argument("not realizable");
      int D = rot * d0;
      std::vector<std::pair<int, Vertex>> pts;
      int base = a.n;
      if (cls.tag == ClassTag::QHatAge) {
        // completed indexing: mates of fresh vertices appended in fresh order
        for (Vertex v = 0; v < a.n; ++v) pts.push_back({rot * (*pos)[v] % D, v});
        for (Vertex v = a.n; v < hat.completed.n; ++v) {
          Vertex b = hat.antipode[v];
          pts.push_back({(rot * (*pos)[b] + d0) % D, v});
        }
      } else {
        for (Vertex v = 0; v < a.n; ++v)
          for (int k = 0; k < rot; ++k)
            pts.push_back({(rot * (*pos)[v] + k * d0) % D, v + k * a.n});
      }
      (void)base;
      std::sort(pts.begin(), pts.end());
      int np = static_cast<int>(pts.size());
      for (int i = 0; i < np; ++i)
        out.push_back({pts[i].second, pts[(i + 1) % np].second, "hat"});
      std::sort(out.begin(), out.end(), [](const Cut& x, const Cut& y) {
        return std::tie(x.u, x.v) < std::tie(y.u, y.v);
      });
      return out;
    }
    case ClassTag::Circular: {
      if (a.n == 1) {
        out.push_back({0, -1, "full"});
        return out;
      }
      for (Vertex u = 0; u < a.n; ++u)
        for (Vertex v = 0; v < a.n; ++v) {
          if (u == v) continue;
          bool blocked = false;
          for (Vertex w = 0; w < a.n; ++w)
            if (a.has3(0, u, w, v)) blocked = true;
          if (!blocked) out.push_back({u, v, "gap"});
        }
      return out;
    }
    case ClassTag::Betweenness: {
      for (Vertex u = 0; u < a.n; ++u)
        for (Vertex v = u + 1; v < a.n; ++v) {
          bool blocked = false;
          for (Vertex w = 0; w < a.n; ++w)
            if (a.has3(0, u, w, v)) blocked = true;
          if (!blocked) out.push_back({u, v, "gap"});
        }
      return out;
    }
    case ClassTag::Separation: {
      int rel = 0;
      for (Vertex u = 0; u < a.n; ++u)
        for (Vertex v = u + 1; v < a.n; ++v) {
          bool blocked = false;
          for (Vertex x = 0; x < a.n; ++x)
            for (Vertex y = 0; y < a.n; ++y) {
              Vertex t[4] = {u, v, x, y};
              if (a.rels[rel].contains(t)) blocked = true;
            }
          if (!blocked) out.push_back({u, v, "gap"});
        }
      return out;
    }
    case ClassTag::LinearOrder: {
      int lt = a.sig->index_of("lt");
      Vertex mn = -1, mx = -1;
      for (Vertex v = 0; v < a.n; ++v) {
        bool is_min = true, is_max = true;
        for (Vertex u = 0; u < a.n; ++u) {
          if (a.has2(lt, u, v)) is_min = false;
          if (a.has2(lt, v, u)) is_max = false;
        }
        if (is_min) mn = v;
        if (is_max) mx = v;
      }
      if (a.n > 0) out.push_back({-1, mn, "pre"});
      for (Vertex u = 0; u < a.n; ++u)
        for (Vertex v = 0; v < a.n; ++v) {
          if (!a.has2(lt, u, v)) continue;
          bool covering = true;
          for (Vertex w = 0; w < a.n; ++w)
            if (a.has2(lt, u, w) && a.has2(lt, w, v)) covering = false;
          if (covering) out.push_back({u, v, "pair"});
        }
      if (a.n > 0) out.push_back({mx, -1, "post"});
      return out;
    }
    case ClassTag::MeetTree: {
      int lt = a.sig->index_of("lt");
      Vertex root = -1;
      for (Vertex v = 0; v < a.n; ++v) {
        bool minimal = true;
        for (Vertex u = 0; u < a.n; ++u)
          if (a.has2(lt, u, v)) minimal = false;
        if (minimal) root = v;
      }
      if (a.n > 0) out.push_back({-1, root, "root"});
      for (Vertex u = 0; u < a.n; ++u)
        for (Vertex v = 0; v < a.n; ++v) {
          if (!a.has2(lt, u, v)) continue;
          bool covering = true;
          for (Vertex w = 0; w < a.n; ++w)
            if (a.has2(lt, u, w) && a.has2(lt, w, v)) covering = false;
          if (covering) out.push_back({u, v, "pair"});
        }
      return out;
    }
    default:
      throw std::invalid_argument("class " + cls.to_string() + " has no cut notion");
  }
}

// ---------- two-graph machinery ----------

FinStructure switch_graph(const FinStructure& g, const std::vector<Vertex>& u) {
  for (auto v : u)
    if (v < 0 || v >= g.n) throw std::invalid_argument("switch set out of range");
  std::vector<char> in(g.n, 0);
  for (auto v : u) in[v] = 1;
  FinStructure out(g.sig, g.n);
  int E = 0;
  for (Vertex x = 0; x < g.n; ++x)
    for (Vertex y = x + 1; y < g.n; ++y) {
      bool e = g.has2(E, x, y);
      if (in[x] != in[y]) e = !e;
      if (e) {
        Vertex t[2] = {x, y};
        out.rels[E].add_closed(t, Symmetry::Set);
      }
    }
  out.normalize();
  return out;
}

FinStructure tau(const FinStructure& g) {
  auto sig = class_signature(ClassId::two_graph());
  FinStructure out(sig, g.n);
  for (Vertex x = 0; x < g.n; ++x)
    for (Vertex y = x + 1; y < g.n; ++y)
      for (Vertex z = y + 1; z < g.n; ++z) {
        int c = g.has2(0, x, y) + g.has2(0, x, z) + g.has2(0, y, z);
        if (c % 2) {
          Vertex t[3] = {x, y, z};
          out.rels[0].add_closed(t, Symmetry::Set);
        }
      }
  out.normalize();
  return out;
}

FinStructure gamma(const FinStructure& t, Vertex u) {
  if (u < 0 || u >= t.n) throw std::invalid_argument("gamma base vertex out of range");
  auto sig = class_signature(ClassId::graph());
  FinStructure out(sig, t.n);
  for (Vertex x = 0; x < t.n; ++x)
    for (Vertex y = x + 1; y < t.n; ++y) {
      if (x == u || y == u) continue;
      if (t.has3(0, u, x, y)) {
        Vertex tt[2] = {x, y};
        out.rels[0].add_closed(tt, Symmetry::Set);
      }
    }
  out.normalize();
  return out;
}

TwoGraphAmalgam two_graph_amalgam(const FinStructure& a, const FinStructure& b,
                                  const FinStructure& c, const std::vector<int>& e,
                                  const std::vector<int>& f) {
  if (!is_embedding_map(a, b, e) || !is_embedding_map(a, c, f))
    throw std::invalid_argument("not an amalgamation problem");
  TwoGraphAmalgam out;
  // carrier: B, then C \ f(A)
  std::vector<int> cmap(c.n, -1);
  for (int i = 0; i < a.n; ++i) cmap[f[i]] = e[i];
  int next = b.n;
  for (Vertex y = 0; y < c.n; ++y)
    if (cmap[y] < 0) cmap[y] = next++;
  out.leg_b.resize(b.n);
  for (int i = 0; i < b.n; ++i) out.leg_b[i] = i;
  out.leg_c = cmap;
  int n = next;
  auto gsig = class_signature(ClassId::graph());
  FinStructure amalgam_graph(gsig, n);
  auto add_edges = [&](const FinStructure& gg, const std::vector<int>& map) {
    for (Vertex x = 0; x < gg.n; ++x)
      for (Vertex y = x + 1; y < gg.n; ++y)
        if (gg.has2(0, x, y)) {
          Vertex t[2] = {static_cast<Vertex>(map[x]), static_cast<Vertex>(map[y])};
          amalgam_graph.rels[0].add_closed(t, Symmetry::Set);
        }
  };
  if (b.n == 0) {
    out.d = c.relabeled(cmap, n);
    return out;
  }
  if (c.n == 0) {
    out.d = b;
    return out;
  }
  Vertex ub, uc;
  if (a.n > 0) {
    ub = e[0];
    uc = f[0];
  } else {
    ub = 0;
    uc = 0;
  }
  add_edges(gamma(b, ub), out.leg_b);
  add_edges(gamma(c, uc), out.leg_c);
  amalgam_graph.normalize();
  out.d = tau(amalgam_graph);
  return out;
}

}  // namespace fraisse
