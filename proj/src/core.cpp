#include "fraisse/core.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fraisse {

const char* symmetry_name(Symmetry s) {
  switch (s) {
    case Symmetry::None: return "none";
    case Symmetry::Set: return "set";
    case Symmetry::Cyclic: return "cyclic";
  }
  return "none";
}

std::optional<Symmetry> symmetry_from_name(const std::string& s) {
  if (s == "none") return Symmetry::None;
  if (s == "set") return Symmetry::Set;
  if (s == "cyclic") return Symmetry::Cyclic;
  return std::nullopt;
}

int Signature::index_of(const std::string& name) const {
  for (size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<int>(i);
  return -1;
}

SigPtr make_signature(std::vector<RelSpec> rels, bool has_meet) {
  auto s = std::make_shared<Signature>();
  s->relations = std::move(rels);
  s->has_meet = has_meet;
  return s;
}

static bool tuple_less(std::span<const Vertex> a, std::span<const Vertex> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void TupleSet::add(std::span<const Vertex> t) {
  flat_.insert(flat_.end(), t.begin(), t.end());
}

void TupleSet::add_closed(std::span<const Vertex> t, Symmetry sym) {
  switch (sym) {
    case Symmetry::None:
      add(t);
      break;
    case Symmetry::Cyclic: {
      std::vector<Vertex> r(t.begin(), t.end());
      for (int i = 0; i < arity_; ++i) {
        add(r);
        std::rotate(r.begin(), r.begin() + 1, r.end());
      }
      break;
    }
    case Symmetry::Set: {
      std::vector<Vertex> r(t.begin(), t.end());
      std::sort(r.begin(), r.end());
      do {
        add(r);
      } while (std::next_permutation(r.begin(), r.end()));
      break;
    }
  }
}

void TupleSet::normalize() {
  if (arity_ == 0 || flat_.empty()) return;
  size_t k = flat_.size() / arity_;
  std::vector<size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) {
    return tuple_less(tuple(i), tuple(j));
  });
  std::vector<Vertex> out;
  out.reserve(flat_.size());
  for (size_t r = 0; r < k; ++r) {
    auto t = tuple(idx[r]);
    if (!out.empty() &&
        std::equal(t.begin(), t.end(), out.end() - arity_, out.end()))
      continue;
    out.insert(out.end(), t.begin(), t.end());
  }
  flat_ = std::move(out);
}

bool TupleSet::contains(std::span<const Vertex> t) const {
  if (arity_ == 0 || flat_.empty()) return false;
  size_t lo = 0, hi = flat_.size() / arity_;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    auto m = tuple(mid);
    if (std::equal(m.begin(), m.end(), t.begin(), t.end())) return true;
    if (tuple_less(m, t))
      lo = mid + 1;
    else
      hi = mid;
  }
  return false;
}

FinStructure::FinStructure(SigPtr s, int size) : sig(std::move(s)), n(size) {
  rels.reserve(sig->relations.size());
  for (auto& r : sig->relations) rels.emplace_back(r.arity);
  if (sig->has_meet) meet.assign(static_cast<size_t>(n) * n, -1);
}

bool FinStructure::has2(int rel, Vertex a, Vertex b) const {
  Vertex t[2] = {a, b};
  return rels[rel].contains(t);
}

bool FinStructure::has3(int rel, Vertex a, Vertex b, Vertex c) const {
  Vertex t[3] = {a, b, c};
  return rels[rel].contains(t);
}

void FinStructure::set_meet(Vertex a, Vertex b, Vertex m) {
  meet[a * n + b] = m;
  meet[b * n + a] = m;
}

void FinStructure::add_tuple(int rel, std::span<const Vertex> t) {
  rels[rel].add_closed(t, sig->relations[rel].sym);
}

void FinStructure::normalize() {
  for (auto& r : rels) r.normalize();
}

bool FinStructure::operator==(const FinStructure& o) const {
  return n == o.n && *sig == *o.sig && rels == o.rels && meet == o.meet;
}

FinStructure FinStructure::relabeled(std::span<const int> map, int m) const {
  FinStructure out(sig, m);
  std::vector<Vertex> t;
  for (size_t r = 0; r < rels.size(); ++r) {
    for (size_t i = 0; i < rels[r].size(); ++i) {
      auto tp = rels[r].tuple(i);
      t.assign(tp.begin(), tp.end());
      for (auto& v : t) v = map[v];
      out.rels[r].add(t);
    }
    out.rels[r].normalize();
  }
  if (sig->has_meet) {
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = 0; b < n; ++b)
        out.meet[map[a] * m + map[b]] = map[meet[a * n + b]];
  }
  return out;
}

FinStructure FinStructure::induced(std::span<const Vertex> verts) const {
  int m = static_cast<int>(verts.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < m; ++i) pos[verts[i]] = i;
  FinStructure out(sig, m);
  std::vector<Vertex> t;
  for (size_t r = 0; r < rels.size(); ++r) {
    for (size_t i = 0; i < rels[r].size(); ++i) {
      auto tp = rels[r].tuple(i);
      bool inside = true;
      for (auto v : tp)
        if (pos[v] < 0) { inside = false; break; }
      if (!inside) continue;
      t.assign(tp.begin(), tp.end());
      for (auto& v : t) v = pos[v];
      out.rels[r].add(t);
    }
    out.rels[r].normalize();
  }
  if (sig->has_meet) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        Vertex mm = meet[verts[a] * n + verts[b]];
        out.meet[a * m + b] = mm >= 0 && pos[mm] >= 0 ? pos[mm] : -1;
      }
  }
  return out;
}

std::string FinStructure::code() const {
  std::string s;
  s += std::to_string(n);
  for (auto& r : rels) {
    s += '|';
    for (auto v : r.raw()) {
      s += std::to_string(v);
      s += ',';
    }
  }
  if (!meet.empty()) {
    s += "|m";
    for (auto v : meet) {
      s += std::to_string(v);
      s += ',';
    }
  }
  return s;
}

std::optional<std::string> validate(const FinStructure& a) {
  for (size_t r = 0; r < a.rels.size(); ++r) {
    const auto& ts = a.rels[r];
    for (size_t i = 0; i < ts.size(); ++i) {
      auto t = ts.tuple(i);
      for (auto v : t)
        if (v < 0 || v >= a.n)
          return "tuple entry out of range in relation " + a.sig->relations[r].name;
      Symmetry sym = a.sig->relations[r].sym;
      if (sym != Symmetry::None) {
        std::vector<Vertex> u(t.begin(), t.end());
        if (sym == Symmetry::Cyclic) {
          std::rotate(u.begin(), u.begin() + 1, u.end());
          if (!ts.contains(u))
            return "relation " + a.sig->relations[r].name + " not cyclically closed";
        } else {
          std::sort(u.begin(), u.end());
          do {
            if (!ts.contains(u))
              return "relation " + a.sig->relations[r].name + " not symmetric-closed";
          } while (std::next_permutation(u.begin(), u.end()));
        }
      }
    }
  }
  if (a.sig->has_meet) {
    if (a.meet.size() != static_cast<size_t>(a.n) * a.n) return "meet table size mismatch";
    for (Vertex x = 0; x < a.n; ++x) {
      if (a.meet_of(x, x) != x) return "meet not idempotent";
      for (Vertex y = 0; y < a.n; ++y) {
        Vertex m = a.meet_of(x, y);
        if (m < 0 || m >= a.n) return "meet entry out of range";
        if (a.meet_of(y, x) != m) return "meet not commutative";
        // meet(a,b) <= a in the induced order: meet(m, x) = m
        if (a.meet_of(m, x) != m || a.meet_of(m, y) != m)
          return "meet not a lower bound";
        for (Vertex z = 0; z < a.n; ++z)
          if (a.meet_of(a.meet_of(x, y), z) != a.meet_of(x, a.meet_of(y, z)))
            return "meet not associative";
      }
    }
  }
  return std::nullopt;
}

namespace {

struct EmbedSearch {
  const FinStructure& a;
  const FinStructure& b;
  std::vector<int> map;        // a -> b, -1 unassigned
  std::vector<char> used;      // b-vertex used
  std::vector<std::vector<int>> out;

  EmbedSearch(const FinStructure& a_, const FinStructure& b_) : a(a_), b(b_) {
    map.assign(a.n, -1);
    used.assign(b.n, 0);
  }

  // check every tuple of a fully inside the assigned prefix maps into b, and
  // reflect b-tuples back (induced iso on the assigned part)
  bool consistent_at(int v) {
    std::vector<Vertex> t;
    for (size_t r = 0; r < a.rels.size(); ++r) {
      int ar = a.rels[r].arity();
      // forward: a-tuples involving v, all assigned
      for (size_t i = 0; i < a.rels[r].size(); ++i) {
        auto tp = a.rels[r].tuple(i);
        bool involves = false, ready = true;
        for (auto x : tp) {
          if (x == v) involves = true;
          if (map[x] < 0) { ready = false; break; }
        }
        if (!involves || !ready) continue;
        t.assign(tp.begin(), tp.end());
        for (auto& x : t) x = map[x];
        if (!b.rels[r].contains(t)) return false;
      }
      // reflect: b-tuples inside the image involving map[v]
      for (size_t i = 0; i < b.rels[r].size(); ++i) {
        auto tp = b.rels[r].tuple(i);
        bool involves = false, inside = true;
        for (auto x : tp) {
          if (x == map[v]) involves = true;
        }
        if (!involves) continue;
        t.assign(ar, -1);
        for (int k = 0; k < ar; ++k) {
          int pre = -1;
          for (int s = 0; s < a.n; ++s)
            if (map[s] == tp[k]) { pre = s; break; }
          if (pre < 0) { inside = false; break; }
          t[k] = pre;
        }
        if (!inside) continue;
        if (!a.rels[r].contains(t)) return false;
      }
    }
    if (a.sig->has_meet) {
      for (int x = 0; x < a.n; ++x) {
        if (map[x] < 0) continue;
        Vertex m = a.meet_of(x, v);
        Vertex bm = b.meet_of(map[x], map[v]);
        if (map[m] >= 0) {
          if (bm != map[m]) return false;
        } else {
          // image must stay open for m; cheap necessary check
          if (used[bm] && bm != map[x] && bm != map[v]) return false;
        }
      }
    }
    return true;
  }

  void run(int v) {
    if (v == a.n) {
      if (a.sig->has_meet) {
        for (int x = 0; x < a.n; ++x)
          for (int y = 0; y < a.n; ++y)
            if (b.meet_of(map[x], map[y]) != map[a.meet_of(x, y)]) return;
      }
      out.push_back(map);
      return;
    }
    if (map[v] >= 0) { run(v + 1); return; }
    for (int w = 0; w < b.n; ++w) {
      if (used[w]) continue;
      map[v] = w;
      used[w] = 1;
      if (consistent_at(v)) run(v + 1);
      map[v] = -1;
      used[w] = 0;
    }
  }
};

}  // namespace

std::vector<std::vector<int>> find_embedding_maps(
    const FinStructure& a, const FinStructure& b,
    const std::vector<std::pair<int, int>>& fix) {
  if (!(*a.sig == *b.sig)) throw std::invalid_argument("signature mismatch");
  if (a.n > b.n) return {};
  EmbedSearch es(a, b);
  for (auto [x, y] : fix) {
    if (x < 0 || x >= a.n || y < 0 || y >= b.n)
      throw std::invalid_argument("fix out of range");
    if (es.map[x] >= 0 && es.map[x] != y) return {};
    if (es.map[x] < 0 && es.used[y]) return {};
    es.map[x] = y;
    es.used[y] = 1;
  }
  for (auto [x, y] : fix)
    if (!es.consistent_at(x)) return {};
  es.run(0);
  return std::move(es.out);
}

std::vector<std::vector<int>> automorphism_maps(const FinStructure& a) {
  return find_embedding_maps(a, a);
}

bool is_embedding_map(const FinStructure& a, const FinStructure& b,
                      std::span<const int> map) {
  if (static_cast<int>(map.size()) != a.n) return false;
  std::vector<char> used(b.n, 0);
  for (auto v : map) {
    if (v < 0 || v >= b.n || used[v]) return false;
    used[v] = 1;
  }
  std::vector<Vertex> t;
  for (size_t r = 0; r < a.rels.size(); ++r) {
    for (size_t i = 0; i < a.rels[r].size(); ++i) {
      auto tp = a.rels[r].tuple(i);
      t.assign(tp.begin(), tp.end());
      for (auto& x : t) x = map[x];
      if (!b.rels[r].contains(t)) return false;
    }
    // reflect
    std::vector<int> pre(b.n, -1);
    for (int x = 0; x < a.n; ++x) pre[map[x]] = x;
    for (size_t i = 0; i < b.rels[r].size(); ++i) {
      auto tp = b.rels[r].tuple(i);
      bool inside = true;
      t.assign(tp.size(), -1);
      for (size_t k = 0; k < tp.size(); ++k) {
        if (pre[tp[k]] < 0) { inside = false; break; }
        t[k] = pre[tp[k]];
      }
      if (inside && !a.rels[r].contains(t)) return false;
    }
  }
  if (a.sig->has_meet) {
    for (int x = 0; x < a.n; ++x)
      for (int y = 0; y < a.n; ++y)
        if (b.meet_of(map[x], map[y]) != map[a.meet_of(x, y)]) return false;
  }
  return true;
}

namespace {

// vertex invariant: multiset of (relation, position, count-of-incidences),
// iterated with neighbour colours
std::vector<int> invariant_classes(const FinStructure& a) {
  std::vector<long long> col(a.n, 0);
  for (int round = 0; round < 3; ++round) {
    std::vector<std::vector<long long>> sig(a.n);
    for (int v = 0; v < a.n; ++v) sig[v].push_back(col[v]);
    for (size_t r = 0; r < a.rels.size(); ++r)
      for (size_t i = 0; i < a.rels[r].size(); ++i) {
        auto tp = a.rels[r].tuple(i);
        for (size_t k = 0; k < tp.size(); ++k) {
          long long h = static_cast<long long>(r) * 131 + k;
          for (auto x : tp) h = h * 1000003 + col[x] + 7;
          sig[tp[k]].push_back(h);
        }
      }
    if (a.sig->has_meet)
      for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < a.n; ++y)
          sig[a.meet_of(x, y)].push_back(1000 + col[x] * 31 + col[y]);
    for (auto& s : sig) std::sort(s.begin() + 1, s.end());
    // recolour by rank of signature
    std::vector<std::pair<std::vector<long long>, int>> order;
    order.reserve(a.n);
    for (int v = 0; v < a.n; ++v) order.push_back({sig[v], v});
    std::sort(order.begin(), order.end());
    int c = 0;
    for (int i = 0; i < a.n; ++i) {
      if (i > 0 && order[i].first != order[i - 1].first) ++c;
      col[order[i].second] = c;
    }
  }
  std::vector<int> out(a.n);
  for (int v = 0; v < a.n; ++v) out[v] = static_cast<int>(col[v]);
  return out;
}

struct CanonSearch {
  const FinStructure& a;
  std::vector<int> classes;
  std::vector<int> perm;   // old -> new, -1 unassigned
  std::vector<int> slot;   // new -> old
  std::string best;
  std::vector<int> best_perm;
  bool have_best = false;

  explicit CanonSearch(const FinStructure& a_) : a(a_), classes(invariant_classes(a_)) {
    perm.assign(a.n, -1);
    slot.assign(a.n, -1);
  }

  std::string code_under(std::span<const int> p) {
    return a.relabeled(p, a.n).code();
  }

  void run(int k) {
    if (k == a.n) {
      std::string c = code_under(perm);
      if (!have_best || c < best) {
        best = std::move(c);
        best_perm = perm;
        have_best = true;
      }
      return;
    }
    // candidates for canonical position k: minimal invariant class first
    int bestc = -1;
    for (int v = 0; v < a.n; ++v)
      if (perm[v] < 0 && (bestc < 0 || classes[v] < bestc)) bestc = classes[v];
    for (int v = 0; v < a.n; ++v) {
      if (perm[v] >= 0 || classes[v] != bestc) continue;
      perm[v] = k;
      slot[k] = v;
      run(k + 1);
      perm[v] = -1;
      slot[k] = -1;
    }
  }
};

}  // namespace

CanonicalForm canonical_form(const FinStructure& a) {
  if (a.n == 0) return {a, {}};
  CanonSearch cs(a);
  cs.run(0);
  return {a.relabeled(cs.best_perm, a.n), cs.best_perm};
}

GeneratedSub generated_substructure(const FinStructure& a, std::vector<Vertex> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (a.sig->has_meet) {
    bool grew = true;
    std::vector<char> in(a.n, 0);
    for (auto v : s) in[v] = 1;
    while (grew) {
      grew = false;
      for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i; j < s.size(); ++j) {
          Vertex m = a.meet_of(s[i], s[j]);
          if (!in[m]) {
            in[m] = 1;
            s.push_back(m);
            grew = true;
          }
        }
      std::sort(s.begin(), s.end());
    }
  }
  return {a.induced(s), std::vector<int>(s.begin(), s.end())};
}

std::vector<int> compose_maps(std::span<const int> first, std::span<const int> second) {
  std::vector<int> out(first.size());
  for (size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

std::vector<int> inverse_perm(std::span<const int> p) {
  std::vector<int> out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
  return out;
}

}  // namespace fraisse
