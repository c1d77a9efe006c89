#include "fraisse/classes.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fraisse {

using nlohmann::json;

// ---------- ClassId ----------

bool ClassId::operator==(const ClassId& o) const {
  return tag == o.tag && params == o.params && args == o.args;
}

ClassId ClassId::hypertournament(std::vector<int> arities) {
  for (int a : arities)
    if (a < 2 || a > 3) throw std::invalid_argument("hypertournament arity must be 2 or 3");
  ClassId c{ClassTag::Hypertournament};
  c.params = std::move(arities);
  return c;
}

ClassId ClassId::in_free(int n) {
  if (n < 3) throw std::invalid_argument("in_free needs n >= 3");
  ClassId c{ClassTag::InFree};
  c.params = {n};
  return c;
}

ClassId ClassId::n_partite(int n) {
  if (n != 0 && n < 2) throw std::invalid_argument("n_partite needs 2 <= n <= omega");
  ClassId c{ClassTag::NPartite};
  c.params = {n};
  return c;
}

ClassId ClassId::superposition(ClassId a, ClassId b) {
  if (!class_is_relational(a) && !class_is_relational(b))
    throw std::invalid_argument("free superposition needs at most one functional factor");
  ClassId c{ClassTag::FreeSuperposition};
  c.args = {std::move(a), std::move(b)};
  return c;
}

ClassId ClassId::lex_product(ClassId a, ClassId b) {
  auto s = class_signature(a);
  for (auto& r : s->relations)
    if (r.arity == 1)
      throw std::invalid_argument("lex product left factor must be transitive (no unary relations)");
  if (s->has_meet) throw std::invalid_argument("lex product factors must be relational");
  if (class_signature(b)->has_meet)
    throw std::invalid_argument("lex product factors must be relational");
  ClassId c{ClassTag::LexProduct};
  c.args = {std::move(a), std::move(b)};
  return c;
}

ClassId ClassId::order_expansion(ClassId a) { return superposition(std::move(a), linear_order()); }
ClassId ClassId::tournament_expansion(ClassId a) { return superposition(std::move(a), tournament()); }

std::string ClassId::to_string() const {
  switch (tag) {
    case ClassTag::Graph: return "graph";
    case ClassTag::Tournament: return "tournament";
    case ClassTag::Hypertournament: {
      std::string s = "hypertournament:";
      for (size_t i = 0; i < params.size(); ++i)
        s += (i ? "," : "") + std::to_string(params[i]);
      return s;
    }
    case ClassTag::TwoGraph: return "two_graph";
    case ClassTag::InFree: return "in_free:" + std::to_string(params[0]);
    case ClassTag::NPartite:
      return params[0] == 0 ? "n_partite:omega" : "n_partite:" + std::to_string(params[0]);
    case ClassTag::Semigeneric: return "semigeneric";
    case ClassTag::SemigenericExpansion: return "semigeneric_expansion";
    case ClassTag::C4Enlarged: return "c4_enlarged";
    case ClassTag::C4EnlargedExpansion: return "c4_enlarged_expansion";
    case ClassTag::LinearOrder: return "linear_order";
    case ClassTag::Betweenness: return "betweenness";
    case ClassTag::Circular: return "circular";
    case ClassTag::Separation: return "separation";
    case ClassTag::LocalOrderS2: return "local_order_S2";
    case ClassTag::S3Age: return "S3_age";
    case ClassTag::QHatAge: return "Q_hat_age";
    case ClassTag::Poset: return "poset";
    case ClassTag::MeetTree: return "meet_tree";
    case ClassTag::OrderedGraph: return "ordered_graph";
    case ClassTag::Peculiar: return "peculiar";
    case ClassTag::FreeSuperposition:
      return "free_superposition(" + args[0].to_string() + "," + args[1].to_string() + ")";
    case ClassTag::LexProduct:
      return "lex_product(" + args[0].to_string() + "," + args[1].to_string() + ")";
  }
  return "?";
}

namespace {

// split "a,b" at top level (no nested-paren commas)
std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ClassId ClassId::parse(const std::string& s) {
  auto lp = s.find('(');
  if (lp != std::string::npos) {
    if (s.back() != ')') throw std::invalid_argument("bad class id: " + s);
    std::string head = s.substr(0, lp);
    auto parts = split_args(s.substr(lp + 1, s.size() - lp - 2));
    if (head == "free_superposition" || head == "superposition") {
      if (parts.size() != 2) throw std::invalid_argument("superposition needs two classes");
      return superposition(parse(parts[0]), parse(parts[1]));
    }
    if (head == "lex_product") {
      if (parts.size() != 2) throw std::invalid_argument("lex_product needs two classes");
      return lex_product(parse(parts[0]), parse(parts[1]));
    }
    if (head == "order_expansion") {
      if (parts.size() != 1) throw std::invalid_argument("order_expansion needs one class");
      return order_expansion(parse(parts[0]));
    }
    if (head == "tournament_expansion") {
      if (parts.size() != 1) throw std::invalid_argument("tournament_expansion needs one class");
      return tournament_expansion(parse(parts[0]));
    }
    throw std::invalid_argument("unknown class id: " + s);
  }
  auto colon = s.find(':');
  std::string head = colon == std::string::npos ? s : s.substr(0, colon);
  std::string par = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "graph") return graph();
  if (head == "tournament") return tournament();
  if (head == "hypertournament") {
    std::vector<int> ar;
    for (auto& p : split_args(par)) ar.push_back(std::stoi(p));
    return hypertournament(ar);
  }
  if (head == "two_graph") return two_graph();
  if (head == "in_free") return in_free(std::stoi(par));
  if (head == "n_partite") return n_partite(par == "omega" ? 0 : std::stoi(par));
  if (head == "semigeneric") return {ClassTag::Semigeneric};
  if (head == "semigeneric_expansion") return {ClassTag::SemigenericExpansion};
  if (head == "c4_enlarged") return {ClassTag::C4Enlarged};
  if (head == "c4_enlarged_expansion") return {ClassTag::C4EnlargedExpansion};
  if (head == "linear_order") return linear_order();
  if (head == "betweenness") return {ClassTag::Betweenness};
  if (head == "circular") return {ClassTag::Circular};
  if (head == "separation") return {ClassTag::Separation};
  if (head == "local_order_S2") return {ClassTag::LocalOrderS2};
  if (head == "S3_age") return {ClassTag::S3Age};
  if (head == "Q_hat_age") return {ClassTag::QHatAge};
  if (head == "poset") return {ClassTag::Poset};
  if (head == "meet_tree") return meet_tree();
  if (head == "ordered_graph") return {ClassTag::OrderedGraph};
  if (head == "peculiar") return {ClassTag::Peculiar};
  throw std::invalid_argument("unknown class id: " + s);
}

// ---------- signatures ----------

static SigPtr memo_sig(const std::string& key, std::vector<RelSpec> rels, bool meet = false) {
  static std::map<std::string, SigPtr> cache;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto s = make_signature(std::move(rels), meet);
  cache[key] = s;
  return s;
}

SigPtr class_signature(const ClassId& cls) {
  switch (cls.tag) {
    case ClassTag::Graph: return memo_sig("graph", {{"edge", 2, Symmetry::Set}});
    case ClassTag::Tournament:
    case ClassTag::InFree:
    case ClassTag::NPartite:
    case ClassTag::Semigeneric:
    case ClassTag::C4Enlarged:
    case ClassTag::LocalOrderS2:
    case ClassTag::S3Age:
    case ClassTag::QHatAge:
      return memo_sig("oriented", {{"to", 2, Symmetry::None}});
    case ClassTag::Hypertournament: {
      std::vector<RelSpec> rels;
      std::string key = "ht";
      for (size_t i = 0; i < cls.params.size(); ++i) {
        int a = cls.params[i];
        key += std::to_string(a);
        std::string nm = a == 2 ? "to" : "r3";
        if (cls.params.size() > 1 && a == 3 && i > 0) nm = "r3_" + std::to_string(i);
        rels.push_back({nm, a, a == 3 ? Symmetry::Cyclic : Symmetry::None});
      }
      return memo_sig(key, std::move(rels));
    }
    case ClassTag::TwoGraph: return memo_sig("two_graph", {{"e3", 3, Symmetry::Set}});
    case ClassTag::SemigenericExpansion:
      return memo_sig("semigen_exp", {{"to", 2, Symmetry::None}, {"rel", 2, Symmetry::None}});
    case ClassTag::C4EnlargedExpansion:
      return memo_sig("c4_exp", {{"to", 2, Symmetry::None}, {"mark", 1, Symmetry::None}});
    case ClassTag::LinearOrder:
    case ClassTag::Poset:
      return memo_sig("order", {{"lt", 2, Symmetry::None}});
    case ClassTag::Betweenness: return memo_sig("btw", {{"btw", 3, Symmetry::None}});
    case ClassTag::Circular: return memo_sig("circ", {{"circ", 3, Symmetry::Cyclic}});
    case ClassTag::Separation: return memo_sig("sep", {{"sep", 4, Symmetry::None}});
    case ClassTag::MeetTree: return memo_sig("meet_tree", {{"lt", 2, Symmetry::None}}, true);
    case ClassTag::OrderedGraph:
      return memo_sig("ordered_graph", {{"edge", 2, Symmetry::Set}, {"lt", 2, Symmetry::None}});
    case ClassTag::Peculiar:
      return memo_sig("peculiar", {{"edge", 2, Symmetry::Set},
                                   {"to", 2, Symmetry::None},
                                   {"dom", 3, Symmetry::None}});
    case ClassTag::FreeSuperposition: {
      auto l = class_signature(cls.args[0]);
      auto r = class_signature(cls.args[1]);
      std::vector<RelSpec> rels = l->relations;
      for (auto spec : r->relations) {
        std::string nm = spec.name;
        while (std::any_of(rels.begin(), rels.end(),
                           [&](const RelSpec& x) { return x.name == nm; }))
          nm += "2";
        spec.name = nm;
        rels.push_back(spec);
      }
      return memo_sig("sup:" + cls.to_string(), std::move(rels), l->has_meet || r->has_meet);
    }
    case ClassTag::LexProduct: {
      auto l = class_signature(cls.args[0]);
      auto r = class_signature(cls.args[1]);
      std::vector<RelSpec> rels = l->relations;
      for (auto& spec : r->relations) {
        bool found = false;
        for (auto& x : rels)
          if (x.name == spec.name) {
            if (x.arity != spec.arity || x.sym != spec.sym)
              throw std::invalid_argument("lex product: incompatible shared relation " + spec.name);
            found = true;
          }
        if (!found) rels.push_back(spec);
      }
      rels.push_back({"s", 2, Symmetry::Set});
      return memo_sig("lex:" + cls.to_string(), std::move(rels));
    }
  }
  throw std::logic_error("unhandled class tag");
}

bool class_is_relational(const ClassId& cls) { return !class_signature(cls)->has_meet; }

bool class_has_strong_amalgamation(const ClassId& cls) {
  switch (cls.tag) {
    case ClassTag::QHatAge:
    case ClassTag::C4Enlarged:
    case ClassTag::C4EnlargedExpansion:
      return false;
    case ClassTag::FreeSuperposition:
    case ClassTag::LexProduct:
      return class_has_strong_amalgamation(cls.args[0]) &&
             class_has_strong_amalgamation(cls.args[1]);
    default:
      return true;
  }
}

// ---------- shared oriented-graph helpers ----------

int arrow_rel(const FinStructure& a) { return a.sig->index_of("to"); }

bool arc(const FinStructure& a, Vertex x, Vertex y) {
  int r = arrow_rel(a);
  return r >= 0 && a.has2(r, x, y);
}

bool bot(const FinStructure& a, Vertex x, Vertex y) {
  return x != y && !arc(a, x, y) && !arc(a, y, x);
}

std::optional<std::vector<std::vector<Vertex>>> bot_parts(const FinStructure& a) {
  // bot must be an equivalence on distinct vertices
  for (Vertex x = 0; x < a.n; ++x)
    for (Vertex y = 0; y < a.n; ++y)
      for (Vertex z = 0; z < a.n; ++z)
        if (x != y && y != z && x != z && bot(a, x, y) && bot(a, y, z) && !bot(a, x, z))
          return std::nullopt;
  std::vector<int> part(a.n, -1);
  std::vector<std::vector<Vertex>> parts;
  for (Vertex x = 0; x < a.n; ++x) {
    if (part[x] >= 0) continue;
    part[x] = static_cast<int>(parts.size());
    parts.push_back({x});
    for (Vertex y = x + 1; y < a.n; ++y)
      if (part[y] < 0 && bot(a, x, y)) {
        part[y] = part[x];
        parts.back().push_back(y);
      }
  }
  return parts;
}

namespace {

MemberCheck fail(std::string reason, json witness) {
  MemberCheck m;
  m.ok = false;
  m.reason = std::move(reason);
  m.witness = std::move(witness);
  return m;
}

bool oriented_ok(const FinStructure& a, MemberCheck& out) {
  int r = arrow_rel(a);
  for (Vertex x = 0; x < a.n; ++x) {
    if (a.has2(r, x, x)) {
      out = fail("loop", {{"tuple", {x, x}}});
      return false;
    }
    for (Vertex y = x + 1; y < a.n; ++y)
      if (a.has2(r, x, y) && a.has2(r, y, x)) {
        out = fail("both orientations present", {{"tuple", {x, y}}});
        return false;
      }
  }
  return true;
}

bool tournament_ok(const FinStructure& a, MemberCheck& out) {
  if (!oriented_ok(a, out)) return false;
  int r = arrow_rel(a);
  for (Vertex x = 0; x < a.n; ++x)
    for (Vertex y = x + 1; y < a.n; ++y)
      if (!a.has2(r, x, y) && !a.has2(r, y, x)) {
        out = fail("missing edge", {{"tuple", {x, y}}});
        return false;
      }
  return true;
}

bool graph_ok(const FinStructure& a, int rel, MemberCheck& out) {
  for (Vertex x = 0; x < a.n; ++x)
    if (a.has2(rel, x, x)) {
      out = fail("graph loop", {{"tuple", {x, x}}});
      return false;
    }
  return true;  // symmetric closure is guaranteed by storage
}

bool strict_order_ok(const FinStructure& a, bool total, MemberCheck& out) {
  int r = a.sig->index_of("lt");
  for (Vertex x = 0; x < a.n; ++x) {
    if (a.has2(r, x, x)) {
      out = fail("order not irreflexive", {{"tuple", {x, x}}});
      return false;
    }
    for (Vertex y = 0; y < a.n; ++y) {
      if (x != y && a.has2(r, x, y) && a.has2(r, y, x)) {
        out = fail("order not antisymmetric", {{"tuple", {x, y}}});
        return false;
      }
      if (total && x != y && !a.has2(r, x, y) && !a.has2(r, y, x)) {
        out = fail("order not total", {{"tuple", {x, y}}});
        return false;
      }
      for (Vertex z = 0; z < a.n; ++z)
        if (a.has2(r, x, y) && a.has2(r, y, z) && !a.has2(r, x, z)) {
          out = fail("order not transitive", {{"tuple", {x, y, z}}});
          return false;
        }
    }
  }
  return true;
}

bool tuple_entries_distinct(const FinStructure& a, int rel, MemberCheck& out) {
  for (size_t i = 0; i < a.rels[rel].size(); ++i) {
    auto t = a.rels[rel].tuple(i);
    for (size_t p = 0; p < t.size(); ++p)
      for (size_t q = p + 1; q < t.size(); ++q)
        if (t[p] == t[q]) {
          out = fail("repeated entry in " + a.sig->relations[rel].name,
                     {{"tuple", std::vector<int>(t.begin(), t.end())}});
          return false;
        }
  }
  return true;
}

MemberCheck check_hypertournament(const FinStructure& a, const std::vector<int>& arities) {
  MemberCheck out;
  for (size_t ri = 0; ri < arities.size(); ++ri) {
    if (!tuple_entries_distinct(a, static_cast<int>(ri), out)) return out;
    if (arities[ri] == 2) {
      // tournament component
      for (Vertex x = 0; x < a.n; ++x)
        for (Vertex y = x + 1; y < a.n; ++y) {
          bool xy = a.has2(ri, x, y), yx = a.has2(ri, y, x);
          if (xy == yx)
            return fail("pair not oriented exactly once", {{"tuple", {x, y}}});
        }
    } else {
      for (Vertex x = 0; x < a.n; ++x)
        for (Vertex y = x + 1; y < a.n; ++y)
          for (Vertex z = y + 1; z < a.n; ++z) {
            bool fwd = a.has3(ri, x, y, z), bwd = a.has3(ri, y, x, z);
            if (fwd == bwd)
              return fail("triple lacks a unique 3-orientation", {{"subset", {x, y, z}}});
          }
    }
  }
  return out;
}

MemberCheck check_two_graph(const FinStructure& a) {
  MemberCheck out;
  if (!tuple_entries_distinct(a, 0, out)) return out;
  for (Vertex p = 0; p < a.n; ++p)
    for (Vertex q = p + 1; q < a.n; ++q)
      for (Vertex r = q + 1; r < a.n; ++r)
        for (Vertex s = r + 1; s < a.n; ++s) {
          int c = a.has3(0, p, q, r) + a.has3(0, p, q, s) + a.has3(0, p, r, s) +
                  a.has3(0, q, r, s);
          if (c % 2)
            return fail("odd number of 3-edges on a 4-set", {{"subset", {p, q, r, s}}});
        }
  return out;
}

MemberCheck check_n_partite(const FinStructure& a, int bound) {
  MemberCheck out;
  if (!oriented_ok(a, out)) return out;
  for (Vertex x = 0; x < a.n; ++x)
    for (Vertex y = 0; y < a.n; ++y)
      for (Vertex z = 0; z < a.n; ++z)
        if (x != y && y != z && x != z && bot(a, x, y) && bot(a, y, z) && !bot(a, x, z))
          return fail("non-adjacency not transitive", {{"subset", {x, y, z}}});
  if (bound > 0) {
    auto parts = bot_parts(a);
    if (static_cast<int>(parts->size()) > bound)
      return fail("too many parts", {{"count", parts->size()}});
  }
  return out;
}

MemberCheck check_semigeneric(const FinStructure& a) {
  MemberCheck out = check_n_partite(a, 0);
  if (!out.ok) return out;
  auto parts = *bot_parts(a);
  for (size_t p = 0; p < parts.size(); ++p)
    for (size_t q = 0; q < parts.size(); ++q) {
      if (p == q) continue;
      auto& P = parts[p];
      auto& Q = parts[q];
      for (size_t i = 0; i < P.size(); ++i)
        for (size_t j = i + 1; j < P.size(); ++j)
          for (size_t k = 0; k < Q.size(); ++k)
            for (size_t l = k + 1; l < Q.size(); ++l) {
              int c = arc(a, P[i], Q[k]) + arc(a, P[i], Q[l]) + arc(a, P[j], Q[k]) +
                      arc(a, P[j], Q[l]);
              if (c % 2)
                return fail("odd out-edge count between part pairs",
                            {{"subset", {P[i], P[j], Q[k], Q[l]}}});
            }
    }
  return out;
}

MemberCheck check_semigeneric_expansion(const FinStructure& a) {
  // reduct check on "to", then the part-indexed structure of "rel"
  MemberCheck out = check_semigeneric(a);
  if (!out.ok) return out;
  auto parts = *bot_parts(a);
  std::vector<int> part_of(a.n);
  for (size_t p = 0; p < parts.size(); ++p)
    for (auto v : parts[p]) part_of[v] = static_cast<int>(p);
  int R = a.sig->index_of("rel");
  for (Vertex x = 0; x < a.n; ++x)
    for (Vertex y = 0; y < a.n; ++y)
      if (a.has2(R, x, y) && (x == y || part_of[x] == part_of[y]))
        return fail("rel inside a part", {{"tuple", {x, y}}});
  for (size_t p = 0; p < parts.size(); ++p)
    for (size_t q = 0; q < parts.size(); ++q) {
      if (p == q) continue;
      auto& P = parts[p];
      auto& Q = parts[q];
      // delta = {x in P : rel(x, some q)}; must be empty or one out-class,
      // with rel constant across Q for its members
      std::vector<Vertex> delta;
      for (auto x : P) {
        bool any = false, all = true;
        for (auto y : Q) {
          if (a.has2(R, x, y))
            any = true;
          else
            all = false;
        }
        if (any && !all)
          return fail("rel not constant across target part", {{"vertex", x}});
        if (any) delta.push_back(x);
      }
      auto same_class = [&](Vertex x, Vertex y) {
        for (auto v : Q)
          if (arc(a, x, v) != arc(a, y, v)) return false;
        return true;
      };
      if (delta.empty()) {
        // an empty choice is only allowed when the part has one out-class
        for (size_t i = 1; i < P.size(); ++i)
          if (!same_class(P[0], P[i]))
            return fail("empty rel choice with two out-classes", {{"subset", {P[0], P[i]}}});
        continue;
      }
      for (size_t i = 1; i < delta.size(); ++i)
        if (!same_class(delta[0], delta[i]))
          return fail("rel set is not a single out-class", {{"subset", {delta[0], delta[i]}}});
      for (auto x : P)
        if (std::find(delta.begin(), delta.end(), x) == delta.end() &&
            same_class(delta[0], x))
          return fail("rel set is not a full out-class", {{"subset", {delta[0], x}}});
    }
  return out;
}

MemberCheck check_c4_enlarged(const FinStructure& a) {
  MemberCheck out = check_n_partite(a, 0);
  if (!out.ok) return out;
  auto parts = *bot_parts(a);
  for (auto& p : parts)
    if (p.size() > 2) return fail("part larger than 2", {{"subset", p}});
  // every vertex outside a complete part beats exactly one of its two members
  for (auto& p : parts) {
    if (p.size() != 2) continue;
    for (Vertex w = 0; w < a.n; ++w) {
      if (w == p[0] || w == p[1]) continue;
      if (arc(a, w, p[0]) == arc(a, w, p[1]))
        return fail("vertex does not separate a complete part", {{"subset", {w, p[0], p[1]}}});
    }
  }
  return out;
}

MemberCheck check_c4_expansion(const FinStructure& a) {
  MemberCheck out = check_c4_enlarged(a);
  if (!out.ok) return out;
  int M = a.sig->index_of("mark");
  auto parts = *bot_parts(a);
  for (auto& p : parts) {
    if (p.size() != 2) continue;
    Vertex t0[1] = {p[0]}, t1[1] = {p[1]};
    int c = a.rels[M].contains(t0) + a.rels[M].contains(t1);
    if (c != 1) return fail("complete part needs exactly one mark", {{"subset", p}});
  }
  return out;
}

MemberCheck check_in_free(const FinStructure& a, int n) {
  MemberCheck out;
  if (!oriented_ok(a, out)) return out;
  // search an n-anticlique
  std::vector<Vertex> pick;
  std::function<bool(Vertex)> rec = [&](Vertex from) -> bool {
    if (static_cast<int>(pick.size()) == n) return true;
    for (Vertex v = from; v < a.n; ++v) {
      bool ok = true;
      for (auto u : pick)
        if (!bot(a, u, v)) { ok = false; break; }
      if (!ok) continue;
      pick.push_back(v);
      if (rec(v + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  if (rec(0)) return fail("forbidden anticlique", {{"subset", pick}});
  return out;
}

MemberCheck check_local_order(const FinStructure& a) {
  MemberCheck out;
  if (!tournament_ok(a, out)) return out;
  for (Vertex v = 0; v < a.n; ++v)
    for (Vertex x = 0; x < a.n; ++x)
      for (Vertex y = 0; y < a.n; ++y)
        for (Vertex z = 0; z < a.n; ++z) {
          if (x == y || y == z || x == z) continue;
          bool in_side = arc(a, x, v) && arc(a, y, v) && arc(a, z, v);
          bool out_side = arc(a, v, x) && arc(a, v, y) && arc(a, v, z);
          if (!in_side && !out_side) continue;
          if (arc(a, x, y) && arc(a, y, z) && arc(a, z, x))
            return fail("3-cycle inside a neighbourhood", {{"subset", {v, x, y, z}}});
        }
  return out;
}

MemberCheck check_peculiar(const FinStructure& a) {
  MemberCheck out;
  int E = a.sig->index_of("edge");
  int D = a.sig->index_of("dom");
  if (!graph_ok(a, E, out)) return out;
  if (!tournament_ok(a, out)) return out;
  if (!tuple_entries_distinct(a, D, out)) return out;
  for (size_t i = 0; i < a.rels[D].size(); ++i) {
    auto t = a.rels[D].tuple(i);
    if (!a.has3(D, t[0], t[2], t[1]))
      return fail("dom not symmetric in its tail", {{"tuple", {t[0], t[1], t[2]}}});
    if (a.has3(D, t[1], t[2], t[0]) || a.has3(D, t[2], t[0], t[1]))
      return fail("two dominators on one triple", {{"tuple", {t[0], t[1], t[2]}}});
  }
  for (Vertex u = 0; u < a.n; ++u)
    for (Vertex x = 0; x < a.n; ++x)
      for (Vertex y = x + 1; y < a.n; ++y)
        for (Vertex z = y + 1; z < a.n; ++z) {
          if (u == x || u == y || u == z) continue;
          if (!a.has2(E, u, x) || !a.has2(E, u, y) || !a.has2(E, u, z)) continue;
          if (!a.has3(D, x, y, z) && !a.has3(D, y, z, x) && !a.has3(D, z, x, y))
            return fail("common neighbour triple without dominator",
                        {{"subset", {u, x, y, z}}});
        }
  return out;
}

MemberCheck check_meet_tree(const FinStructure& a) {
  MemberCheck out;
  if (auto err = validate(a)) return fail(*err, json::object());
  if (!strict_order_ok(a, false, out)) return out;
  int r = a.sig->index_of("lt");
  // order must match the meet: x < y iff x != y and meet(x,y) = x
  for (Vertex x = 0; x < a.n; ++x)
    for (Vertex y = 0; y < a.n; ++y) {
      bool lt = a.has2(r, x, y);
      bool mlt = x != y && a.meet_of(x, y) == x;
      if (lt != mlt) return fail("order and meet disagree", {{"tuple", {x, y}}});
    }
  // down-sets linearly ordered
  for (Vertex v = 0; v < a.n; ++v)
    for (Vertex x = 0; x < a.n; ++x)
      for (Vertex y = 0; y < a.n; ++y)
        if (x != y && a.has2(r, x, v) && a.has2(r, y, v) && !a.has2(r, x, y) &&
            !a.has2(r, y, x))
          return fail("down-set not a chain", {{"subset", {v, x, y}}});
  // meet is the greatest common lower bound
  for (Vertex x = 0; x < a.n; ++x)
    for (Vertex y = 0; y < a.n; ++y)
      for (Vertex z = 0; z < a.n; ++z) {
        bool zx = z == x || a.has2(r, z, x);
        bool zy = z == y || a.has2(r, z, y);
        Vertex m = a.meet_of(x, y);
        if (zx && zy && z != m && !a.has2(r, z, m))
          return fail("meet not greatest lower bound", {{"subset", {x, y, z}}});
      }
  return out;
}

}  // namespace

// ---------- realizations ----------

namespace {

// linear / circular / separation arrangement search.
// mode 0: betweenness (linear); 1: circular; 2: separation
std::optional<std::vector<int>> realize_arrangement(const FinStructure& a, int mode) {
  if (a.n == 0) return std::vector<int>{};
  int rel = 0;
  std::vector<int> seq;
  std::vector<char> used(a.n, 0);
  // position in circular order of each placed vertex
  std::vector<int> pos(a.n, -1);

  auto triple_ok = [&](Vertex x, Vertex y, Vertex z) {
    if (mode == 0) {
      bool between = (pos[x] < pos[y] && pos[y] < pos[z]) || (pos[z] < pos[y] && pos[y] < pos[x]);
      return a.has3(rel, x, y, z) == between;
    }
    // circular: gamma(x,y,z) iff positions strictly anticlockwise
    int px = pos[x], py = pos[y], pz = pos[z];
    bool cyc = (px < py && py < pz) || (py < pz && pz < px) || (pz < px && px < py);
    return a.has3(rel, x, y, z) == cyc;
  };
  auto quad_ok = [&](Vertex p, Vertex q, Vertex r, Vertex s) {
    // separation sep(p,q;r,s) iff chords pq and rs cross
    auto between = [&](int x, int lo, int hi) {
      if (lo < hi) return lo < x && x < hi;
      return x > lo || x < hi;
    };
    bool cross = between(pos[r], pos[p], pos[q]) != between(pos[s], pos[p], pos[q]);
    Vertex t[4] = {p, q, r, s};
    return a.rels[rel].contains(t) == cross;
  };

  std::function<bool(int)> rec = [&](int k) -> bool {
    if (k == a.n) return true;
    for (Vertex v = (k == 0 && mode != 0 ? 0 : 0); v < a.n; ++v) {
      if (used[v]) continue;
      if (k == 0 && mode != 0 && v != 0) break;  // fix rotation
      used[v] = 1;
      pos[v] = k;
      seq.push_back(v);
      bool ok = true;
      if (mode <= 1) {
        for (int i = 0; i < k && ok; ++i)
          for (int j = i + 1; j < k && ok; ++j) {
            Vertex x = seq[i], y = seq[j];
            // all orderings of {x,y,v}
            Vertex tri[3] = {x, y, v};
            std::sort(tri, tri + 3);
            do {
              if (!triple_ok(tri[0], tri[1], tri[2])) { ok = false; break; }
            } while (std::next_permutation(tri, tri + 3));
          }
      } else {
        for (int i = 0; i < k && ok; ++i)
          for (int j = i + 1; j < k && ok; ++j)
            for (int l = j + 1; l < k && ok; ++l) {
              Vertex quad[4] = {seq[i], seq[j], seq[l], v};
              std::sort(quad, quad + 4);
              do {
                if (!quad_ok(quad[0], quad[1], quad[2], quad[3])) { ok = false; break; }
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
  if (!rec(0)) return std::nullopt;
  std::vector<int> out(a.n);
  for (int i = 0; i < a.n; ++i) out[seq[i]] = i;
  return out;
}

}  // namespace

std::optional<std::vector<int>> realize_circle(const FinStructure& a, const ClassId& cls,
                                               int denom) {
  if (a.n == 0) return std::vector<int>{};
  int D = denom > 0 ? denom : std::max(14 * a.n, 6);
  if (cls.tag == ClassTag::QHatAge && D % 2) ++D;
  auto pair_ok = [&](int dx, Vertex x, Vertex y) {
    // dx = (pos_y - pos_x) mod D, dx != 0
    if (cls.tag == ClassTag::S3Age) {
      if (3 * dx == D || 3 * dx == 2 * D) return false;  // rational radians exclude thirds
      if (arc(a, x, y)) return 3 * dx < D;
      if (arc(a, y, x)) return 3 * dx > 2 * D;
      return 3 * dx > D && 3 * dx < 2 * D;
    }
    // half-circle models
    if (cls.tag == ClassTag::QHatAge) {
      if (arc(a, x, y)) return 2 * dx < D;
      if (arc(a, y, x)) return 2 * dx > D;
      return 2 * dx == D;  // exact antipodes
    }
    // S(2): tournament, no antipodal pairs
    if (2 * dx == D) return false;
    if (arc(a, x, y)) return 2 * dx < D;
    return 2 * dx > D;
  };
  std::vector<int> pos(a.n, -1);
  std::vector<char> used(D, 0);
  std::function<bool(int)> rec = [&](int v) -> bool {
    if (v == a.n) return true;
    int lo = v == 0 ? 0 : 1, hi = v == 0 ? 1 : D;
    for (int p = lo; p < hi; ++p) {
      if (used[p]) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) {
        int d = ((p - pos[u]) % D + D) % D;
        ok = pair_ok(d, u, v);
      }
      if (!ok) continue;
      pos[v] = p;
      used[p] = 1;
      if (rec(v + 1)) return true;
      pos[v] = -1;
      used[p] = 0;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return pos;
}

// ---------- membership ----------

namespace {

MemberCheck check_lex(const FinStructure& a, const ClassId& cls);
MemberCheck check_superposition(const FinStructure& a, const ClassId& cls);

}  // namespace

MemberCheck is_member(const FinStructure& a, const ClassId& cls) {
  if (!(*a.sig == *class_signature(cls)))
    throw std::invalid_argument("signature mismatch for class " + cls.to_string());
  MemberCheck out;
  switch (cls.tag) {
    case ClassTag::Graph: graph_ok(a, 0, out); return out;
    case ClassTag::Tournament: tournament_ok(a, out); return out;
    case ClassTag::Hypertournament: return check_hypertournament(a, cls.params);
    case ClassTag::TwoGraph: return check_two_graph(a);
    case ClassTag::InFree: return check_in_free(a, cls.params[0]);
    case ClassTag::NPartite: return check_n_partite(a, cls.params[0]);
    case ClassTag::Semigeneric: return check_semigeneric(a);
    case ClassTag::SemigenericExpansion: return check_semigeneric_expansion(a);
    case ClassTag::C4Enlarged: return check_c4_enlarged(a);
    case ClassTag::C4EnlargedExpansion: return check_c4_expansion(a);
    case ClassTag::LinearOrder: strict_order_ok(a, true, out); return out;
    case ClassTag::Poset: strict_order_ok(a, false, out); return out;
    case ClassTag::Betweenness: {
      if (!tuple_entries_distinct(a, 0, out)) return out;
      if (!realize_arrangement(a, 0)) return fail("not realizable on a line", json::object());
      return out;
    }
    case ClassTag::Circular: {
      if (!tuple_entries_distinct(a, 0, out)) return out;
      if (!realize_arrangement(a, 1)) return fail("not realizable on a circle", json::object());
      return out;
    }
    case ClassTag::Separation: {
      if (!tuple_entries_distinct(a, 0, out)) return out;
      if (!realize_arrangement(a, 2))
        return fail("not realizable as a separation structure", json::object());
      return out;
    }
    case ClassTag::LocalOrderS2: return check_local_order(a);
    case ClassTag::S3Age: {
      if (!oriented_ok(a, out)) return out;
      if (!realize_circle(a, cls)) return fail("no circle realization", json::object());
      return out;
    }
    case ClassTag::QHatAge: {
      if (!oriented_ok(a, out)) return out;
      for (Vertex x = 0; x < a.n; ++x) {
        int mates = 0;
        for (Vertex y = 0; y < a.n; ++y)
          if (y != x && bot(a, x, y)) ++mates;
        if (mates > 1) return fail("vertex with two antipodes", {{"vertex", x}});
      }
      if (!realize_circle(a, cls)) return fail("no circle realization", json::object());
      return out;
    }
    case ClassTag::MeetTree: return check_meet_tree(a);
    case ClassTag::OrderedGraph: {
      if (!graph_ok(a, a.sig->index_of("edge"), out)) return out;
      strict_order_ok(a, true, out);
      return out;
    }
    case ClassTag::Peculiar: return check_peculiar(a);
    case ClassTag::FreeSuperposition: return check_superposition(a, cls);
    case ClassTag::LexProduct: return check_lex(a, cls);
  }
  return out;
}

// ---------- composite memberships ----------

namespace {

// copy the tuples of `rels_from` (indices into a.sig) into a structure over `sig`
FinStructure project(const FinStructure& a, SigPtr sig, const std::vector<int>& rel_idx,
                     bool take_meet) {
  FinStructure out(sig, a.n);
  for (size_t i = 0; i < rel_idx.size(); ++i) out.rels[i] = a.rels[rel_idx[i]];
  if (take_meet) out.meet = a.meet;
  return out;
}

std::pair<std::vector<int>, std::vector<int>> superposition_split(const ClassId& cls) {
  auto l = class_signature(cls.args[0]);
  auto r = class_signature(cls.args[1]);
  std::vector<int> li, ri;
  size_t nl = l->relations.size();
  for (size_t i = 0; i < nl; ++i) li.push_back(static_cast<int>(i));
  for (size_t i = 0; i < r->relations.size(); ++i) ri.push_back(static_cast<int>(nl + i));
  return {li, ri};
}

MemberCheck check_superposition(const FinStructure& a, const ClassId& cls) {
  auto [li, ri] = superposition_split(cls);
  auto l = class_signature(cls.args[0]);
  auto r = class_signature(cls.args[1]);
  MemberCheck m0 = is_member(project(a, l, li, l->has_meet), cls.args[0]);
  if (!m0.ok) {
    m0.reason = cls.args[0].to_string() + " reduct: " + m0.reason;
    return m0;
  }
  MemberCheck m1 = is_member(project(a, r, ri, r->has_meet), cls.args[1]);
  if (!m1.ok) m1.reason = cls.args[1].to_string() + " reduct: " + m1.reason;
  return m1;
}

// membership of a structure over the composite lex signature, viewed as a
// member of `factor` whose foreign relations must be empty
MemberCheck check_in_common_language(const FinStructure& a, SigPtr common,
                                     const ClassId& factor) {
  auto fsig = class_signature(factor);
  FinStructure red(fsig, a.n);
  for (size_t i = 0; i < fsig->relations.size(); ++i) {
    int src = -1;
    for (size_t j = 0; j + 1 < common->relations.size(); ++j)
      if (common->relations[j].name == fsig->relations[i].name) src = static_cast<int>(j);
    red.rels[i] = a.rels[src];
  }
  for (size_t j = 0; j + 1 < common->relations.size(); ++j) {
    if (fsig->index_of(common->relations[j].name) >= 0) continue;
    if (!a.rels[j].empty())
      return fail("foreign relation " + common->relations[j].name + " non-empty",
                  json::object());
  }
  return is_member(red, factor);
}

MemberCheck check_lex(const FinStructure& a, const ClassId& cls) {
  auto sig = class_signature(cls);
  int S = sig->index_of("s");
  // s an equivalence on all vertices (reflexivity implicit; store distinct pairs)
  for (Vertex x = 0; x < a.n; ++x) {
    if (a.has2(S, x, x)) return fail("s loop", {{"tuple", {x, x}}});
    for (Vertex y = 0; y < a.n; ++y)
      for (Vertex z = 0; z < a.n; ++z) {
        auto same = [&](Vertex p, Vertex q) { return p == q || a.has2(S, p, q); };
        if (same(x, y) && same(y, z) && !same(x, z))
          return fail("s not transitive", {{"subset", {x, y, z}}});
      }
  }
  std::vector<int> fiber(a.n, -1);
  std::vector<std::vector<Vertex>> fibers;
  for (Vertex x = 0; x < a.n; ++x) {
    if (fiber[x] >= 0) continue;
    fiber[x] = static_cast<int>(fibers.size());
    fibers.push_back({x});
    for (Vertex y = x + 1; y < a.n; ++y)
      if (fiber[y] < 0 && a.has2(S, x, y)) {
        fiber[y] = fiber[x];
        fibers.back().push_back(y);
      }
  }
  int q = static_cast<int>(fibers.size());
  // quotient structure: relations read off cross tuples; consistency demanded
  FinStructure quot(sig, q);
  for (size_t r = 0; r + 1 < sig->relations.size(); ++r) {
    int k = sig->relations[r].arity;
    for (size_t i = 0; i < a.rels[r].size(); ++i) {
      auto t = a.rels[r].tuple(i);
      bool all_same = true;
      for (int j = 1; j < k; ++j)
        if (fiber[t[j]] != fiber[t[0]]) all_same = false;
      if (all_same) continue;
      std::vector<Vertex> ct(k);
      for (int j = 0; j < k; ++j) ct[j] = fiber[t[j]];
      quot.rels[r].add(ct);
    }
    quot.rels[r].normalize();
  }
  // consistency: cross tuples must be class-determined
  std::vector<Vertex> tup, ct;
  for (size_t r = 0; a.n > 0 && r + 1 < sig->relations.size(); ++r) {
    int k = sig->relations[r].arity;
    std::vector<Vertex> idx(k, 0);
    while (true) {
      bool all_same = true;
      for (int j = 1; j < k; ++j)
        if (fiber[idx[j]] != fiber[idx[0]]) all_same = false;
      if (!all_same) {
        ct.assign(k, 0);
        for (int j = 0; j < k; ++j) ct[j] = fiber[idx[j]];
        if (a.rels[r].contains(idx) != quot.rels[r].contains(ct))
          return fail("cross tuple not determined by fibres",
                      {{"tuple", std::vector<int>(idx.begin(), idx.end())}});
      }
      int j = k - 1;
      while (j >= 0 && idx[j] == a.n - 1) idx[j--] = 0;
      if (j < 0) break;
      ++idx[j];
    }
  }
  MemberCheck mq = check_in_common_language(quot, sig, cls.args[0]);
  if (!mq.ok) {
    mq.reason = "quotient: " + mq.reason;
    return mq;
  }
  for (auto& f : fibers) {
    FinStructure sub = a.induced(f);
    // fibre must carry complete s and right-class structure
    sub.rels[S] = TupleSet(2);
    MemberCheck mf = check_in_common_language(sub, sig, cls.args[1]);
    if (!mf.ok) {
      mf.reason = "fibre: " + mf.reason;
      return mf;
    }
  }
  return {};
}

}  // namespace

// ---------- lex construction / decomposition ----------

FinStructure lex_product_structure(const ClassId& prod, const FinStructure& base,
                                   const std::vector<FinStructure>& fibers) {
  if (prod.tag != ClassTag::LexProduct) throw std::invalid_argument("not a lex product class");
  if (static_cast<int>(fibers.size()) != base.n)
    throw std::invalid_argument("one fibre per base vertex required");
  auto sig = class_signature(prod);
  int S = sig->index_of("s");
  std::vector<int> offset(base.n + 1, 0);
  for (int u = 0; u < base.n; ++u) offset[u + 1] = offset[u] + fibers[u].n;
  FinStructure out(sig, offset[base.n]);
  auto bsig = class_signature(prod.args[0]);
  auto fsig = class_signature(prod.args[1]);
  // fibre relation + fibre structure
  for (int u = 0; u < base.n; ++u) {
    for (int i = 0; i < fibers[u].n; ++i)
      for (int j = i + 1; j < fibers[u].n; ++j) {
        Vertex t[2] = {offset[u] + i, offset[u] + j};
        out.rels[S].add_closed(t, Symmetry::Set);
      }
    for (size_t r = 0; r < fsig->relations.size(); ++r) {
      int tr = sig->index_of(fsig->relations[r].name);
      for (size_t i = 0; i < fibers[u].rels[r].size(); ++i) {
        auto t = fibers[u].rels[r].tuple(i);
        std::vector<Vertex> tt(t.begin(), t.end());
        for (auto& v : tt) v += offset[u];
        out.rels[tr].add(tt);
      }
    }
  }
  // base relations on cross tuples (classes not all equal), repeats allowed
  for (size_t r = 0; r < bsig->relations.size(); ++r) {
    int k = bsig->relations[r].arity;
    int br = static_cast<int>(r);
    int tr = sig->index_of(bsig->relations[r].name);
    std::vector<Vertex> idx(k, 0);
    if (out.n == 0) continue;
    while (true) {
      bool all_same = true;
      std::vector<Vertex> cls_t(k);
      for (int j = 0; j < k; ++j) {
        int u = static_cast<int>(std::upper_bound(offset.begin(), offset.end(), idx[j]) -
                                 offset.begin()) - 1;
        cls_t[j] = u;
        if (u != cls_t[0]) all_same = false;
      }
      if (!all_same && base.rels[br].contains(cls_t)) out.rels[tr].add(idx);
      int j = k - 1;
      while (j >= 0 && idx[j] == out.n - 1) idx[j--] = 0;
      if (j < 0) break;
      ++idx[j];
    }
  }
  out.normalize();
  return out;
}

LexDecomposition lex_decompose(const FinStructure& a, const ClassId& prod) {
  auto sig = class_signature(prod);
  int S = sig->index_of("s");
  LexDecomposition out;
  out.vertex_base.assign(a.n, -1);
  out.vertex_fiber.assign(a.n, -1);
  std::vector<std::vector<Vertex>> fibers;
  for (Vertex x = 0; x < a.n; ++x) {
    if (out.vertex_base[x] >= 0) continue;
    out.vertex_base[x] = static_cast<int>(fibers.size());
    fibers.push_back({x});
    for (Vertex y = x + 1; y < a.n; ++y)
      if (out.vertex_base[y] < 0 && a.has2(S, x, y)) {
        out.vertex_base[y] = out.vertex_base[x];
        fibers[out.vertex_base[x]].push_back(y);
      }
  }
  for (auto& f : fibers)
    for (size_t i = 0; i < f.size(); ++i) out.vertex_fiber[f[i]] = static_cast<int>(i);
  int q = static_cast<int>(fibers.size());
  auto bsig = class_signature(prod.args[0]);
  out.base = FinStructure(bsig, q);
  for (size_t r = 0; r < bsig->relations.size(); ++r) {
    int src = sig->index_of(bsig->relations[r].name);
    int k = bsig->relations[r].arity;
    for (size_t i = 0; i < a.rels[src].size(); ++i) {
      auto t = a.rels[src].tuple(i);
      bool all_same = true;
      std::vector<Vertex> ct(k);
      for (int j = 0; j < k; ++j) {
        ct[j] = out.vertex_base[t[j]];
        if (ct[j] != ct[0]) all_same = false;
      }
      if (!all_same) out.base.rels[r].add(ct);
    }
    out.base.rels[r].normalize();
  }
  auto fsig = class_signature(prod.args[1]);
  for (auto& f : fibers) {
    FinStructure sub = a.induced(f);
    FinStructure fb(fsig, static_cast<int>(f.size()));
    for (size_t r = 0; r < fsig->relations.size(); ++r) {
      int src = sig->index_of(fsig->relations[r].name);
      fb.rels[r] = sub.rels[src];
    }
    out.fibers.push_back(std::move(fb));
  }
  return out;
}

}  // namespace fraisse
