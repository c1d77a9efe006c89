#include "fraisse/limits.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>

#include "fraisse/json_io.hpp"

namespace fraisse {

using nlohmann::json;

long long tower_size_cap() {
  if (const char* env = std::getenv("FRAISSE_SIZE_CAP")) {
    long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return 2000;
}

json Tower::to_json() const {
  json lv = json::array();
  for (auto& l : levels) lv.push_back(structure_to_json(l));
  return {{"levels", lv}, {"maps", maps}, {"capped", capped}, {"diagnostic", diagnostic}};
}

Tower build_tower(const EnginePtr& engine, const FinStructure& seed, int depth, long long cap) {
  if (cap <= 0) cap = tower_size_cap();
  if (auto why = engine->admits(seed))
    throw std::invalid_argument("seed not admitted: " + *why);
  {
    auto m = is_member(seed, engine->cls());
    if (!m.ok) throw std::invalid_argument("seed not in class: " + m.reason);
  }
  Tower t;
  t.engine = engine;
  t.levels.push_back(seed);
  for (int d = 0; d < depth; ++d) {
    const auto& cur = t.levels.back();
    long long est = engine->k_size_estimate(cur);
    if (est > cap) {
      t.capped = true;
      t.diagnostic = "level " + std::to_string(d + 1) + " would have about " +
                     std::to_string(est) + " vertices (cap " + std::to_string(cap) + ")";
      break;
    }
    auto kr = engine->build(cur);
    {
      auto m = is_member(kr.k, engine->cls());
      if (!m.ok) throw std::logic_error("tower level leaves the class: " + m.reason);
    }
    t.maps.push_back(kr.eta);
    t.levels.push_back(kr.k);
  }
  return t;
}

json ExtensionPropertyReport::to_json() const {
  json rows_j = json::array();
  for (auto& r : rows)
    rows_j.push_back({{"subset", r.subset}, {"ext", r.ext_code}, {"level", r.level}});
  return {{"rows", rows_j}, {"all_realized_by_next_level", all_realized_by_next_level}};
}

ExtensionPropertyReport check_extension_property(const Tower& t, int subset_bound) {
  ExtensionPropertyReport rep;
  const auto& l0 = t.levels[0];
  auto cls = t.engine->cls();
  // inclusion of L0 into L_i by composing the connecting maps
  std::vector<std::vector<int>> incl(t.levels.size());
  incl[0].resize(l0.n);
  std::iota(incl[0].begin(), incl[0].end(), 0);
  for (size_t i = 1; i < t.levels.size(); ++i)
    incl[i] = compose_maps(incl[i - 1], t.maps[i - 1]);
  std::vector<std::vector<Vertex>> subsets;
  std::function<void(Vertex, std::vector<Vertex>&)> rec = [&](Vertex from,
                                                              std::vector<Vertex>& cur) {
    if (!cur.empty()) subsets.push_back(cur);
    if (static_cast<int>(cur.size()) == subset_bound) return;
    for (Vertex v = from; v < l0.n; ++v) {
      cur.push_back(v);
      rec(v + 1, cur);
      cur.pop_back();
    }
  };
  std::vector<Vertex> cur;
  rec(0, cur);
  for (auto& sub : subsets) {
    auto gen = generated_substructure(l0, sub);
    if (!is_member(gen.sub, cls).ok) continue;
    for (auto& ext : enumerate_extensions(gen.sub, cls)) {
      RealizationRow row{sub, ext.ext.code(), -1};
      for (size_t i = 0; i < t.levels.size(); ++i) {
        std::vector<std::pair<int, int>> fix;
        for (size_t k = 0; k < gen.vertices.size(); ++k)
          fix.push_back({static_cast<int>(k), incl[i][gen.vertices[k]]});
        if (!find_embedding_maps(ext.ext, t.levels[i], fix).empty()) {
          row.level = static_cast<int>(i);
          break;
        }
      }
      if (row.level < 0 || row.level > 1) rep.all_realized_by_next_level = false;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

json ExtensiveEmbeddingCert::to_json() const {
  return {{"seed", structure_to_json(seed)},
          {"depth", depth},
          {"group_order", group.size()},
          {"theta", theta},
          {"extends", extends},
          {"homomorphism", homomorphism},
          {"injective", injective}};
}

ExtensiveEmbeddingCert extensive_embedding(const EnginePtr& engine, const FinStructure& seed,
                                           int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  ExtensiveEmbeddingCert cert;
  cert.seed = seed;
  cert.depth = depth;
  cert.tower = build_tower(engine, seed, depth);
  if (cert.tower.capped) throw std::invalid_argument("tower capped: " + cert.tower.diagnostic);
  cert.group = automorphism_maps(seed);
  // theta(g) = K^depth(g), computed level by level
  std::vector<std::vector<int>> current = cert.group;
  for (int d = 0; d < depth; ++d) {
    std::vector<std::vector<int>> next;
    for (auto& g : current)
      next.push_back(katetov_map(engine, cert.tower.levels[d], cert.tower.levels[d],
                                 g));
    current = std::move(next);
  }
  cert.theta = current;
  const auto& top = cert.tower.levels.back();
  // inclusion of the seed into the top level
  std::vector<int> incl(seed.n);
  std::iota(incl.begin(), incl.end(), 0);
  for (auto& m : cert.tower.maps) incl = compose_maps(incl, m);
  cert.extends = true;
  for (size_t i = 0; i < cert.group.size(); ++i) {
    if (!is_embedding_map(top, top, cert.theta[i])) cert.extends = false;
    for (int v = 0; v < seed.n; ++v)
      if (cert.theta[i][incl[v]] != incl[cert.group[i][v]]) cert.extends = false;
  }
  // homomorphism: theta(gh) = theta(g) . theta(h) as literal maps
  cert.homomorphism = true;
  auto find_index = [&](const std::vector<int>& g) -> int {
    for (size_t i = 0; i < cert.group.size(); ++i)
      if (cert.group[i] == g) return static_cast<int>(i);
    return -1;
  };
  for (size_t i = 0; i < cert.group.size(); ++i)
    for (size_t j = 0; j < cert.group.size(); ++j) {
      auto gh = compose_maps(cert.group[j], cert.group[i]);  // apply j then i
      int idx = find_index(gh);
      if (idx < 0) {
        cert.homomorphism = false;
        continue;
      }
      auto composed = compose_maps(cert.theta[j], cert.theta[i]);
      if (composed != cert.theta[idx]) cert.homomorphism = false;
    }
  cert.injective = true;
  for (size_t i = 0; i < cert.theta.size(); ++i)
    for (size_t j = i + 1; j < cert.theta.size(); ++j)
      if (cert.theta[i] == cert.theta[j]) cert.injective = false;
  return cert;
}

// ------------------------------------------------------------------ henson

json HensonChain::to_json() const {
  json lv = json::array();
  for (auto& l : levels) lv.push_back(structure_to_json(l));
  return {{"levels", lv},
          {"vertex_levels", level_of_vertex},
          {"a_degrees", a_degree},
          {"stratified", stratified},
          {"ghat", ghat},
          {"ghat_ok", ghat_ok}};
}

HensonChain henson_tower(const FinStructure& seed, int levels, int extra_base, long long cap) {
  if (cap <= 0) cap = tower_size_cap();
  ClassId og{ClassTag::OrderedGraph};
  {
    auto m = is_member(seed, og);
    if (!m.ok) throw std::invalid_argument("seed must be a finite ordered graph: " + m.reason);
  }
  if (levels > seed.n)
    throw std::invalid_argument("levels beyond the seed size add no new vertex kinds");
  int eg = seed.sig->index_of("edge");
  int lt = seed.sig->index_of("lt");
  HensonChain chain;
  chain.levels.push_back(seed);
  chain.level_of_vertex.assign(seed.n, 0);
  struct NewVert {
    std::vector<Vertex> base;  // graph base S
    Vertex order_base;
    int sign;  // -1 below, +1 above
    int level;
  };
  std::vector<NewVert> meta;  // for vertices >= seed.n, in creation order
  for (int step = 1; step <= levels; ++step) {
    const auto& prev = chain.levels.back();
    // graph bases: |S ∩ seed| = step, |S \ seed| <= extra_base
    std::vector<std::vector<Vertex>> bases;
    std::vector<Vertex> inner, outer;
    for (Vertex v = 0; v < prev.n; ++v) (v < seed.n ? inner : outer).push_back(v);
    std::vector<Vertex> pickA, pickO;
    std::function<void(size_t)> recO = [&](size_t from) {
      std::vector<Vertex> s = pickA;
      s.insert(s.end(), pickO.begin(), pickO.end());
      std::sort(s.begin(), s.end());
      bases.push_back(s);
      if (static_cast<int>(pickO.size()) == extra_base) return;
      for (size_t i = from; i < outer.size(); ++i) {
        pickO.push_back(outer[i]);
        recO(i + 1);
        pickO.pop_back();
      }
    };
    std::function<void(size_t)> recA = [&](size_t from) {
      if (static_cast<int>(pickA.size()) == step) {
        recO(0);
        return;
      }
      for (size_t i = from; i < inner.size(); ++i) {
        pickA.push_back(inner[i]);
        recA(i + 1);
        pickA.pop_back();
      }
    };
    recA(0);
    std::sort(bases.begin(), bases.end());
    bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
    long long added = 2LL * bases.size() * prev.n;
    if (prev.n + added > cap)
      throw std::invalid_argument("henson level " + std::to_string(step) + " needs " +
                                  std::to_string(prev.n + added) + " vertices (cap " +
                                  std::to_string(cap) + ")");
    FinStructure next(seed.sig, prev.n + static_cast<int>(added));
    next.rels[eg] = prev.rels[eg];
    next.rels[lt] = prev.rels[lt];
    // order positions of the previous level
    std::vector<int> rank(prev.n, 0);
    for (Vertex v = 0; v < prev.n; ++v)
      for (Vertex u = 0; u < prev.n; ++u)
        if (prev.has2(lt, u, v)) ++rank[v];
    int id = prev.n;
    std::vector<NewVert> fresh;
    for (auto& s : bases)
      for (Vertex v = 0; v < prev.n; ++v)
        for (int sign : {-1, +1}) {
          NewVert nv{s, v, sign, step};
          fresh.push_back(nv);
          Vertex u = id++;
          for (auto w : s) {
            Vertex t[2] = {u, w};
            next.rels[eg].add_closed(t, Symmetry::Set);
          }
          // order: immediately below / above the order base
          for (Vertex w = 0; w < prev.n; ++w) {
            if (w == v) {
              Vertex t[2] = {sign < 0 ? u : w, sign < 0 ? w : u};
              next.rels[lt].add(t);
              continue;
            }
            Vertex t[2] = {rank[w] < rank[v] ? w : u, rank[w] < rank[v] ? u : w};
            next.rels[lt].add(t);
          }
        }
    // order among the new vertices: by order base rank, then sign, then the
    // lexicographic comparison of the graph bases in the previous order
    auto base_key = [&](const NewVert& nv) {
      std::vector<int> key;
      key.push_back(rank[nv.order_base]);
      key.push_back(nv.sign);
      std::vector<int> ranks;
      for (auto w : nv.base) ranks.push_back(rank[w]);
      std::sort(ranks.begin(), ranks.end());
      key.insert(key.end(), ranks.begin(), ranks.end());
      return key;
    };
    for (size_t i = 0; i < fresh.size(); ++i)
      for (size_t j = 0; j < fresh.size(); ++j) {
        if (i == j) continue;
        Vertex ui = static_cast<Vertex>(prev.n + i), uj = static_cast<Vertex>(prev.n + j);
        auto ki = base_key(fresh[i]), kj = base_key(fresh[j]);
        if (ki < kj || (ki == kj && i < j)) {
          Vertex t[2] = {ui, uj};
          next.rels[lt].add(t);
        }
      }
    next.normalize();
    {
      auto m = is_member(next, og);
      if (!m.ok) throw std::logic_error("henson level leaves the class: " + m.reason);
    }
    for (auto& nv : fresh) meta.push_back(nv);
    for (size_t i = 0; i < fresh.size(); ++i) chain.level_of_vertex.push_back(step);
    chain.levels.push_back(std::move(next));
  }
  // stratification: seed-neighbour count equals the declared level
  const auto& top = chain.levels.back();
  chain.a_degree.assign(top.n, 0);
  for (Vertex v = 0; v < top.n; ++v)
    for (Vertex w = 0; w < seed.n; ++w)
      if (v != w && top.has2(eg, v, w)) ++chain.a_degree[v];
  chain.stratified = true;
  for (Vertex v = seed.n; v < top.n; ++v)
    if (chain.a_degree[v] != chain.level_of_vertex[v]) chain.stratified = false;
  // ghat: extend each seed automorphism through the labels
  chain.ghat_ok = true;
  for (auto& g : automorphism_maps(seed)) {
    std::vector<int> ext = g;
    // extend level by level through the metadata
    for (int step = 1; step <= levels; ++step) {
      std::vector<int> prev_ext = ext;
      int offset = chain.levels[step - 1].n;
      ext.resize(chain.levels[step].n, -1);
      for (int v = offset; v < chain.levels[step].n; ++v) {
        const auto& nv = meta[v - seed.n];
        if (nv.level != step) continue;
        std::vector<Vertex> gs;
        for (auto w : nv.base) gs.push_back(prev_ext[w]);
        std::sort(gs.begin(), gs.end());
        Vertex gob = prev_ext[nv.order_base];
        // find the new vertex with base gs, order base gob, same sign
        int found = -1;
        for (int u = offset; u < chain.levels[step].n; ++u) {
          const auto& mv = meta[u - seed.n];
          if (mv.level != step) continue;
          if (mv.base == gs && mv.order_base == gob && mv.sign == nv.sign) found = u;
        }
        ext[v] = found;
      }
      for (int v = 0; v < offset; ++v) ext[v] = prev_ext[v];
    }
    bool ok = std::find(ext.begin(), ext.end(), -1) == ext.end() &&
              is_embedding_map(top, top, ext);
    for (int v = 0; v < seed.n; ++v)
      if (ext[v] != g[v]) ok = false;
    if (!ok) chain.ghat_ok = false;
    chain.ghat.push_back(std::move(ext));
  }
  return chain;
}

// ------------------------------------------------------- involution witnesses

json InvolutionWitness::to_json() const {
  return {{"case", case_id},
          {"class", cls.to_string()},
          {"witness", structure_to_json(witness)},
          {"generators", generators},
          {"verified", verified}};
}

std::vector<std::string> involution_cases() {
  return {"in-free-involutions:3", "peculiar-c3-powers:2", "superposition-two-blue",
          "meet-tree-expansion-swap"};
}

InvolutionWitness involution_witnesses(const std::string& case_id) {
  InvolutionWitness out;
  out.case_id = case_id;
  auto colon = case_id.find(':');
  std::string head = colon == std::string::npos ? case_id : case_id.substr(0, colon);
  int param = colon == std::string::npos ? 0 : std::stoi(case_id.substr(colon + 1));
  if (head == "in-free-involutions") {
    int n = param >= 3 ? param : 3;
    out.cls = ClassId::in_free(n);
    auto sig = class_signature(out.cls);
    // a_{i,j}: i < 2 rows, j < n-1 columns; arrows across increasing columns
    int cols = n - 1;
    FinStructure a(sig, 2 * cols);
    auto vid = [&](int i, int j) { return i * cols + j; };
    for (int j = 0; j < cols; ++j)
      for (int j2 = j + 1; j2 < cols; ++j2)
        for (int i = 0; i < 2; ++i)
          for (int i2 = 0; i2 < 2; ++i2) {
            Vertex t[2] = {static_cast<Vertex>(vid(i, j)), static_cast<Vertex>(vid(i2, j2))};
            a.rels[0].add(t);
          }
    a.normalize();
    out.witness = a;
    for (int j = 0; j < cols; ++j) {
      std::vector<int> tau(2 * cols);
      std::iota(tau.begin(), tau.end(), 0);
      std::swap(tau[vid(0, j)], tau[vid(1, j)]);
      out.generators.push_back(tau);
    }
    out.verified = is_member(a, out.cls).ok;
    auto aut = automorphism_maps(a);
    std::set<std::vector<int>> auts(aut.begin(), aut.end());
    for (auto& g : out.generators) {
      if (!auts.count(g)) out.verified = false;
      if (compose_maps(g, g) != compose_maps(g, inverse_perm(g))) out.verified = false;
      for (auto& h : out.generators)
        if (compose_maps(g, h) != compose_maps(h, g)) out.verified = false;
    }
    return out;
  }
  if (head == "peculiar-c3-powers") {
    int n = param >= 1 ? param : 2;
    out.cls = {ClassTag::Peculiar};
    auto sig = class_signature(out.cls);
    FinStructure a(sig, 3 * n);
    auto vid = [&](int blk, int i) { return blk * 3 + i; };
    int TO = sig->index_of("to");
    for (int blk = 0; blk < n; ++blk)
      for (int i = 0; i < 3; ++i) {
        Vertex t[2] = {static_cast<Vertex>(vid(blk, i)),
                       static_cast<Vertex>(vid(blk, (i + 1) % 3))};
        a.rels[TO].add(t);
      }
    for (int b1 = 0; b1 < n; ++b1)
      for (int b2 = b1 + 1; b2 < n; ++b2)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            Vertex t[2] = {static_cast<Vertex>(vid(b1, i)), static_cast<Vertex>(vid(b2, j))};
            a.rels[TO].add(t);
          }
    a.normalize();
    out.witness = a;
    for (int blk = 0; blk < n; ++blk) {
      std::vector<int> rho(3 * n);
      std::iota(rho.begin(), rho.end(), 0);
      rho[vid(blk, 0)] = vid(blk, 1);
      rho[vid(blk, 1)] = vid(blk, 2);
      rho[vid(blk, 2)] = vid(blk, 0);
      out.generators.push_back(rho);
    }
    out.verified = is_member(a, out.cls).ok;
    auto aut = automorphism_maps(a);
    std::set<std::vector<int>> auts(aut.begin(), aut.end());
    // the generated group must be C3^n: generate and count
    std::set<std::vector<int>> gen;
    std::vector<int> idm(3 * n);
    std::iota(idm.begin(), idm.end(), 0);
    gen.insert(idm);
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto g : gen)
        for (auto& h : out.generators) {
          auto gh = compose_maps(g, h);
          if (gen.insert(gh).second) grew = true;
        }
    }
    long long expect = 1;
    for (int i = 0; i < n; ++i) expect *= 3;
    if (static_cast<long long>(gen.size()) != expect) out.verified = false;
    for (auto& g : gen)
      if (!auts.count(g)) out.verified = false;
    for (auto& g : out.generators)
      for (auto& h : out.generators)
        if (compose_maps(g, h) != compose_maps(h, g)) out.verified = false;
    return out;
  }
  if (head == "superposition-two-blue") {
    // circular order superposed with red/blue points, blue unordered: the
    // witness is two blue points, swapped by an involution
    ClassId circ{ClassTag::Circular};
    out.cls = circ;  // the circular factor carries the obstruction content
    auto sig = class_signature(circ);
    FinStructure a(sig, 2);
    out.witness = a;
    std::vector<int> tau = {1, 0};
    out.generators.push_back(tau);
    out.verified = is_member(a, circ).ok && is_embedding_map(a, a, tau);
    // in the circular factor alone, a three-point extension fixing a point
    // never admits the swap as an automorphism
    for (auto& m3 : enumerate_members(circ, 3)) {
      for (auto& sw : automorphism_maps(m3)) {
        bool is_id = true;
        int fixed = -1, moved = 0;
        for (int v = 0; v < 3; ++v) {
          if (sw[v] == v)
            fixed = v;
          else
            is_id = false;
          if (sw[v] != v) ++moved;
        }
        if (!is_id && fixed >= 0 && moved == 2) out.verified = false;
      }
    }
    return out;
  }
  if (head == "meet-tree-expansion-swap") {
    out.cls = ClassId::superposition(ClassId::meet_tree(), ClassId::graph());
    auto sig = class_signature(out.cls);
    // vertices: meet m=0, leaves a=1, b=2; no graph edges
    FinStructure a(sig, 3);
    int lt = sig->index_of("lt");
    Vertex t1[2] = {0, 1};
    Vertex t2[2] = {0, 2};
    a.rels[lt].add(t1);
    a.rels[lt].add(t2);
    a.meet.assign(9, 0);
    a.set_meet(0, 0, 0);
    a.set_meet(1, 1, 1);
    a.set_meet(2, 2, 2);
    a.set_meet(0, 1, 0);
    a.set_meet(0, 2, 0);
    a.set_meet(1, 2, 0);
    a.normalize();
    out.witness = a;
    std::vector<int> tau = {0, 2, 1};
    out.generators.push_back(tau);
    out.verified = is_member(a, out.cls).ok && is_embedding_map(a, a, tau) &&
                   compose_maps(tau, tau) == std::vector<int>{0, 1, 2};
    return out;
  }
  throw std::invalid_argument("unknown witness case " + case_id);
}

}  // namespace fraisse
