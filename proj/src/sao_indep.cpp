#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "fraisse/sao.hpp"

namespace fraisse {

namespace {

struct SubData {
  FinStructure s;
  std::vector<Vertex> verts;  // s index -> u vertex
};

SubData sub_of(const FinStructure& u, std::vector<Vertex> vs) {
  auto g = generated_substructure(u, std::move(vs));
  return {g.sub, std::vector<Vertex>(g.vertices.begin(), g.vertices.end())};
}

std::vector<int> inclusion_map(const std::vector<Vertex>& small,
                               const std::vector<Vertex>& big) {
  std::vector<int> out(small.size(), -1);
  for (size_t i = 0; i < small.size(); ++i) {
    auto it = std::lower_bound(big.begin(), big.end(), small[i]);
    out[i] = static_cast<int>(it - big.begin());
  }
  return out;
}

}  // namespace

bool independence_from_sao(const SaoId& sao, const FinStructure& u,
                           const std::vector<Vertex>& a, const std::vector<Vertex>& b,
                           const std::vector<Vertex>& c) {
  auto info = sao_info(sao);
  if (info.local && a.empty()) throw std::invalid_argument("local relation over an empty base");
  std::vector<Vertex> ab = a, ac = a, abc = a;
  ab.insert(ab.end(), b.begin(), b.end());
  ac.insert(ac.end(), c.begin(), c.end());
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), c.begin(), c.end());
  auto A = sub_of(u, a);
  auto AB = sub_of(u, ab);
  auto AC = sub_of(u, ac);
  auto ABC = sub_of(u, abc);
  AmalgamationProblem p{A.s, AB.s, AC.s, inclusion_map(A.verts, AB.verts),
                        inclusion_map(A.verts, AC.verts)};
  Amalgam am;
  try {
    am = sao_amalgamate(sao, p);
  } catch (const std::invalid_argument&) {
    return false;  // substructures outside the class cannot be independent
  }
  if (am.d.n != ABC.s.n) return false;
  // forced comparison map through the AB and AC inclusions into ABC
  std::vector<int> j(ABC.s.n, -1);
  auto ab_in_abc = inclusion_map(AB.verts, ABC.verts);
  auto ac_in_abc = inclusion_map(AC.verts, ABC.verts);
  for (int i = 0; i < AB.s.n; ++i) {
    int src = ab_in_abc[i], dst = am.leg_b[i];
    if (j[src] >= 0 && j[src] != dst) return false;
    j[src] = dst;
  }
  for (int i = 0; i < AC.s.n; ++i) {
    int src = ac_in_abc[i], dst = am.leg_c[i];
    if (j[src] >= 0 && j[src] != dst) return false;
    j[src] = dst;
  }
  for (auto v : j)
    if (v < 0) return false;
  return is_embedding_map(ABC.s, am.d, j);
}

std::optional<RealizedAmalgam> sao_from_independence(const SaoId& sao,
                                                     const AmalgamationProblem& p,
                                                     int max_depth) {
  auto info = sao_info(sao);
  RealizedAmalgam out;
  out.universe = p.c;
  out.a_img.resize(p.a.n);
  for (int i = 0; i < p.a.n; ++i) out.a_img[i] = p.f[i];
  out.c_img.resize(p.c.n);
  std::iota(out.c_img.begin(), out.c_img.end(), 0);

  struct Node {
    FinStructure u;
    std::vector<int> bmap;  // b vertex -> u vertex, -1 pending
  };
  std::vector<Vertex> aset(out.a_img.begin(), out.a_img.end());
  std::vector<Vertex> cset(out.c_img.begin(), out.c_img.end());

  std::function<std::optional<Node>(Node, int)> rec = [&](Node node,
                                                          int depth) -> std::optional<Node> {
    int next = -1;
    for (int i = 0; i < p.b.n; ++i)
      if (node.bmap[i] < 0) { next = i; break; }
    if (next < 0) {
      std::vector<Vertex> bset;
      for (auto v : node.bmap) bset.push_back(v);
      if (!is_embedding_map(p.b, node.u, node.bmap)) return std::nullopt;
      if (!independence_from_sao(sao, node.u, aset, bset, cset)) return std::nullopt;
      return node;
    }
    auto partial_ok = [&](const Node& child) {
      for (size_t r = 0; r < p.b.rels.size(); ++r)
        for (size_t t = 0; t < p.b.rels[r].size(); ++t) {
          auto tp = p.b.rels[r].tuple(t);
          std::vector<Vertex> img(tp.size());
          bool ready = true;
          for (size_t q = 0; q < tp.size(); ++q) {
            if (child.bmap[tp[q]] < 0) { ready = false; break; }
            img[q] = child.bmap[tp[q]];
          }
          if (ready && !child.u.rels[r].contains(img)) return false;
        }
      return true;
    };
    // existing vertices first (deterministic), then grow by one extension
    for (Vertex v = 0; v < node.u.n; ++v) {
      bool used = false;
      for (auto w : node.bmap)
        if (w == v) used = true;
      if (used) continue;
      Node child = node;
      child.bmap[next] = v;
      if (!partial_ok(child)) continue;
      if (auto r = rec(child, depth)) return r;
    }
    if (depth >= max_depth) return std::nullopt;
    for (auto& ext : enumerate_extensions(node.u, info.cls)) {
      if (ext.ext.n != node.u.n + 1) continue;
      Node child{ext.ext, node.bmap};
      child.bmap[next] = node.u.n;
      if (!partial_ok(child)) continue;
      if (auto r = rec(std::move(child), depth + 1)) return r;
    }
    return std::nullopt;
  };

  Node start{out.universe, std::vector<int>(p.b.n, -1)};
  for (int i = 0; i < p.a.n; ++i) start.bmap[p.e[i]] = p.f[i];
  auto found = rec(std::move(start), 0);
  if (!found) return std::nullopt;

  out.universe = found->u;
  out.b_img.assign(found->bmap.begin(), found->bmap.end());
  std::vector<Vertex> gens;
  for (auto v : out.b_img) gens.push_back(v);
  for (auto v : out.c_img) gens.push_back(v);
  auto g = generated_substructure(out.universe, gens);
  out.amalgam.d = g.sub;
  std::vector<Vertex> gv(g.vertices.begin(), g.vertices.end());
  out.amalgam.leg_b = inclusion_map(out.b_img, gv);
  out.amalgam.leg_c = inclusion_map(out.c_img, gv);
  return out;
}

}  // namespace fraisse
