#include "fraisse/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace fraisse {

using nlohmann::json;

json structure_to_json(const FinStructure& a) {
  json jr = json::array();
  for (auto& r : a.sig->relations)
    jr.push_back({{"name", r.name}, {"arity", r.arity}, {"symmetry", symmetry_name(r.sym)}});
  json rels = json::object();
  for (size_t r = 0; r < a.rels.size(); ++r) {
    json lst = json::array();
    for (size_t i = 0; i < a.rels[r].size(); ++i) {
      auto t = a.rels[r].tuple(i);
      lst.push_back(std::vector<int>(t.begin(), t.end()));
    }
    rels[a.sig->relations[r].name] = lst;
  }
  json out = {{"signature", {{"relations", jr}, {"has_meet", a.sig->has_meet}}},
              {"size", a.n},
              {"relations", rels}};
  if (a.sig->has_meet) {
    json m = json::array();
    for (int x = 0; x < a.n; ++x) {
      json row = json::array();
      for (int y = 0; y < a.n; ++y) row.push_back(a.meet_of(x, y));
      m.push_back(row);
    }
    out["meet"] = m;
  }
  return out;
}

FinStructure structure_from_json(const json& j) {
  std::vector<RelSpec> specs;
  const auto& sj = j.at("signature");
  for (const auto& r : sj.at("relations")) {
    RelSpec s;
    s.name = r.at("name").get<std::string>();
    s.arity = r.at("arity").get<int>();
    auto sym = symmetry_from_name(r.value("symmetry", "none"));
    if (!sym) throw std::runtime_error("unknown symmetry class");
    s.sym = *sym;
    if (s.arity < 1) throw std::runtime_error("arity must be >= 1");
    specs.push_back(std::move(s));
  }
  bool has_meet = sj.value("has_meet", false);
  FinStructure a(make_signature(std::move(specs), has_meet), j.at("size").get<int>());
  if (j.contains("relations")) {
    for (auto it = j.at("relations").begin(); it != j.at("relations").end(); ++it) {
      int r = a.sig->index_of(it.key());
      if (r < 0) throw std::runtime_error("unknown relation " + it.key());
      for (const auto& t : it.value()) {
        std::vector<Vertex> tup = t.get<std::vector<Vertex>>();
        if (static_cast<int>(tup.size()) != a.sig->relations[r].arity)
          throw std::runtime_error("tuple arity mismatch in " + it.key());
        a.add_tuple(r, tup);
      }
    }
  }
  a.normalize();
  if (has_meet) {
    const auto& m = j.at("meet");
    for (int x = 0; x < a.n; ++x)
      for (int y = 0; y < a.n; ++y) a.meet[x * a.n + y] = m.at(x).at(y).get<int>();
  }
  if (auto err = validate(a)) throw std::runtime_error("invalid structure: " + *err);
  return a;
}

FinStructure parse_structure(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("json parse error: ") + e.what());
  }
  return structure_from_json(j);
}

std::string structure_to_dot(const FinStructure& a, int apex_start) {
  std::ostringstream os;
  bool any_directed = false;
  for (auto& r : a.sig->relations)
    if (r.arity == 2 && r.sym != Symmetry::Set) any_directed = true;
  os << (any_directed ? "digraph" : "graph") << " G {\n";
  for (int v = 0; v < a.n; ++v) {
    os << "  v" << v;
    if (apex_start >= 0 && v >= apex_start)
      os << " [shape=box]";
    else
      os << " [shape=circle]";
    os << ";\n";
  }
  for (size_t r = 0; r < a.rels.size(); ++r) {
    if (a.sig->relations[r].arity != 2) continue;
    bool sym = a.sig->relations[r].sym == Symmetry::Set;
    for (size_t i = 0; i < a.rels[r].size(); ++i) {
      auto t = a.rels[r].tuple(i);
      if (sym && t[0] > t[1]) continue;  // one line per undirected edge
      os << "  v" << t[0] << (any_directed ? " -> " : " -- ") << "v" << t[1];
      std::string attrs;
      if (a.sig->relations.size() > 1) attrs = "label=\"" + a.sig->relations[r].name + "\"";
      if (sym && any_directed) attrs += (attrs.empty() ? "" : ", ") + std::string("dir=none");
      if (!attrs.empty()) os << " [" << attrs << "]";
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

json embedding_to_json(const FinStructure& a, const FinStructure& b,
                       std::span<const int> map) {
  return {{"source", structure_to_json(a)},
          {"target", structure_to_json(b)},
          {"map", std::vector<int>(map.begin(), map.end())}};
}

}  // namespace fraisse
