#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "fraisse/core.hpp"

namespace fraisse {

// Class tags. Parameters: Hypertournament carries its arity list, InFree the
// forbidden-anticlique size, NPartite the part bound (0 = no bound).
enum class ClassTag {
  Graph,
  Tournament,
  Hypertournament,
  TwoGraph,
  InFree,
  NPartite,
  Semigeneric,
  SemigenericExpansion,
  C4Enlarged,
  C4EnlargedExpansion,
  LinearOrder,
  Betweenness,
  Circular,
  Separation,
  LocalOrderS2,
  S3Age,
  QHatAge,
  Poset,
  MeetTree,
  OrderedGraph,
  Peculiar,
  FreeSuperposition,
  LexProduct,
};

struct ClassId {
  ClassTag tag = ClassTag::Graph;
  std::vector<int> params;
  std::vector<ClassId> args;

  std::string to_string() const;
  static ClassId parse(const std::string& s);  // throws std::invalid_argument

  bool operator==(const ClassId&) const;
  static ClassId graph() { return {ClassTag::Graph}; }
  static ClassId tournament() { return {ClassTag::Tournament}; }
  static ClassId hypertournament(std::vector<int> arities);
  static ClassId two_graph() { return {ClassTag::TwoGraph}; }
  static ClassId in_free(int n);
  static ClassId n_partite(int n);  // 0 = omega
  static ClassId linear_order() { return {ClassTag::LinearOrder}; }
  static ClassId meet_tree() { return {ClassTag::MeetTree}; }
  static ClassId superposition(ClassId a, ClassId b);
  static ClassId lex_product(ClassId a, ClassId b);
  static ClassId order_expansion(ClassId a);
  static ClassId tournament_expansion(ClassId a);
};

struct MemberCheck {
  bool ok = true;
  std::string reason;
  nlohmann::json witness;  // minimal violating tuple / subset
};

SigPtr class_signature(const ClassId& cls);
bool class_is_relational(const ClassId& cls);

// classes whose amalgams never identify fresh points (mate-unique classes
// like the hatted oriented graphs are the exceptions)
bool class_has_strong_amalgamation(const ClassId& cls);

// membership predicate; throws std::invalid_argument on signature mismatch
MemberCheck is_member(const FinStructure& a, const ClassId& cls);

struct OnePointExtension {
  FinStructure ext;  // base sits at vertices 0..base_n-1 via the identity
  int base_n = 0;
  Vertex apex = 0;   // distinguished generator; meet closure may add one more
};

// one representative per isomorphism-over-base class, deterministic order
std::vector<OnePointExtension> enumerate_extensions(const FinStructure& a,
                                                    const ClassId& cls);

// canonical representatives of all members of the given size, grown by
// one-point extensions. Deterministic order (sorted by canonical code).
std::vector<FinStructure> enumerate_members(const ClassId& cls, int size);
std::vector<FinStructure> enumerate_members_upto(const ClassId& cls, int max_size);

// ---- hat completions and cuts ----

struct HatCompletion {
  FinStructure base;
  FinStructure completed;       // base sits at 0..base.n-1
  std::vector<int> antipode;    // completed vertex -> mate (order 2/3 orbit step)
};

HatCompletion hat_completion(const FinStructure& a, const ClassId& cls);

struct Cut {
  // (u, v) pairs; v = -1 encodes an endpoint / root / singleton datum
  Vertex u = 0;
  Vertex v = 0;
  std::string kind;
};

std::vector<Cut> cuts(const FinStructure& a, const ClassId& cls);

// ---- two-graph machinery ----

FinStructure switch_graph(const FinStructure& g, const std::vector<Vertex>& u);
FinStructure tau(const FinStructure& g);                 // graph -> two-graph
FinStructure gamma(const FinStructure& t, Vertex u);     // two-graph -> graph

struct TwoGraphAmalgam {
  FinStructure d;
  std::vector<int> leg_b, leg_c;
};

// amalgam via the switch/gamma recipe; not canonical, existence only
TwoGraphAmalgam two_graph_amalgam(const FinStructure& a, const FinStructure& b,
                                  const FinStructure& c, const std::vector<int>& e,
                                  const std::vector<int>& f);

// ---- products ----

// lex product of a base structure (in the left class) with one fibre per
// base vertex (in the right class); result lives in LexProduct(left,right)
FinStructure lex_product_structure(const ClassId& prod, const FinStructure& base,
                                   const std::vector<FinStructure>& fibers);

struct LexDecomposition {
  FinStructure base;                      // quotient by the fibre relation
  std::vector<FinStructure> fibers;       // one per base vertex
  std::vector<int> vertex_base;           // product vertex -> base vertex
  std::vector<int> vertex_fiber;          // product vertex -> index in fibre
};

LexDecomposition lex_decompose(const FinStructure& a, const ClassId& prod);

// ---- circle-model realizations (exact integer grid arithmetic) ----

// positions on Z_D for the stated age; empty when not realizable
std::optional<std::vector<int>> realize_circle(const FinStructure& a,
                                               const ClassId& cls, int denom = 0);

// oriented-graph helpers shared across the catalogue
int arrow_rel(const FinStructure& a);  // index of the "to" relation, -1 if none
bool arc(const FinStructure& a, Vertex x, Vertex y);
bool bot(const FinStructure& a, Vertex x, Vertex y);
std::optional<std::vector<std::vector<Vertex>>> bot_parts(const FinStructure& a);

}  // namespace fraisse
