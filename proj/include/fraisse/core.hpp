#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fraisse {

using Vertex = int32_t;

enum class Symmetry { None, Set, Cyclic };

const char* symmetry_name(Symmetry s);
std::optional<Symmetry> symmetry_from_name(const std::string& s);

struct RelSpec {
  std::string name;
  int arity = 2;
  Symmetry sym = Symmetry::None;
  bool operator==(const RelSpec&) const = default;
};

struct Signature {
  std::vector<RelSpec> relations;
  bool has_meet = false;

  int index_of(const std::string& name) const;
  bool operator==(const Signature&) const = default;
};

using SigPtr = std::shared_ptr<const Signature>;

SigPtr make_signature(std::vector<RelSpec> rels, bool has_meet = false);

// Flat sorted tuple storage. Tuples of fixed arity, lexicographic order,
// deduplicated after normalize(). Stored closed under the declared symmetry.
class TupleSet {
public:
  explicit TupleSet(int arity = 2) : arity_(arity) {}

  int arity() const { return arity_; }
  size_t size() const { return arity_ == 0 ? 0 : flat_.size() / arity_; }
  bool empty() const { return flat_.empty(); }

  void add(std::span<const Vertex> t);
  void add_closed(std::span<const Vertex> t, Symmetry sym);
  void normalize();  // sort + unique; required before contains()

  bool contains(std::span<const Vertex> t) const;
  std::span<const Vertex> tuple(size_t i) const {
    return {flat_.data() + i * arity_, static_cast<size_t>(arity_)};
  }
  const std::vector<Vertex>& raw() const { return flat_; }

  bool operator==(const TupleSet&) const = default;

private:
  int arity_;
  std::vector<Vertex> flat_;
};

struct FinStructure {
  SigPtr sig;
  int n = 0;
  std::vector<TupleSet> rels;             // one per sig->relations entry
  std::vector<Vertex> meet;               // n*n row-major when sig->has_meet

  FinStructure() = default;
  explicit FinStructure(SigPtr s, int size = 0);

  bool has(int rel, std::span<const Vertex> t) const { return rels[rel].contains(t); }
  bool has2(int rel, Vertex a, Vertex b) const;
  bool has3(int rel, Vertex a, Vertex b, Vertex c) const;
  Vertex meet_of(Vertex a, Vertex b) const { return meet[a * n + b]; }
  void set_meet(Vertex a, Vertex b, Vertex m);

  void add_tuple(int rel, std::span<const Vertex> t);  // closes under symmetry
  void normalize();

  bool operator==(const FinStructure&) const;

  // structure with vertices renamed through an injective map into [0, m)
  FinStructure relabeled(std::span<const int> map, int m) const;
  FinStructure induced(std::span<const Vertex> verts) const;  // verts sorted

  std::string code() const;  // total-order key; equal iff structures equal
};

// nullopt when valid, otherwise a description of the first violation found
std::optional<std::string> validate(const FinStructure& a);

struct Embedding {
  FinStructure source;
  FinStructure target;
  std::vector<int> map;
};

// low-level searches return bare vertex maps, lexicographically ordered
std::vector<std::vector<int>> find_embedding_maps(
    const FinStructure& a, const FinStructure& b,
    const std::vector<std::pair<int, int>>& fix = {});

std::vector<std::vector<int>> automorphism_maps(const FinStructure& a);

bool is_embedding_map(const FinStructure& a, const FinStructure& b,
                      std::span<const int> map);

struct CanonicalForm {
  FinStructure canon;
  std::vector<int> relabel;  // relabel[old] = canonical index
};

CanonicalForm canonical_form(const FinStructure& a);

struct GeneratedSub {
  FinStructure sub;
  std::vector<int> vertices;  // sub index -> vertex of a, sorted increasing
};

GeneratedSub generated_substructure(const FinStructure& a, std::vector<Vertex> s);

std::vector<int> compose_maps(std::span<const int> first, std::span<const int> second);
std::vector<int> inverse_perm(std::span<const int> p);

}  // namespace fraisse
