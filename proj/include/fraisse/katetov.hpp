#pragma once

#include <json.hpp>
#include <memory>

#include "fraisse/sao.hpp"

namespace fraisse {

// class-specific label payload, canonically ordered by its code vector
struct LabelKey {
  std::vector<int> code;
  bool operator<(const LabelKey& o) const { return code < o.code; }
  bool operator==(const LabelKey& o) const { return code == o.code; }
};

struct IndexEntry {
  LabelKey label;
  Vertex apex = -1;
  std::vector<Vertex> extra;  // meet closure can add a branch point
};

struct KatetovResult {
  FinStructure base;
  FinStructure k;
  std::vector<int> eta;  // base -> k, always the identity range here
  std::vector<IndexEntry> index;
  nlohmann::json to_json() const;
};

class Engine {
 public:
  virtual ~Engine() = default;
  virtual ClassId cls() const = 0;
  virtual std::string kind() const = 0;
  // nullopt: admitted; otherwise the subclass restriction that failed
  virtual std::optional<std::string> admits(const FinStructure& a) const;
  virtual std::vector<LabelKey> labels(const FinStructure& a) const = 0;
  virtual KatetovResult build(const FinStructure& a) const = 0;
  virtual LabelKey transport(const FinStructure& a, const FinStructure& b,
                             const std::vector<int>& f, const LabelKey& lab) const = 0;
  // streaming checks for results too large to materialize
  virtual long long k_size_estimate(const FinStructure& a) const;
  virtual bool stream_membership(const FinStructure& a) const;
};

using EnginePtr = std::shared_ptr<const Engine>;

// registry: one engine per supported class id
EnginePtr engine_for(const ClassId& cls);
std::vector<ClassId> engine_classes();

KatetovResult katetov_apply(const EnginePtr& engine, const FinStructure& a);

// K(f): vertex map K(a) -> K(b) through the label transport
std::vector<int> katetov_map(const EnginePtr& engine, const FinStructure& a,
                             const FinStructure& b, const std::vector<int>& f);

// ---- structural orders and lexicographic tournaments ----

// tournament comparison of finite sequences: shorter first, then the first
// differing entries through the base relation
int lex_tournament_compare(const FinStructure& base, int rel, std::span<const int> x,
                           std::span<const int> y);

// power-set order then relational order for the ordered construction
int structural_order_compare(const FinStructure& a, const LabelKey& x, const LabelKey& y,
                             const ClassId& cls);

// ---- law suite ----

struct LawSuiteOptions {
  int bound = 3;
  int map_bound = 4;       // embeddings reach members of this size
  long long k_cap = 2500;  // materialization ceiling
};

struct LawFailure {
  std::string law;
  nlohmann::json detail;
};

struct LawReport {
  bool pass = true;
  long long checks = 0;
  std::vector<LawFailure> failures;
  nlohmann::json to_json() const;
};

LawReport functor_law_suite(const EnginePtr& engine, const LawSuiteOptions& opts = {});

// negative control: same engine with its last labelled copy dropped
EnginePtr corrupt_engine(const EnginePtr& engine);

// ---- functor obstructions ----

struct ObstructionCertificate {
  bool obstructed = false;
  nlohmann::json certificate;
};

// mechanical replay of the displayed obstruction; throws for classes where
// the construction does not apply
ObstructionCertificate no_katetov_witness(const ClassId& cls);

}  // namespace fraisse
