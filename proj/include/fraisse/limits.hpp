#pragma once

#include <json.hpp>

#include "fraisse/katetov.hpp"

namespace fraisse {

struct Tower {
  EnginePtr engine;
  std::vector<FinStructure> levels;     // L0 = seed
  std::vector<std::vector<int>> maps;   // connecting embedding L_i -> L_{i+1}
  bool capped = false;
  std::string diagnostic;
  nlohmann::json to_json() const;
};

// default 2000 vertices per level; overridable through FRAISSE_SIZE_CAP
long long tower_size_cap();

Tower build_tower(const EnginePtr& engine, const FinStructure& seed, int depth,
                  long long cap = 0);

struct RealizationRow {
  std::vector<Vertex> subset;           // of L0
  std::string ext_code;
  int level = -1;                       // least level realizing it, -1 unrealized
};

struct ExtensionPropertyReport {
  std::vector<RealizationRow> rows;
  bool all_realized_by_next_level = true;
  nlohmann::json to_json() const;
};

ExtensionPropertyReport check_extension_property(const Tower& t, int subset_bound);

struct ExtensiveEmbeddingCert {
  FinStructure seed;
  int depth = 0;
  Tower tower;
  std::vector<std::vector<int>> group;   // Aut(seed)
  std::vector<std::vector<int>> theta;   // g -> automorphism of the top level
  bool extends = false, homomorphism = false, injective = false;
  bool pass() const { return extends && homomorphism && injective; }
  nlohmann::json to_json() const;
};

ExtensiveEmbeddingCert extensive_embedding(const EnginePtr& engine, const FinStructure& seed,
                                           int depth);

struct HensonChain {
  std::vector<FinStructure> levels;     // ordered graphs, M0 = seed
  std::vector<int> level_of_vertex;     // construction level of each top vertex
  std::vector<int> a_degree;            // seed-neighbour count per top vertex
  bool stratified = false;              // a-degree identifies the level
  std::vector<std::vector<int>> ghat;   // extension of each Aut(seed) element
  bool ghat_ok = false;
  nlohmann::json to_json() const;
};

// finite truncation: graph bases S subsets of the previous level with
// |S ∩ seed| = level and |S \ seed| <= extra_base; cap guards growth
HensonChain henson_tower(const FinStructure& seed, int levels, int extra_base = 0,
                         long long cap = 0);

struct InvolutionWitness {
  std::string case_id;
  FinStructure witness;
  ClassId cls;
  std::vector<std::vector<int>> generators;
  bool verified = false;
  nlohmann::json to_json() const;
};

// case ids: in-free-involutions:<n>, peculiar-c3-powers:<n>,
// superposition-two-blue, meet-tree-expansion-swap
InvolutionWitness involution_witnesses(const std::string& case_id);
std::vector<std::string> involution_cases();

}  // namespace fraisse
