#pragma once

#include <json.hpp>

#include "fraisse/classes.hpp"

namespace fraisse {

struct SaoId {
  enum class Tag {
    FreeAmalg,
    PosetSir,
    QOrder,
    TournamentRight,
    InFree,
    T32Swir,
    NPartiteOmega,
    NPartite2Local,
    CircularLocal,
    S2Local,
    S3Local,
    QHatLocal,
    C4Expansion,
    SemigenericExpansion,
    Peculiar,
    MeetTreeLocal,
    LexProduct,
    Superposition,
    OrderedClassSwir,
  };
  Tag tag = Tag::FreeAmalg;
  std::vector<int> params;
  std::vector<SaoId> args;
  std::vector<ClassId> cls_args;

  std::string to_string() const;
  static SaoId parse(const std::string& s);
  static SaoId lex(SaoId a, SaoId b);
  static SaoId superpose(SaoId a, SaoId b);
  static SaoId ordered_swir(ClassId cls);
};

struct SaoInfo {
  ClassId cls;
  bool local = false;
  bool symmetric = false;
};

SaoInfo sao_info(const SaoId& sao);

// ids of every catalogue rule, for audits and the CLI
std::vector<SaoId> registered_saos();

struct AmalgamationProblem {
  FinStructure a, b, c;
  std::vector<int> e, f;  // embeddings a->b, a->c
};

struct Amalgam {
  FinStructure d;
  std::vector<int> leg_b, leg_c;
};

// throws std::invalid_argument on local-over-empty-base or non-member input
Amalgam sao_amalgamate(const SaoId& sao, const AmalgamationProblem& p);

// iterated left-bracketed amalgam of extensions over a common base
struct NTermAmalgam {
  FinStructure d;
  std::vector<int> base_leg;               // base -> d
  std::vector<std::vector<int>> ext_legs;  // per extension (in input order)
};

NTermAmalgam n_term_amalgam(const SaoId& sao, const FinStructure& base,
                            const std::vector<Embedding>& exts,
                            const std::vector<int>& order);

// B independent from C over A inside u, via the diagram-isomorphism test
bool independence_from_sao(const SaoId& sao, const FinStructure& u,
                           const std::vector<Vertex>& a, const std::vector<Vertex>& b,
                           const std::vector<Vertex>& c);

// reconstruct the amalgam from the independence oracle by searching for an
// independent copy of B over A beside C (Prop-style round trip)
struct RealizedAmalgam {
  Amalgam amalgam;
  FinStructure universe;
  std::vector<Vertex> a_img, b_img, c_img;
};

std::optional<RealizedAmalgam> sao_from_independence(const SaoId& sao,
                                                     const AmalgamationProblem& p,
                                                     int max_depth);

// ---- audits ----

struct AuditOptions {
  int max_a = 2, max_b = 4, max_c = 4;
  long long problem_cap = 400000;  // sampled (seeded) past this many problems
  uint64_t seed = 0xF5A155EULL;
  bool check_assoc = true;
};

struct AxiomResult {
  std::string axiom;
  bool pass = true;
  long long checked = 0;
  bool sampled = false;
  nlohmann::json counterexample;  // replayable witness
};

struct SaoAuditReport {
  SaoId sao;
  AuditOptions opts;
  std::vector<AxiomResult> axioms;
  bool all_pass() const {
    for (auto& a : axioms)
      if (!a.pass) return false;
    return true;
  }
  nlohmann::json to_json() const;
};

SaoAuditReport audit_sao(const SaoId& sao, const AuditOptions& opts = {});
bool audit_replay(const SaoId& sao, const nlohmann::json& counterexample);

// corrupted variant used as a negative control: flips one completion edge
Amalgam sao_amalgamate_corrupted(const SaoId& sao, const AmalgamationProblem& p);
SaoAuditReport audit_sao_corrupted(const SaoId& sao, const AuditOptions& opts = {});

// ---- bounded refutation ----

struct RefutationResult {
  bool unsat = false;     // true: no SAO of the stated locality within bounds
  bool conclusive = false;
  nlohmann::json certificate;
};

RefutationResult refute_sao(const ClassId& cls, bool local, int bound);
bool reverify_refutation(const nlohmann::json& certificate);

}  // namespace fraisse
