#include "fraisse.h"

#include <cstring>
#include <new>
#include <string>

#include "fraisse/json_io.hpp"
#include "fraisse/limits.hpp"
#include "fraisse/sao.hpp"

using namespace fraisse;
using nlohmann::json;

struct fr_structure {
  FinStructure s;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_err(char** err, const std::string& msg) {
  if (err) *err = dup_string(msg);
}

template <typename F>
fr_status guarded(char** err, F&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    set_err(err, e.what());
    return FR_ERR_ARGUMENT;
  } catch (const std::runtime_error& e) {
    set_err(err, e.what());
    return FR_ERR_PARSE;
  } catch (const std::exception& e) {
    set_err(err, e.what());
    return FR_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* fr_version(void) { return "1.0.0"; }

void fr_string_free(char* s) { delete[] s; }
void fr_structure_free(fr_structure* s) { delete s; }

fr_status fr_structure_parse(const char* text, fr_structure** out, char** err) {
  if (!text || !out) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto s = parse_structure(text);
    *out = new fr_structure{std::move(s)};
    return FR_OK;
  });
}

fr_status fr_structure_to_json(const fr_structure* s, char** out_json) {
  if (!s || !out_json) return FR_ERR_ARGUMENT;
  *out_json = dup_string(structure_to_json(s->s).dump());
  return FR_OK;
}

fr_status fr_structure_to_dot(const fr_structure* s, int apex_start, char** out_dot) {
  if (!s || !out_dot) return FR_ERR_ARGUMENT;
  *out_dot = dup_string(structure_to_dot(s->s, apex_start));
  return FR_OK;
}

fr_status fr_check_class(const fr_structure* s, const char* class_id, int* member,
                         char** report_json, char** err) {
  if (!s || !class_id) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto cls = ClassId::parse(class_id);
    auto m = is_member(s->s, cls);
    if (member) *member = m.ok ? 1 : 0;
    if (report_json) {
      json r = {{"class", cls.to_string()},
                {"member", m.ok},
                {"reason", m.reason},
                {"witness", m.witness}};
      *report_json = dup_string(r.dump());
    }
    return FR_OK;
  });
}

fr_status fr_extensions(const fr_structure* s, const char* class_id, char** out_json,
                        char** err) {
  if (!s || !class_id || !out_json) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto cls = ClassId::parse(class_id);
    json arr = json::array();
    for (auto& e : enumerate_extensions(s->s, cls))
      arr.push_back({{"ext", structure_to_json(e.ext)}, {"base_n", e.base_n}, {"apex", e.apex}});
    *out_json = dup_string(arr.dump());
    return FR_OK;
  });
}

fr_status fr_amalgamate(const char* sao_id, const char* problem_json, char** out_json,
                        char** err) {
  if (!sao_id || !problem_json || !out_json) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto sao = SaoId::parse(sao_id);
    json j = json::parse(problem_json);
    AmalgamationProblem p;
    p.a = structure_from_json(j.at("a"));
    p.b = structure_from_json(j.at("b"));
    p.c = structure_from_json(j.at("c"));
    p.e = j.at("e").get<std::vector<int>>();
    p.f = j.at("f").get<std::vector<int>>();
    auto am = sao_amalgamate(sao, p);
    json out = {{"amalgam", structure_to_json(am.d)},
                {"leg_b", am.leg_b},
                {"leg_c", am.leg_c}};
    *out_json = dup_string(out.dump());
    return FR_OK;
  });
}

fr_status fr_audit_sao(const char* sao_id, int max_a, int max_b, int max_c,
                       long long problem_cap, unsigned long long seed, int* pass,
                       char** report_json, char** err) {
  if (!sao_id) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto sao = SaoId::parse(sao_id);
    AuditOptions opts;
    opts.max_a = max_a;
    opts.max_b = max_b;
    opts.max_c = max_c;
    if (problem_cap > 0) opts.problem_cap = problem_cap;
    if (seed) opts.seed = seed;
    auto rep = audit_sao(sao, opts);
    if (pass) *pass = rep.all_pass() ? 1 : 0;
    if (report_json) *report_json = dup_string(rep.to_json().dump());
    return FR_OK;
  });
}

fr_status fr_refute_sao(const char* class_id, int local, int bound, int* refuted,
                        char** cert_json, char** err) {
  if (!class_id) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto cls = ClassId::parse(class_id);
    auto r = refute_sao(cls, local != 0, bound);
    if (refuted) *refuted = r.unsat ? 1 : 0;
    if (cert_json) *cert_json = dup_string(r.certificate.dump());
    return FR_OK;
  });
}

fr_status fr_katetov(const char* class_id, const fr_structure* s, char** result_json,
                     char** err) {
  if (!class_id || !s || !result_json) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto engine = engine_for(ClassId::parse(class_id));
    auto r = katetov_apply(engine, s->s);
    *result_json = dup_string(r.to_json().dump());
    return FR_OK;
  });
}

fr_status fr_katetov_map(const char* class_id, const char* embedding_json, char** map_json,
                         char** err) {
  if (!class_id || !embedding_json || !map_json) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto engine = engine_for(ClassId::parse(class_id));
    json j = json::parse(embedding_json);
    auto a = structure_from_json(j.at("source"));
    auto b = structure_from_json(j.at("target"));
    auto f = j.at("map").get<std::vector<int>>();
    auto m = katetov_map(engine, a, b, f);
    json out = {{"map", m}};
    *map_json = dup_string(out.dump());
    return FR_OK;
  });
}

fr_status fr_laws(const char* class_id, int bound, int map_bound, int* pass,
                  char** report_json, char** err) {
  if (!class_id) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto engine = engine_for(ClassId::parse(class_id));
    LawSuiteOptions opts;
    opts.bound = bound;
    opts.map_bound = map_bound > 0 ? map_bound : bound + 1;
    auto rep = functor_law_suite(engine, opts);
    if (pass) *pass = rep.pass ? 1 : 0;
    if (report_json) *report_json = dup_string(rep.to_json().dump());
    return FR_OK;
  });
}

fr_status fr_no_functor_witness(const char* class_id, int* obstructed, char** cert_json,
                                char** err) {
  if (!class_id) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto cert = no_katetov_witness(ClassId::parse(class_id));
    if (obstructed) *obstructed = cert.obstructed ? 1 : 0;
    if (cert_json) *cert_json = dup_string(cert.certificate.dump());
    return FR_OK;
  });
}

fr_status fr_tower(const char* class_id, const fr_structure* seed, int depth,
                   char** tower_json, char** err) {
  if (!class_id || !seed || !tower_json) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto engine = engine_for(ClassId::parse(class_id));
    auto t = build_tower(engine, seed->s, depth);
    *tower_json = dup_string(t.to_json().dump());
    return FR_OK;
  });
}

fr_status fr_extension_property(const char* class_id, const fr_structure* seed, int depth,
                                int subset_bound, int* ok, char** report_json, char** err) {
  if (!class_id || !seed) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto engine = engine_for(ClassId::parse(class_id));
    auto t = build_tower(engine, seed->s, depth);
    auto rep = check_extension_property(t, subset_bound);
    if (ok) *ok = rep.all_realized_by_next_level ? 1 : 0;
    if (report_json) {
      auto j = rep.to_json();
      j["tower_capped"] = t.capped;
      j["tower_diagnostic"] = t.diagnostic;
      *report_json = dup_string(j.dump());
    }
    return FR_OK;
  });
}

fr_status fr_extensive(const char* class_id, const fr_structure* seed, int depth, int* pass,
                       char** cert_json, char** err) {
  if (!class_id || !seed) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto engine = engine_for(ClassId::parse(class_id));
    auto cert = extensive_embedding(engine, seed->s, depth);
    if (pass) *pass = cert.pass() ? 1 : 0;
    if (cert_json) *cert_json = dup_string(cert.to_json().dump());
    return FR_OK;
  });
}

fr_status fr_henson(const char* seed_json, int levels, int extra_base, char** out_json,
                    char** err) {
  if (!seed_json || !out_json) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto seed = parse_structure(seed_json);
    auto chain = henson_tower(seed, levels, extra_base);
    *out_json = dup_string(chain.to_json().dump());
    return FR_OK;
  });
}

fr_status fr_involution_witness(const char* case_id, int* verified, char** out_json,
                                char** err) {
  if (!case_id) {
    set_err(err, "null argument");
    return FR_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    auto w = involution_witnesses(case_id);
    if (verified) *verified = w.verified ? 1 : 0;
    if (out_json) *out_json = dup_string(w.to_json().dump());
    return FR_OK;
  });
}

}  // extern "C"
