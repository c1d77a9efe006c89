/* C interface to the finite amalgamation-class toolkit.
 *
 * All complex values cross the boundary as JSON strings. Returned strings are
 * heap-allocated; release them with fr_string_free. Structures parsed once can
 * be reused through opaque fr_structure handles.
 */
#ifndef FRAISSE_H
#define FRAISSE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fr_structure fr_structure;

typedef enum fr_status {
  FR_OK = 0,
  FR_ERR_PARSE = 1,     /* malformed JSON or structure */
  FR_ERR_ARGUMENT = 2,  /* unknown id, class mismatch, bad parameters */
  FR_ERR_INTERNAL = 3
} fr_status;

const char* fr_version(void);
void fr_string_free(char* s);
void fr_structure_free(fr_structure* s);

/* structures */
fr_status fr_structure_parse(const char* json, fr_structure** out, char** err);
fr_status fr_structure_to_json(const fr_structure* s, char** out_json);
fr_status fr_structure_to_dot(const fr_structure* s, int apex_start, char** out_dot);

/* catalogue */
fr_status fr_check_class(const fr_structure* s, const char* class_id, int* is_member,
                         char** report_json, char** err);
fr_status fr_extensions(const fr_structure* s, const char* class_id, char** out_json,
                        char** err);

/* amalgamation: problem = {"a":…,"b":…,"c":…,"e":[…],"f":[…]} */
fr_status fr_amalgamate(const char* sao_id, const char* problem_json, char** out_json,
                        char** err);
fr_status fr_audit_sao(const char* sao_id, int max_a, int max_b, int max_c,
                       long long problem_cap, unsigned long long seed, int* pass,
                       char** report_json, char** err);
fr_status fr_refute_sao(const char* class_id, int local, int bound, int* refuted,
                        char** cert_json, char** err);

/* functors */
fr_status fr_katetov(const char* class_id, const fr_structure* s, char** result_json,
                     char** err);
fr_status fr_katetov_map(const char* class_id, const char* embedding_json, char** map_json,
                         char** err);
fr_status fr_laws(const char* class_id, int bound, int map_bound, int* pass,
                  char** report_json, char** err);
fr_status fr_no_functor_witness(const char* class_id, int* obstructed, char** cert_json,
                                char** err);

/* towers and certificates */
fr_status fr_tower(const char* class_id, const fr_structure* seed, int depth,
                   char** tower_json, char** err);
fr_status fr_extension_property(const char* class_id, const fr_structure* seed, int depth,
                                int subset_bound, int* ok, char** report_json, char** err);
fr_status fr_extensive(const char* class_id, const fr_structure* seed, int depth, int* pass,
                       char** cert_json, char** err);
fr_status fr_henson(const char* seed_json, int levels, int extra_base, char** out_json,
                    char** err);
fr_status fr_involution_witness(const char* case_id, int* verified, char** out_json,
                                char** err);

#ifdef __cplusplus
}
#endif

#endif /* FRAISSE_H */
