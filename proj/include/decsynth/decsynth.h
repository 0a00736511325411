/* C interface to the decsynth library.
 *
 * All handles are opaque and owned by the caller once returned; release them
 * with the matching *_free function. Strings returned through char** are
 * heap-allocated and released with dcs_string_free. On failure a function
 * returns a non-zero status and dcs_last_error() describes it (per thread).
 */
#ifndef DECSYNTH_DECSYNTH_H
#define DECSYNTH_DECSYNTH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(DECSYNTH_BUILDING)
#define DCS_API __attribute__((visibility("default")))
#else
#define DCS_API
#endif

typedef enum dcs_status {
    DCS_OK = 0,
    DCS_ERR_PARSE = 1,
    DCS_ERR_INVALID_ARGUMENT = 2,
    DCS_ERR_NOT_APPLICABLE = 3,
    DCS_ERR_EMPTY_SUPERVISOR = 4,
    DCS_ERR_SIZE_BOUND = 5,
    DCS_ERR_IO = 6,
    DCS_ERR_INTERNAL = 7
} dcs_status;

typedef enum dcs_format { DCS_FORMAT_TEXT = 0, DCS_FORMAT_JSON = 1 } dcs_format;

typedef struct dcs_problem dcs_problem;
typedef struct dcs_plan dcs_plan;
typedef struct dcs_synthesis dcs_synthesis;

typedef struct dcs_options {
    size_t bound;       /* product-state limit; 0 selects the default */
    int deterministic;  /* zero durations in reports */
    int parallel;       /* synthesize partial problems concurrently */
    const char* model;  /* name shown in reports; may be NULL */
} dcs_options;

DCS_API const char* dcs_version(void);
DCS_API const char* dcs_status_string(dcs_status status);
DCS_API const char* dcs_last_error(void);
DCS_API void dcs_string_free(char* s);

/* Defaults: bound 10^7, not deterministic, parallel. */
DCS_API dcs_options dcs_default_options(void);

/* Parsing. diagnostics (optional) receives one formatted line per
 * diagnostic, also on success (warnings and info). */
DCS_API dcs_status dcs_problem_parse(const char* text, size_t length, const char* origin,
                                     dcs_problem** out, char** diagnostics);
DCS_API dcs_status dcs_problem_load(const char* path, dcs_problem** out, char** diagnostics);
DCS_API void dcs_problem_free(dcs_problem* problem);
DCS_API dcs_status dcs_problem_print(const dcs_problem* problem, char** text);
DCS_API size_t dcs_problem_plant_count(const dcs_problem* problem);
DCS_API size_t dcs_problem_requirement_count(const dcs_problem* problem);

/* CNMS and RCNMS property checks. */
DCS_API dcs_status dcs_check(const dcs_problem* problem, dcs_format format, int* cnms_ok,
                             int* rcnms_ok, char** report);

/* Dependency graph in DOT; with_analysis colors components and extensions. */
DCS_API dcs_status dcs_graph_dot(const dcs_problem* problem, int with_analysis, char** dot);

/* Reduction plan. Returns DCS_ERR_NOT_APPLICABLE when RCNMS fails. */
DCS_API dcs_status dcs_plan_create(const dcs_problem* problem, dcs_plan** out);
DCS_API void dcs_plan_free(dcs_plan* plan);
DCS_API const char* dcs_plan_verdict(const dcs_plan* plan);
DCS_API size_t dcs_plan_class_count(const dcs_plan* plan);
DCS_API dcs_status dcs_plan_report(const dcs_plan* plan, dcs_format format,
                                   const dcs_options* options, char** report);

/* Plan and execute. With allow_fallback, a problem outside RCNMS is
 * synthesized monolithically and dcs_synthesis_fallback reports 1. */
DCS_API dcs_status dcs_synthesize(const dcs_problem* problem, const dcs_options* options,
                                  int allow_fallback, dcs_synthesis** out);
DCS_API void dcs_synthesis_free(dcs_synthesis* synthesis);
DCS_API int dcs_synthesis_fallback(const dcs_synthesis* synthesis);
DCS_API size_t dcs_synthesis_supervisor_count(const dcs_synthesis* synthesis);
/* Supervisor i as a model text holding one plant block named label. */
DCS_API dcs_status dcs_synthesis_supervisor(const dcs_synthesis* synthesis, size_t index,
                                            char** label, char** text);
DCS_API dcs_status dcs_synthesis_report(const dcs_synthesis* synthesis, dcs_format format,
                                        char** report);

/* Closed-loop verification of P || R || S1 || ... || Sn. Each supervisor
 * text is a model whose plant blocks are taken as supervisors. all_ok is 1
 * iff safety, controllability, nonblockingness and nonconflict hold. */
DCS_API dcs_status dcs_verify(const dcs_problem* problem, const char* const* supervisor_texts,
                              size_t count, const dcs_options* options, dcs_format format,
                              int* all_ok, char** report);

/* Random instance as model text. kind: "cnms", "acyclic", "cyclic" or
 * "small". */
DCS_API dcs_status dcs_generate(const char* kind, uint64_t seed, size_t plants,
                                size_t requirements, char** text);

#ifdef __cplusplus
}
#endif

#endif
