#ifndef SCHEDLIFT_CAPI_H
#define SCHEDLIFT_CAPI_H

/* C interface to the scheduling toolkit. All functions are thread-safe as
 * long as each sl_instance is used from one thread at a time. Textual
 * results are heap-allocated JSON documents; release them with
 * sl_string_free. On failure the out-parameters are left untouched and
 * sl_last_error() describes the problem. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl_status {
  SL_OK = 0,
  SL_ERR_ARGUMENT = 1, /* rejected flag or parameter value */
  SL_ERR_PARSE = 2,    /* malformed instance text */
  SL_ERR_DOMAIN = 3,   /* solver or invariant failure */
  SL_ERR_LIMIT = 4,    /* size guard tripped (oracle cap, lift cap) */
  SL_ERR_INTERNAL = 5
} sl_status;

typedef struct sl_instance sl_instance;

/* Bumped whenever the signatures or the JSON schema change. */
int32_t sl_abi_version(void);

/* Thread-local message of the most recent failure on this thread; the
 * empty string when every call so far succeeded. Valid until the next
 * failing call on the same thread. */
const char* sl_last_error(void);

/* Accepts both the line format ("p sched n m" plus "e u v" records) and
 * the JSON object {"n", "m", "prec"}. */
sl_status sl_instance_parse(const char* text, sl_instance** out);

/* kind: "gnp" (param = edge probability such as "1/3"), "chain" (param
 * ignored) or "layered" (param = layer count). */
sl_status sl_instance_generate(const char* kind, int32_t n, int32_t m,
                               const char* param, uint64_t seed,
                               sl_instance** out);

void sl_instance_free(sl_instance* inst);

/* as_json nonzero yields the JSON object, zero the line format. */
sl_status sl_instance_serialize(const sl_instance* inst, int32_t as_json,
                                char** out);

int32_t sl_instance_jobs(const sl_instance* inst);
int32_t sl_instance_machines(const sl_instance* inst);

/* Solver entry points; each writes a JSON document. */
sl_status sl_run_exact(const sl_instance* inst, char** out);
sl_status sl_run_list(const sl_instance* inst, char** out);
sl_status sl_run_lp(const sl_instance* inst, char** out);
sl_status sl_run_sa(const sl_instance* inst, int32_t rounds, char** out);

typedef struct sl_qptas_options {
  const char* eps;   /* rational text; NULL means "1/2" */
  const char* delta; /* rational text; NULL means "1/4" */
  int32_t paper_mode; /* nonzero: derive k, C, R, delta from eps, m, n */
  int32_t k;
  int32_t C;
  int32_t R;
  int32_t base_threshold;
  int32_t budget;
  int32_t T;     /* 0 = exact optimum when small, relaxation minimum else */
  uint64_t seed;
  int32_t atoms; /* schedules seeding the start mixture */
} sl_qptas_options;

/* Fills the desk-regime defaults. */
void sl_qptas_options_init(sl_qptas_options* opt);

sl_status sl_run_qptas(const sl_instance* inst, const sl_qptas_options* opt,
                       char** out);
sl_status sl_run_compare(const sl_instance* inst, const sl_qptas_options* opt,
                         char** out);

sl_status sl_gap_search(int32_t m, int32_t n_max, int32_t trials,
                        uint64_t seed, int32_t sa_rounds, char** out);

void sl_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* SCHEDLIFT_CAPI_H */
