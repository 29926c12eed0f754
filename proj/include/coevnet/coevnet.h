/* C interface to the coevnet simulator. */
#ifndef COEVNET_H
#define COEVNET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define COEVNET_API __attribute__((visibility("default")))
#else
#define COEVNET_API
#endif

typedef enum coevnet_status {
    COEVNET_OK = 0,
    COEVNET_ERR_CONFIG = 1,   /* invalid config, spec or manifest */
    COEVNET_ERR_IO = 2,       /* file system failure */
    COEVNET_ERR_STATE = 3,    /* operation not valid in the current state */
    COEVNET_ERR_ARG = 4,      /* null pointer or index out of range */
    COEVNET_ERR_INTERNAL = 5
} coevnet_status;

typedef struct coevnet_sim coevnet_sim;

/* Message for the last failing call on this thread; never NULL. */
COEVNET_API const char* coevnet_last_error(void);
COEVNET_API const char* coevnet_version(void);

/* Strings returned through `char** out` are owned by the caller. */
COEVNET_API void coevnet_string_free(char* s);

/* ---- single simulation ---- */

COEVNET_API coevnet_status coevnet_sim_create(const char* config_json, coevnet_sim** out);
COEVNET_API coevnet_status coevnet_sim_create_from_file(const char* path, coevnet_sim** out);
COEVNET_API void coevnet_sim_destroy(coevnet_sim* sim);

/* Advances one step. COEVNET_ERR_STATE once the configured steps are done. */
COEVNET_API coevnet_status coevnet_sim_step(coevnet_sim* sim);
/* Runs the remaining steps. */
COEVNET_API coevnet_status coevnet_sim_run(coevnet_sim* sim);

COEVNET_API coevnet_status coevnet_sim_time(const coevnet_sim* sim, size_t* out);
COEVNET_API coevnet_status coevnet_sim_node_count(const coevnet_sim* sim, size_t* out);
COEVNET_API coevnet_status coevnet_sim_edge_count(const coevnet_sim* sim, size_t* out);
COEVNET_API coevnet_status coevnet_sim_topic_count(const coevnet_sim* sim, size_t* out);
COEVNET_API coevnet_status coevnet_sim_density(const coevnet_sim* sim, double* out);
COEVNET_API coevnet_status coevnet_sim_has_edge(const coevnet_sim* sim, size_t i, size_t j, int* out);
/* Opinion of agent i on topic k, -1 or +1. */
COEVNET_API coevnet_status coevnet_sim_opinion(const coevnet_sim* sim, size_t i, size_t k, int* out);
/* 0 = hom, 1 = het, 2 = adv. */
COEVNET_API coevnet_status coevnet_sim_archetype(const coevnet_sim* sim, size_t i, int* out);

COEVNET_API coevnet_status coevnet_sim_dot(const coevnet_sim* sim, char** out);
COEVNET_API coevnet_status coevnet_sim_edge_list(const coevnet_sim* sim, char** out);
/* Metrics table over the steps taken so far. */
COEVNET_API coevnet_status coevnet_sim_metrics_csv(const coevnet_sim* sim, char** out);
COEVNET_API coevnet_status coevnet_sim_trajectory_csv(const coevnet_sim* sim, char** out);
COEVNET_API coevnet_status coevnet_sim_summary_json(const coevnet_sim* sim, char** out);

/* ---- batch experiments ----
 * On success `manifest_path` (optional) receives the path of manifest.json. */

/* Runs `replicas` seeds (seed, seed+1, ...) of one config. A NULL seed
 * keeps the seed from the config. */
COEVNET_API coevnet_status coevnet_run_config(const char* config_path, int64_t replicas,
                                              const uint64_t* seed, const char* out_dir,
                                              unsigned workers, char** manifest_path);
/* suite: verification, composition, density or resistance. */
COEVNET_API coevnet_status coevnet_run_suite(const char* suite, int64_t replicas, uint64_t seed,
                                             const char* out_dir, unsigned workers,
                                             char** manifest_path);
COEVNET_API coevnet_status coevnet_summarize(const char* manifest_path, char** summary_json);

/* Brute-force equivalence checks; `report` gets a JSON array of results.
 * Returns COEVNET_OK even when a check fails; inspect `all_passed`. */
COEVNET_API coevnet_status coevnet_oracle_check(uint64_t seed, int* all_passed, char** report);

#ifdef __cplusplus
}
#endif

#endif
