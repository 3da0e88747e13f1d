/*
 * simcal — C API for the micro-simulation calibration workbench.
 *
 * All functionality is reached through an opaque workbench handle. Every
 * call returns a status code; on failure, simcal_last_error() holds a
 * human-readable message until the next call on the same handle.
 * Handles are not thread-safe; use one handle per thread.
 */
#ifndef SIMCAL_H
#define SIMCAL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SIMCAL_API __declspec(dllexport)
#else
#define SIMCAL_API __attribute__((visibility("default")))
#endif

typedef enum simcal_status {
    SIMCAL_OK = 0,
    SIMCAL_ERR_INVALID_ARGUMENT = 1,
    SIMCAL_ERR_IO = 2,
    SIMCAL_ERR_PARSE = 3,
    SIMCAL_ERR_NO_OVERLAP = 4,      /* observed and simulated data share no cells */
    SIMCAL_ERR_DEGENERATE_DATA = 5, /* constant column, all-zero observed, rank deficiency */
    SIMCAL_ERR_INTERNAL = 6
} simcal_status;

/* Stop reasons reported by calibrate/selfcheck. */
#define SIMCAL_STOP_MAX_GENERATIONS 0
#define SIMCAL_STOP_PLATEAU 1

typedef struct simcal_workbench simcal_workbench;

SIMCAL_API const char* simcal_version(void);
SIMCAL_API const char* simcal_status_name(simcal_status status);

/* config_path may be NULL for built-in defaults. */
SIMCAL_API simcal_status simcal_workbench_new(const char* config_path, simcal_workbench** out);
/* Defaults tuned for the self-check harness (small GA profile). */
SIMCAL_API simcal_status simcal_workbench_new_selfcheck(simcal_workbench** out);
SIMCAL_API void simcal_workbench_free(simcal_workbench* wb);

/* Message for the most recent failure on this handle; never NULL. */
SIMCAL_API const char* simcal_last_error(const simcal_workbench* wb);

SIMCAL_API simcal_status simcal_load_observed(simcal_workbench* wb, const char* csv_path);
SIMCAL_API simcal_status simcal_set_seed(simcal_workbench* wb, uint64_t seed);
SIMCAL_API simcal_status simcal_set_threads(simcal_workbench* wb, int threads);
SIMCAL_API simcal_status simcal_set_repetitions(simcal_workbench* wb, int repetitions);
SIMCAL_API simcal_status simcal_set_max_generations(simcal_workbench* wb, int generations);
SIMCAL_API simcal_status simcal_set_plateau_generations(simcal_workbench* wb, int generations);

typedef struct simcal_calibrate_report {
    double best_fitness;
    int generations;
    int stop_reason;
    uint64_t evaluations;
    uint64_t cache_hits;
    uint64_t cache_misses;
    uint64_t simulations;
    double wall_seconds;
} simcal_calibrate_report;

/* Writes trajectory.csv, best_params.csv and summary.txt into out_dir. */
SIMCAL_API simcal_status simcal_calibrate(simcal_workbench* wb, const char* out_dir,
                                          simcal_calibrate_report* report);

/* Writes indicators_rep<k>.csv and indicators_mean.csv into out_dir. */
SIMCAL_API simcal_status simcal_simulate(simcal_workbench* wb, const char* params_csv,
                                         int repetitions, const char* out_dir);

/* Writes samples.csv, analysis.csv and analysis.txt into out_dir. */
SIMCAL_API simcal_status simcal_sensitivity(simcal_workbench* wb, int samples,
                                            const char* out_dir);

/* Re-runs the analysis on an existing samples.csv. */
SIMCAL_API simcal_status simcal_analyze(simcal_workbench* wb, const char* samples_csv,
                                        const char* out_dir);

typedef struct simcal_selfcheck_report {
    double initial_median;
    double final_best;
    double ratio;
    double threshold;
    int passed;
    int generations;
    int stop_reason;
} simcal_selfcheck_report;

/* Writes selfcheck_report.txt, trajectory.csv and recovered_params.csv. */
SIMCAL_API simcal_status simcal_selfcheck(simcal_workbench* wb, const char* out_dir,
                                          simcal_selfcheck_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SIMCAL_H */
