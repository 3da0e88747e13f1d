#include "simcal.h"

#include <algorithm>
#include <string>

#include "simcal/error.hpp"
#include "simcal/workbench.hpp"

// Opaque handle: the workbench plus the last error message.
struct simcal_workbench {
    simcal::Workbench wb;
    std::string last_error;
};

namespace {

simcal_status status_of(simcal::Errc code) {
    switch (code) {
        case simcal::Errc::invalid_argument: return SIMCAL_ERR_INVALID_ARGUMENT;
        case simcal::Errc::io: return SIMCAL_ERR_IO;
        case simcal::Errc::parse: return SIMCAL_ERR_PARSE;
        case simcal::Errc::no_overlap: return SIMCAL_ERR_NO_OVERLAP;
        case simcal::Errc::degenerate_data: return SIMCAL_ERR_DEGENERATE_DATA;
        case simcal::Errc::internal: return SIMCAL_ERR_INTERNAL;
    }
    return SIMCAL_ERR_INTERNAL;
}

template <typename Fn>
simcal_status guarded(simcal_workbench* wb, Fn&& fn) {
    if (!wb) return SIMCAL_ERR_INVALID_ARGUMENT;
    try {
        fn();
        wb->last_error.clear();
        return SIMCAL_OK;
    } catch (const simcal::Error& e) {
        wb->last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        wb->last_error = e.what();
        return SIMCAL_ERR_INTERNAL;
    }
}

int stop_code(simcal::StopReason reason) {
    return reason == simcal::StopReason::plateau ? SIMCAL_STOP_PLATEAU
                                                 : SIMCAL_STOP_MAX_GENERATIONS;
}

} // namespace

extern "C" {

const char* simcal_version(void) { return "1.0.0"; }

const char* simcal_status_name(simcal_status status) {
    switch (status) {
        case SIMCAL_OK: return "ok";
        case SIMCAL_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SIMCAL_ERR_IO: return "i/o error";
        case SIMCAL_ERR_PARSE: return "parse error";
        case SIMCAL_ERR_NO_OVERLAP: return "no overlap between observed and simulated data";
        case SIMCAL_ERR_DEGENERATE_DATA: return "degenerate data";
        case SIMCAL_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

simcal_status simcal_workbench_new(const char* config_path, simcal_workbench** out) {
    if (!out) return SIMCAL_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    auto* wb = new simcal_workbench();
    const simcal_status status = guarded(wb, [&] {
        if (config_path) wb->wb.config = simcal::load_config(config_path);
    });
    if (status != SIMCAL_OK) {
        delete wb;
        return status;
    }
    *out = wb;
    return SIMCAL_OK;
}

simcal_status simcal_workbench_new_selfcheck(simcal_workbench** out) {
    if (!out) return SIMCAL_ERR_INVALID_ARGUMENT;
    auto* wb = new simcal_workbench();
    wb->wb.config = simcal::selfcheck_defaults();
    *out = wb;
    return SIMCAL_OK;
}

void simcal_workbench_free(simcal_workbench* wb) { delete wb; }

const char* simcal_last_error(const simcal_workbench* wb) {
    return wb ? wb->last_error.c_str() : "null workbench handle";
}

simcal_status simcal_load_observed(simcal_workbench* wb, const char* csv_path) {
    return guarded(wb, [&] {
        if (!csv_path) throw simcal::Error(simcal::Errc::invalid_argument, "csv_path is null");
        wb->wb.load_observed(csv_path);
    });
}

simcal_status simcal_set_seed(simcal_workbench* wb, uint64_t seed) {
    return guarded(wb, [&] {
        wb->wb.config.ga.master_seed = seed;
        wb->wb.config.sim.repetition_seed_base = seed;
    });
}

simcal_status simcal_set_threads(simcal_workbench* wb, int threads) {
    return guarded(wb, [&] {
        if (threads < 1) {
            throw simcal::Error(simcal::Errc::invalid_argument, "threads must be >= 1");
        }
        wb->wb.threads = threads;
    });
}

simcal_status simcal_set_repetitions(simcal_workbench* wb, int repetitions) {
    return guarded(wb, [&] {
        if (repetitions < 1) {
            throw simcal::Error(simcal::Errc::invalid_argument, "repetitions must be >= 1");
        }
        wb->wb.config.ga.repetitions = repetitions;
    });
}

simcal_status simcal_set_max_generations(simcal_workbench* wb, int generations) {
    return guarded(wb, [&] {
        if (generations < 1) {
            throw simcal::Error(simcal::Errc::invalid_argument, "max generations must be >= 1");
        }
        wb->wb.config.ga.max_generations = generations;
        wb->wb.config.ga.plateau_generations =
            std::min(wb->wb.config.ga.plateau_generations, generations);
    });
}

simcal_status simcal_set_plateau_generations(simcal_workbench* wb, int generations) {
    return guarded(wb, [&] {
        if (generations < 1 || generations > wb->wb.config.ga.max_generations) {
            throw simcal::Error(simcal::Errc::invalid_argument,
                                "plateau generations must be in [1, max_generations]");
        }
        wb->wb.config.ga.plateau_generations = generations;
    });
}

simcal_status simcal_calibrate(simcal_workbench* wb, const char* out_dir,
                               simcal_calibrate_report* report) {
    return guarded(wb, [&] {
        if (!out_dir) throw simcal::Error(simcal::Errc::invalid_argument, "out_dir is null");
        const simcal::CalibrateSummary summary = simcal::cmd_calibrate(wb->wb, out_dir);
        if (report) {
            report->best_fitness = summary.result.best_fitness.f;
            report->generations = summary.result.generations_run;
            report->stop_reason = stop_code(summary.result.stop_reason);
            report->evaluations = summary.stats.evaluations;
            report->cache_hits = summary.stats.cache_hits;
            report->cache_misses = summary.stats.cache_misses;
            report->simulations = summary.stats.simulations;
            report->wall_seconds = summary.wall_seconds;
        }
    });
}

simcal_status simcal_simulate(simcal_workbench* wb, const char* params_csv, int repetitions,
                              const char* out_dir) {
    return guarded(wb, [&] {
        if (!params_csv || !out_dir) {
            throw simcal::Error(simcal::Errc::invalid_argument, "params_csv/out_dir is null");
        }
        simcal::cmd_simulate(wb->wb, params_csv, repetitions, out_dir);
    });
}

simcal_status simcal_sensitivity(simcal_workbench* wb, int samples, const char* out_dir) {
    return guarded(wb, [&] {
        if (!out_dir) throw simcal::Error(simcal::Errc::invalid_argument, "out_dir is null");
        simcal::cmd_sensitivity(wb->wb, samples, out_dir);
    });
}

simcal_status simcal_analyze(simcal_workbench* wb, const char* samples_csv, const char* out_dir) {
    return guarded(wb, [&] {
        if (!samples_csv || !out_dir) {
            throw simcal::Error(simcal::Errc::invalid_argument, "samples_csv/out_dir is null");
        }
        simcal::cmd_analyze(wb->wb.config.space, samples_csv, out_dir);
    });
}

simcal_status simcal_selfcheck(simcal_workbench* wb, const char* out_dir,
                               simcal_selfcheck_report* report) {
    return guarded(wb, [&] {
        if (!out_dir) throw simcal::Error(simcal::Errc::invalid_argument, "out_dir is null");
        const simcal::SelfcheckReport r = simcal::cmd_selfcheck(wb->wb, out_dir);
        if (report) {
            report->initial_median = r.initial_median;
            report->final_best = r.final_best;
            report->ratio = r.ratio;
            report->threshold = r.threshold;
            report->passed = r.passed ? 1 : 0;
            report->generations = r.generations;
            report->stop_reason = stop_code(r.stop_reason);
        }
    });
}

} // extern "C"
