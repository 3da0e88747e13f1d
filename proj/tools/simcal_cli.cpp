// Command-line front end for the calibration workbench. Talks to the
// engine exclusively through the public C API in simcal.h.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "simcal.h"

namespace {

struct WorkbenchDeleter {
    void operator()(simcal_workbench* wb) const { simcal_workbench_free(wb); }
};
using WorkbenchPtr = std::unique_ptr<simcal_workbench, WorkbenchDeleter>;

struct CommonOpts {
    std::string config;
    std::string observed;
    std::string out = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    int repetitions = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool wants_observed) {
    cmd->add_option("--config", opts.config, "experiment config file (JSON)");
    if (wants_observed) {
        cmd->add_option("--observed", opts.observed, "observed indicator data (CSV)");
    }
    cmd->add_option("--out", opts.out, "output directory")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "master seed (overrides config)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--threads", opts.threads, "worker threads (default: all cores)");
    cmd->add_option("--repetitions", opts.repetitions,
                    "simulation repetitions per evaluation (overrides config)");
}

int fail(simcal_workbench* wb, simcal_status status, const char* what) {
    std::fprintf(stderr, "simcal: %s failed: %s", what, simcal_status_name(status));
    if (wb && simcal_last_error(wb)[0] != '\0') {
        std::fprintf(stderr, " (%s)", simcal_last_error(wb));
    }
    std::fprintf(stderr, "\n");
    return 1;
}

// Builds the workbench and applies the shared flags. Returns nullptr after
// printing a diagnostic.
WorkbenchPtr make_workbench(const CommonOpts& opts, bool selfcheck_profile) {
    simcal_workbench* raw = nullptr;
    simcal_status status;
    if (!opts.config.empty()) {
        status = simcal_workbench_new(opts.config.c_str(), &raw);
    } else if (selfcheck_profile) {
        status = simcal_workbench_new_selfcheck(&raw);
    } else {
        status = simcal_workbench_new(nullptr, &raw);
    }
    if (status != SIMCAL_OK) {
        std::fprintf(stderr, "simcal: cannot load config '%s': %s\n", opts.config.c_str(),
                     simcal_status_name(status));
        return nullptr;
    }
    WorkbenchPtr wb(raw);

    if (opts.seed_set && (status = simcal_set_seed(wb.get(), opts.seed)) != SIMCAL_OK) {
        fail(wb.get(), status, "set seed");
        return nullptr;
    }
    if (opts.threads > 0 && (status = simcal_set_threads(wb.get(), opts.threads)) != SIMCAL_OK) {
        fail(wb.get(), status, "set threads");
        return nullptr;
    }
    if (opts.repetitions > 0 &&
        (status = simcal_set_repetitions(wb.get(), opts.repetitions)) != SIMCAL_OK) {
        fail(wb.get(), status, "set repetitions");
        return nullptr;
    }
    if (!opts.observed.empty() &&
        (status = simcal_load_observed(wb.get(), opts.observed.c_str())) != SIMCAL_OK) {
        fail(wb.get(), status, "load observed data");
        return nullptr;
    }
    return wb;
}

const char* stop_name(int code) {
    return code == SIMCAL_STOP_PLATEAU ? "plateau" : "max_generations";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simcal — genetic-algorithm calibration workbench for a demographic "
                 "micro-simulation"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* calibrate = app.add_subcommand("calibrate", "fit parameters to observed data");
    add_common(calibrate, opts, true);

    auto* simulate = app.add_subcommand("simulate", "run repeated simulations at fixed parameters");
    add_common(simulate, opts, false);
    std::string params_file;
    int sim_repetitions = 5;
    simulate->add_option("--params", params_file, "parameter values (name,value CSV)")->required();
    simulate->add_option("--repetitions", sim_repetitions, "number of repetitions")
        ->capture_default_str();

    auto* sensitivity = app.add_subcommand("sensitivity", "uniform-sampling sensitivity analysis");
    add_common(sensitivity, opts, true);
    int samples = 500;
    sensitivity->add_option("--samples", samples, "number of sampled chromosomes")
        ->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "recompute the analysis from samples.csv");
    add_common(analyze, opts, false);
    std::string samples_csv;
    analyze->add_option("--samples-csv", samples_csv, "existing samples.csv")->required();

    auto* selfcheck = app.add_subcommand("selfcheck", "recover a hidden parameter set end to end");
    add_common(selfcheck, opts, false);
    int max_gens = 0, plateau = 0;
    selfcheck->add_option("--max-gens", max_gens, "generation cap");
    selfcheck->add_option("--plateau", plateau, "plateau termination window");

    CLI11_PARSE(app, argc, argv);

    if (calibrate->parsed()) {
        if (opts.observed.empty()) {
            std::fprintf(stderr, "simcal: calibrate requires --observed\n");
            return 1;
        }
        WorkbenchPtr wb = make_workbench(opts, false);
        if (!wb) return 1;
        simcal_calibrate_report report{};
        const simcal_status status = simcal_calibrate(wb.get(), opts.out.c_str(), &report);
        if (status != SIMCAL_OK) return fail(wb.get(), status, "calibrate");
        std::printf("calibrate: best fitness %.6g after %d generations (%s)\n",
                    report.best_fitness, report.generations, stop_name(report.stop_reason));
        std::printf("  evaluations %llu, cache hits %llu, simulations %llu, %.1f s\n",
                    static_cast<unsigned long long>(report.evaluations),
                    static_cast<unsigned long long>(report.cache_hits),
                    static_cast<unsigned long long>(report.simulations), report.wall_seconds);
        std::printf("  wrote %s/trajectory.csv, best_params.csv, summary.txt\n",
                    opts.out.c_str());
        return 0;
    }

    if (simulate->parsed()) {
        WorkbenchPtr wb = make_workbench(opts, false);
        if (!wb) return 1;
        const simcal_status status =
            simcal_simulate(wb.get(), params_file.c_str(), sim_repetitions, opts.out.c_str());
        if (status != SIMCAL_OK) return fail(wb.get(), status, "simulate");
        std::printf("simulate: %d repetitions written to %s\n", sim_repetitions,
                    opts.out.c_str());
        return 0;
    }

    if (sensitivity->parsed()) {
        if (opts.observed.empty()) {
            std::fprintf(stderr, "simcal: sensitivity requires --observed\n");
            return 1;
        }
        WorkbenchPtr wb = make_workbench(opts, false);
        if (!wb) return 1;
        const simcal_status status = simcal_sensitivity(wb.get(), samples, opts.out.c_str());
        if (status != SIMCAL_OK) return fail(wb.get(), status, "sensitivity");
        std::printf("sensitivity: %d samples written to %s (samples.csv, analysis.csv)\n",
                    samples, opts.out.c_str());
        return 0;
    }

    if (analyze->parsed()) {
        WorkbenchPtr wb = make_workbench(opts, false);
        if (!wb) return 1;
        const simcal_status status =
            simcal_analyze(wb.get(), samples_csv.c_str(), opts.out.c_str());
        if (status != SIMCAL_OK) return fail(wb.get(), status, "analyze");
        std::printf("analyze: wrote %s/analysis.csv\n", opts.out.c_str());
        return 0;
    }

    // selfcheck
    WorkbenchPtr wb = make_workbench(opts, true);
    if (!wb) return 1;
    simcal_status status;
    if (max_gens > 0 && (status = simcal_set_max_generations(wb.get(), max_gens)) != SIMCAL_OK) {
        return fail(wb.get(), status, "set max generations");
    }
    if (plateau > 0 &&
        (status = simcal_set_plateau_generations(wb.get(), plateau)) != SIMCAL_OK) {
        return fail(wb.get(), status, "set plateau");
    }
    simcal_selfcheck_report report{};
    status = simcal_selfcheck(wb.get(), opts.out.c_str(), &report);
    if (status != SIMCAL_OK) return fail(wb.get(), status, "selfcheck");
    std::printf("selfcheck: %s — final best %.6g vs initial median %.6g (ratio %.4f, "
                "threshold %.2f)\n",
                report.passed ? "PASS" : "FAIL", report.final_best, report.initial_median,
                report.ratio, report.threshold);
    std::printf("  %d generations (%s); report in %s/selfcheck_report.txt\n", report.generations,
                stop_name(report.stop_reason), opts.out.c_str());
    return report.passed ? 0 : 2;
}
