#include "simcal/workbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "simcal/error.hpp"
#include "simcal/microsim.hpp"

namespace simcal {

namespace {

namespace fs = std::filesystem;

// Sub-stream tags so the hidden chromosome and the synthetic observed data
// never share a generator with the evaluation repetitions.
constexpr std::uint64_t kHiddenChromosomeStream = 101;
constexpr std::uint64_t kObservedDataStream = 202;

std::string ensure_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::io, "cannot create output directory '" + out_dir + "'");
    return out_dir;
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

IndicatorSeries average_of_runs(const SimConfig& cfg, const ParameterSpace& space,
                                const Chromosome& c, std::uint64_t seed_base, int repetitions) {
    std::vector<IndicatorSeries> runs;
    runs.reserve(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r) {
        Rng rng(derive_seed(seed_base, static_cast<std::uint64_t>(r)));
        runs.push_back(run_simulation(cfg, space, c, rng));
    }
    return mean_series(runs);
}

void write_summary(const std::string& path, const CalibrateSummary& summary) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot open '" + path + "' for writing");
    const auto& r = summary.result;
    out << "command: calibrate\n";
    out << "stop_reason: " << stop_reason_name(r.stop_reason) << '\n';
    out << "generations: " << r.generations_run << '\n';
    out << "best_fitness: " << format_double(r.best_fitness.f) << '\n';
    out << "pairs_used: " << r.best_fitness.pairs_used << '\n';
    out << "pairs_skipped: " << r.best_fitness.pairs_skipped << '\n';
    out << "evaluations: " << summary.stats.evaluations << '\n';
    out << "cache_hits: " << summary.stats.cache_hits << '\n';
    out << "cache_misses: " << summary.stats.cache_misses << '\n';
    out << "simulations: " << summary.stats.simulations << '\n';
    out << "wall_seconds: " << format_double(summary.wall_seconds) << '\n';
}

} // namespace

int default_thread_count() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void Workbench::load_observed(const std::string& csv_path) {
    observed = load_indicator_csv(csv_path);
    if (observed->empty()) {
        throw Error(Errc::invalid_argument, "observed data file '" + csv_path + "' has no rows");
    }
}

WorkbenchConfig selfcheck_defaults() {
    WorkbenchConfig cfg;
    cfg.ga.population_size = 30;
    cfg.ga.max_generations = 150;
    cfg.ga.plateau_generations = 60;
    cfg.ga.repetitions = 3;
    return cfg;
}

CalibrateSummary cmd_calibrate(Workbench& wb, const std::string& out_dir) {
    if (!wb.observed) throw Error(Errc::invalid_argument, "no observed data loaded");
    ensure_dir(out_dir);
    const auto start = std::chrono::steady_clock::now();

    SimulationEvaluator evaluator = SimulationEvaluator::for_microsim(
        wb.config.sim, wb.config.space, *wb.observed, wb.config.ga.repetitions, wb.threads);
    CalibrateSummary summary;
    summary.result = run_ga(wb.config.space, wb.config.ga, evaluator);
    summary.stats = evaluator.stats();
    summary.wall_seconds = elapsed_seconds(start);

    write_trajectory_csv(join(out_dir, "trajectory.csv"), summary.result.trajectory);
    write_params_csv(join(out_dir, "best_params.csv"), wb.config.space,
                     summary.result.best_chromosome);
    write_summary(join(out_dir, "summary.txt"), summary);
    return summary;
}

void cmd_simulate(Workbench& wb, const std::string& params_csv, int repetitions,
                  const std::string& out_dir) {
    if (repetitions < 1) throw Error(Errc::invalid_argument, "repetitions must be >= 1");
    const Chromosome params = load_params_csv(params_csv, wb.config.space);
    ensure_dir(out_dir);

    std::vector<IndicatorSeries> runs;
    runs.reserve(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r) {
        Rng rng(derive_seed(wb.config.sim.repetition_seed_base, static_cast<std::uint64_t>(r)));
        runs.push_back(run_simulation(wb.config.sim, wb.config.space, params, rng));
        write_indicator_csv(join(out_dir, "indicators_rep" + std::to_string(r + 1) + ".csv"),
                            runs.back());
    }
    write_indicator_csv(join(out_dir, "indicators_mean.csv"), mean_series(runs));
}

SensitivitySummary cmd_sensitivity(Workbench& wb, int n, const std::string& out_dir) {
    if (!wb.observed) throw Error(Errc::invalid_argument, "no observed data loaded");
    if (n < 2) throw Error(Errc::invalid_argument, "sensitivity needs at least 2 samples");
    ensure_dir(out_dir);

    SimulationEvaluator evaluator = SimulationEvaluator::for_microsim(
        wb.config.sim, wb.config.space, *wb.observed, wb.config.ga.repetitions, wb.threads);
    Rng rng(wb.config.ga.master_seed);
    const SampleMatrix samples = run_sampling(wb.config.space, evaluator, n, rng);
    write_samples_csv(join(out_dir, "samples.csv"), samples);

    SensitivitySummary summary;
    summary.rows = samples.rows();
    summary.correlation = correlation_report(samples);
    summary.regression = ols_fit(samples);
    write_analysis_csv(join(out_dir, "analysis.csv"), summary.correlation, summary.regression);
    write_analysis_txt(join(out_dir, "analysis.txt"), summary.correlation, summary.regression);
    return summary;
}

SensitivitySummary cmd_analyze(const ParameterSpace& space, const std::string& samples_csv,
                               const std::string& out_dir) {
    const SampleMatrix samples = load_samples_csv(samples_csv, space);
    if (samples.rows() < 2) {
        throw Error(Errc::invalid_argument, "'" + samples_csv + "' has fewer than 2 rows");
    }
    ensure_dir(out_dir);

    SensitivitySummary summary;
    summary.rows = samples.rows();
    summary.correlation = correlation_report(samples);
    summary.regression = ols_fit(samples);
    write_analysis_csv(join(out_dir, "analysis.csv"), summary.correlation, summary.regression);
    write_analysis_txt(join(out_dir, "analysis.txt"), summary.correlation, summary.regression);
    return summary;
}

SelfcheckReport cmd_selfcheck(Workbench& wb, const std::string& out_dir) {
    ensure_dir(out_dir);
    const auto& space = wb.config.space;
    const auto master = wb.config.ga.master_seed;

    SelfcheckReport report;

    Rng hidden_rng(derive_seed(master, kHiddenChromosomeStream));
    report.hidden = sample_uniform(space, hidden_rng);

    // Synthetic "observed" data: average of 5 seeded runs at the hidden
    // chromosome, on a seed stream independent of the evaluation seeds.
    const IndicatorSeries observed = average_of_runs(
        wb.config.sim, space, report.hidden, derive_seed(master, kObservedDataStream), 5);

    SimulationEvaluator evaluator = SimulationEvaluator::for_microsim(
        wb.config.sim, space, observed, wb.config.ga.repetitions, wb.threads);

    // The GA draws its initial population from a fresh generator seeded
    // with the master seed, so this reproduces generation 1 exactly; the
    // shared cache means no simulation runs twice.
    Rng init_rng(master);
    std::vector<double> initial;
    for (const auto& c : init_population(space, wb.config.ga.population_size, init_rng)) {
        initial.push_back(evaluator.evaluate(c).f);
    }
    std::sort(initial.begin(), initial.end());
    const std::size_t mid = initial.size() / 2;
    report.initial_median = initial.size() % 2 == 1
                                ? initial[mid]
                                : 0.5 * (initial[mid - 1] + initial[mid]);

    const CalibrationResult result = run_ga(space, wb.config.ga, evaluator);
    report.recovered = result.best_chromosome;
    report.final_best = result.best_fitness.f;
    report.ratio = report.initial_median > 0.0 ? report.final_best / report.initial_median : 0.0;
    report.passed = report.ratio <= report.threshold;
    report.generations = result.generations_run;
    report.stop_reason = result.stop_reason;
    report.stats = evaluator.stats();

    write_trajectory_csv(join(out_dir, "trajectory.csv"), result.trajectory);
    write_params_csv(join(out_dir, "recovered_params.csv"), space, report.recovered);

    std::ofstream out(join(out_dir, "selfcheck_report.txt"));
    if (!out) throw Error(Errc::io, "cannot write selfcheck report");
    out << "selfcheck: " << (report.passed ? "PASS" : "FAIL") << '\n';
    out << "initial_median_fitness: " << format_double(report.initial_median) << '\n';
    out << "final_best_fitness: " << format_double(report.final_best) << '\n';
    out << "ratio: " << format_double(report.ratio) << '\n';
    out << "threshold: " << format_double(report.threshold) << '\n';
    out << "generations: " << report.generations << '\n';
    out << "stop_reason: " << stop_reason_name(report.stop_reason) << '\n';
    out << "simulations: " << report.stats.simulations << '\n';
    out << '\n';
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-28s %16s %16s %12s\n", "parameter", "hidden", "recovered",
                  "abs_error");
    out << buf;
    for (std::size_t i = 0; i < space.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%-28s %16.6g %16.6g %12.6g\n", space[i].name.c_str(),
                      report.hidden.values[i], report.recovered.values[i],
                      std::fabs(report.hidden.values[i] - report.recovered.values[i]));
        out << buf;
    }
    return report;
}

} // namespace simcal
