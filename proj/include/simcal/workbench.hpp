#pragma once

#include <optional>
#include <string>

#include "simcal/config.hpp"
#include "simcal/csv_io.hpp"
#include "simcal/fitness.hpp"
#include "simcal/ga.hpp"
#include "simcal/stats.hpp"

namespace simcal {

int default_thread_count();

/// A loaded experiment: configuration, optional observed data, runtime knobs.
struct Workbench {
    WorkbenchConfig config;
    std::optional<IndicatorSeries> observed;
    int threads = default_thread_count();

    void load_observed(const std::string& csv_path);
};

// Smaller GA profile used by the self-check harness: population 30, at most
// 150 generations, plateau 60, 3 repetitions per evaluation.
WorkbenchConfig selfcheck_defaults();

struct CalibrateSummary {
    CalibrationResult result;
    EvaluatorStats stats;
    double wall_seconds = 0.0;
};

// Full calibration; writes trajectory.csv, best_params.csv and summary.txt
// into out_dir.
CalibrateSummary cmd_calibrate(Workbench& wb, const std::string& out_dir);

// Fixed-parameter simulation study; writes indicators_rep<k>.csv for each
// repetition and their entrywise mean as indicators_mean.csv.
void cmd_simulate(Workbench& wb, const std::string& params_csv, int repetitions,
                  const std::string& out_dir);

struct SensitivitySummary {
    CorrelationReport correlation;
    RegressionReport regression;
    std::size_t rows = 0;
};

// Uniform-sampling sensitivity study; writes samples.csv, analysis.csv and
// analysis.txt into out_dir.
SensitivitySummary cmd_sensitivity(Workbench& wb, int n, const std::string& out_dir);

// Re-run the correlation/regression analysis on an existing samples.csv.
SensitivitySummary cmd_analyze(const ParameterSpace& space, const std::string& samples_csv,
                               const std::string& out_dir);

struct SelfcheckReport {
    Chromosome hidden;
    Chromosome recovered;
    double initial_median = 0.0;
    double final_best = 0.0;
    double ratio = 0.0;     // final_best / initial_median
    double threshold = 0.1; // pass when ratio <= threshold
    bool passed = false;
    int generations = 0;
    StopReason stop_reason = StopReason::max_generations;
    EvaluatorStats stats;
};

// End-to-end recovery check: samples a hidden chromosome, builds synthetic
// observed data as the average of five seeded runs at it, calibrates
// against that data, and passes when the final best fitness falls to 10%
// of the initial generation's median. Writes selfcheck_report.txt and
// trajectory.csv into out_dir.
SelfcheckReport cmd_selfcheck(Workbench& wb, const std::string& out_dir);

} // namespace simcal
