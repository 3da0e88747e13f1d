#pragma once

#include <string>
#include <vector>

#include "simcal/ga.hpp"
#include "simcal/indicators.hpp"
#include "simcal/param_space.hpp"
#include "simcal/stats.hpp"

namespace simcal {

// Shortest decimal form that parses back to the identical double, so every
// emitted CSV is byte-stable and round-trips exactly.
std::string format_double(double v);

// Observed or simulated indicator data.
// Schema: indicator,subkey,geo_level,geo_id,year,value
IndicatorSeries load_indicator_csv(const std::string& path);
void write_indicator_csv(const std::string& path, const IndicatorSeries& series);

// Schema: generation,best,mean,evaluations,cache_hits
void write_trajectory_csv(const std::string& path, const std::vector<GenerationRecord>& records);
std::vector<GenerationRecord> load_trajectory_csv(const std::string& path);

// Schema: name,value — one row per parameter, space order.
void write_params_csv(const std::string& path, const ParameterSpace& space, const Chromosome& c);
Chromosome load_params_csv(const std::string& path, const ParameterSpace& space);

// Schema: one column per parameter (space order) plus `fitness`.
void write_samples_csv(const std::string& path, const SampleMatrix& m);
SampleMatrix load_samples_csv(const std::string& path, const ParameterSpace& space);

// Correlation and regression results side by side, one row per parameter
// plus the intercept row. A plain-text rendering mirrors the CSV for
// human reading.
void write_analysis_csv(const std::string& path, const CorrelationReport& corr,
                        const RegressionReport& reg);
void write_analysis_txt(const std::string& path, const CorrelationReport& corr,
                        const RegressionReport& reg);

} // namespace simcal
