#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simcal/fitness.hpp"
#include "simcal/param_space.hpp"
#include "simcal/rng.hpp"

namespace simcal {

struct GAConfig {
    int population_size = 50;
    int max_generations = 500;
    int plateau_generations = 200; // stop after this many generations without improvement
    double truncation_fraction = 0.5;
    double mutation_rate = 0.1;     // per-gene probability
    double mutation_scale = 0.1;    // Gaussian sigma as a fraction of the range
    int repetitions = 5;            // simulation runs averaged per evaluation
    std::uint64_t master_seed = 42;

    void check() const; // throws Errc::invalid_argument
};

struct GenerationRecord {
    int generation = 0;
    double best_fitness = 0.0; // best-so-far, nonincreasing
    double mean_fitness = 0.0; // mean over the current population
    std::uint64_t evaluations = 0; // cumulative evaluator calls
    std::uint64_t cache_hits = 0;  // cumulative
};

enum class StopReason { max_generations, plateau };

const char* stop_reason_name(StopReason reason);

struct CalibrationResult {
    Chromosome best_chromosome;
    FitnessValue best_fitness;
    std::vector<GenerationRecord> trajectory;
    int generations_run = 0;
    StopReason stop_reason = StopReason::max_generations;
};

std::vector<Chromosome> init_population(const ParameterSpace& space, int n, Rng& rng);

// Indices of the ceil(fraction * n) lowest-fitness entries, ties broken by
// input order (rank-based, so any strictly increasing fitness transform
// selects the same set).
std::vector<std::size_t> select_truncation_indices(std::span<const double> fitnesses,
                                                   double fraction);

std::vector<Chromosome> select_truncation(
    std::span<const std::pair<Chromosome, double>> scored, double fraction);

// Uniform crossover: each gene comes from either parent with equal chance.
Chromosome crossover(const Chromosome& a, const Chromosome& b, Rng& rng);

// Per-gene Gaussian perturbation with probability `rate` and standard
// deviation `scale * range`, repaired back into the space.
Chromosome mutate(const ParameterSpace& space, const Chromosome& c, double rate, double scale,
                  Rng& rng);

// Truncation selection with survivor carry-over: survivors are copied
// unchanged into the next generation and the remaining slots are filled by
// mutate(crossover(...)) of uniformly chosen survivor pairs.
std::vector<Chromosome> next_generation(const ParameterSpace& space, const GAConfig& config,
                                        std::span<const Chromosome> population,
                                        std::span<const double> fitnesses, Rng& rng);

/// Full GA run: iterates generations until the maximum count is reached or
/// the best-so-far fitness stops improving for `plateau_generations`
/// consecutive generations. Tracks the fittest chromosome ever evaluated.
CalibrationResult run_ga(const ParameterSpace& space, const GAConfig& config,
                         Evaluator& evaluator);

} // namespace simcal
