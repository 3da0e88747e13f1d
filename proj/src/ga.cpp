#include "simcal/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "simcal/error.hpp"

namespace simcal {

namespace {
constexpr double kImprovementTolerance = 1e-12;
}

void GAConfig::check() const {
    if (population_size < 2) throw Error(Errc::invalid_argument, "population_size must be >= 2");
    if (max_generations < 1) throw Error(Errc::invalid_argument, "max_generations must be >= 1");
    if (plateau_generations < 1 || plateau_generations > max_generations) {
        throw Error(Errc::invalid_argument,
                    "plateau_generations must be in [1, max_generations]");
    }
    if (!(truncation_fraction > 0.0 && truncation_fraction < 1.0)) {
        throw Error(Errc::invalid_argument, "truncation_fraction must be in (0, 1)");
    }
    if (mutation_rate < 0.0 || mutation_rate > 1.0) {
        throw Error(Errc::invalid_argument, "mutation_rate must be in [0, 1]");
    }
    if (mutation_scale < 0.0) throw Error(Errc::invalid_argument, "mutation_scale must be >= 0");
    if (repetitions < 1) throw Error(Errc::invalid_argument, "repetitions must be >= 1");
}

const char* stop_reason_name(StopReason reason) {
    return reason == StopReason::plateau ? "plateau" : "max_generations";
}

std::vector<Chromosome> init_population(const ParameterSpace& space, int n, Rng& rng) {
    if (n < 2) throw Error(Errc::invalid_argument, "population size must be >= 2");
    std::vector<Chromosome> population;
    population.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) population.push_back(sample_uniform(space, rng));
    return population;
}

std::vector<std::size_t> select_truncation_indices(std::span<const double> fitnesses,
                                                   double fraction) {
    if (fitnesses.empty()) throw Error(Errc::invalid_argument, "nothing to select from");
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw Error(Errc::invalid_argument, "truncation fraction must be in (0, 1)");
    }
    const auto keep = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(fitnesses.size())));
    std::vector<std::size_t> order(fitnesses.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitnesses[a] < fitnesses[b]; });
    order.resize(std::min(keep, order.size()));
    return order;
}

std::vector<Chromosome> select_truncation(
    std::span<const std::pair<Chromosome, double>> scored, double fraction) {
    std::vector<double> fitnesses;
    fitnesses.reserve(scored.size());
    for (const auto& [c, f] : scored) fitnesses.push_back(f);
    std::vector<Chromosome> out;
    for (auto i : select_truncation_indices(fitnesses, fraction)) out.push_back(scored[i].first);
    return out;
}

Chromosome crossover(const Chromosome& a, const Chromosome& b, Rng& rng) {
    if (a.values.size() != b.values.size()) {
        throw Error(Errc::invalid_argument, "parents have different lengths");
    }
    Chromosome child;
    child.values.reserve(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        child.values.push_back(bernoulli(rng, 0.5) ? a.values[i] : b.values[i]);
    }
    return child;
}

Chromosome mutate(const ParameterSpace& space, const Chromosome& c, double rate, double scale,
                  Rng& rng) {
    Chromosome out = c;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!bernoulli(rng, rate)) continue;
        out.values[i] += gaussian(rng, 0.0, scale * space[i].width());
    }
    return clamp_and_round(space, out);
}

std::vector<Chromosome> next_generation(const ParameterSpace& space, const GAConfig& config,
                                        std::span<const Chromosome> population,
                                        std::span<const double> fitnesses, Rng& rng) {
    const auto survivors = select_truncation_indices(fitnesses, config.truncation_fraction);
    std::vector<Chromosome> next;
    next.reserve(population.size());
    for (auto i : survivors) next.push_back(population[i]);
    while (next.size() < population.size()) {
        const auto pick = [&] {
            return survivors[static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<long>(survivors.size()) - 1))];
        };
        const Chromosome child = crossover(population[pick()], population[pick()], rng);
        next.push_back(mutate(space, child, config.mutation_rate, config.mutation_scale, rng));
    }
    return next;
}

CalibrationResult run_ga(const ParameterSpace& space, const GAConfig& config,
                         Evaluator& evaluator) {
    config.check();
    Rng rng(config.master_seed);

    CalibrationResult result;
    std::vector<Chromosome> population = init_population(space, config.population_size, rng);

    double best_so_far = std::numeric_limits<double>::infinity();
    int generations_without_improvement = 0;
    bool has_best = false;

    for (int generation = 1; generation <= config.max_generations; ++generation) {
        std::vector<double> fitnesses(population.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < population.size(); ++i) {
            const FitnessValue v = evaluator.evaluate(population[i]);
            fitnesses[i] = v.f;
            sum += v.f;
            if (!has_best || v.f < result.best_fitness.f) {
                result.best_chromosome = population[i];
                result.best_fitness = v;
                has_best = true;
            }
        }

        const double generation_best = *std::min_element(fitnesses.begin(), fitnesses.end());
        const bool improved = generation_best < best_so_far - kImprovementTolerance;
        best_so_far = std::min(best_so_far, generation_best);

        const EvaluatorStats stats = evaluator.stats();
        result.trajectory.push_back({generation, best_so_far,
                                     sum / static_cast<double>(population.size()),
                                     stats.evaluations, stats.cache_hits});
        result.generations_run = generation;

        if (generation > 1) {
            generations_without_improvement = improved ? 0 : generations_without_improvement + 1;
            if (generations_without_improvement >= config.plateau_generations) {
                result.stop_reason = StopReason::plateau;
                return result;
            }
        }
        if (generation == config.max_generations) {
            result.stop_reason = StopReason::max_generations;
            return result;
        }

        population = next_generation(space, config, population, fitnesses, rng);
    }
    return result;
}

} // namespace simcal
