#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "simcal/indicators.hpp"
#include "simcal/microsim.hpp"
#include "simcal/param_space.hpp"

namespace simcal {

struct AlignedPair {
    IndicatorKey key;
    double sim = 0.0;
    double observed = 0.0;
};

struct Alignment {
    std::vector<AlignedPair> pairs;
    std::vector<IndicatorKey> gaps; // observed keys with no simulated counterpart
};

// One pair per observed entry whose key the simulation produced.
// Throws Errc::no_overlap when nothing aligns.
Alignment align(const IndicatorSeries& sim, const IndicatorSeries& observed);

struct FitnessValue {
    double f = 0.0;
    int pairs_used = 0;
    int pairs_skipped = 0; // observed value was zero, cell excluded
};

// Sum of squared relative errors over pairs with a nonzero observed value.
// Throws Errc::degenerate_data when every pair has observed == 0.
FitnessValue fitness(std::span<const AlignedPair> pairs);

/// Memo table from exact chromosome bit patterns to scored fitness.
/// Re-scoring a chromosome is a lookup, never a simulation.
class FitnessCache {
public:
    std::optional<FitnessValue> lookup(const Chromosome& c);
    void insert(const Chromosome& c, const FitnessValue& v);

    std::uint64_t hits() const;
    std::uint64_t misses() const;
    std::uint64_t size() const;

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint64_t>& k) const;
    };
    static std::vector<std::uint64_t> key_of(const Chromosome& c);

    mutable std::mutex mutex_;
    std::unordered_map<std::vector<std::uint64_t>, FitnessValue, KeyHash> map_;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
};

struct EvaluatorStats {
    std::uint64_t evaluations = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::uint64_t simulations = 0;
};

/// Scoring interface injected into the GA so tests can substitute
/// analytic functions for the micro-simulation.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual FitnessValue evaluate(const Chromosome& c) = 0;
    virtual EvaluatorStats stats() const { return {}; }
};

/// Replication-averaged, cache-backed evaluator. A miss runs `repetitions`
/// simulations with seeds derived from (seed_base, repetition index),
/// averages the indicator series entrywise, and scores the average against
/// the observed series. Repetitions of one evaluation run in parallel.
class SimulationEvaluator : public Evaluator {
public:
    using SimulateFn = std::function<IndicatorSeries(const Chromosome&, std::uint64_t seed)>;

    SimulationEvaluator(SimulateFn simulate, IndicatorSeries observed, int repetitions,
                        std::uint64_t seed_base, int threads = 1);

    static SimulationEvaluator for_microsim(const SimConfig& cfg, const ParameterSpace& space,
                                            IndicatorSeries observed, int repetitions,
                                            int threads = 1);

    FitnessValue evaluate(const Chromosome& c) override;
    EvaluatorStats stats() const override;

    const FitnessCache& cache() const { return cache_; }
    std::uint64_t simulations() const { return simulations_.load(); }

private:
    SimulateFn simulate_;
    IndicatorSeries observed_;
    int repetitions_;
    std::uint64_t seed_base_;
    int threads_;
    FitnessCache cache_;
    std::atomic<std::uint64_t> simulations_{0};
    std::atomic<std::uint64_t> evaluations_{0};
};

} // namespace simcal
