#include "simcal/fitness.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

#include "simcal/error.hpp"

namespace simcal {

Alignment align(const IndicatorSeries& sim, const IndicatorSeries& observed) {
    Alignment out;
    for (const auto& [key, value] : observed.entries) {
        auto it = sim.entries.find(key);
        if (it == sim.entries.end()) {
            out.gaps.push_back(key);
        } else {
            out.pairs.push_back({key, it->second, value});
        }
    }
    if (out.pairs.empty()) {
        throw Error(Errc::no_overlap,
                    "no observed entry matches any simulated indicator; fitness is undefined");
    }
    return out;
}

FitnessValue fitness(std::span<const AlignedPair> pairs) {
    FitnessValue out;
    for (const auto& p : pairs) {
        if (p.observed == 0.0) {
            ++out.pairs_skipped;
            continue;
        }
        const double rel = (p.sim - p.observed) / p.observed;
        out.f += rel * rel;
        ++out.pairs_used;
    }
    if (out.pairs_used == 0) {
        throw Error(Errc::degenerate_data,
                    "every aligned pair has an observed value of zero; fitness is undefined");
    }
    return out;
}

std::vector<std::uint64_t> FitnessCache::key_of(const Chromosome& c) {
    std::vector<std::uint64_t> key;
    key.reserve(c.values.size());
    for (double v : c.values) key.push_back(std::bit_cast<std::uint64_t>(v));
    return key;
}

std::size_t FitnessCache::KeyHash::operator()(const std::vector<std::uint64_t>& k) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto word : k) {
        h ^= static_cast<std::size_t>(word);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::optional<FitnessValue> FitnessCache::lookup(const Chromosome& c) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(key_of(c));
    if (it == map_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return it->second;
}

void FitnessCache::insert(const Chromosome& c, const FitnessValue& v) {
    std::lock_guard<std::mutex> lock(mutex_);
    map_[key_of(c)] = v;
}

std::uint64_t FitnessCache::hits() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return hits_;
}

std::uint64_t FitnessCache::misses() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return misses_;
}

std::uint64_t FitnessCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return map_.size();
}

SimulationEvaluator::SimulationEvaluator(SimulateFn simulate, IndicatorSeries observed,
                                         int repetitions, std::uint64_t seed_base, int threads)
    : simulate_(std::move(simulate)),
      observed_(std::move(observed)),
      repetitions_(repetitions),
      seed_base_(seed_base),
      threads_(std::max(1, threads)) {
    if (repetitions_ < 1) throw Error(Errc::invalid_argument, "repetitions must be >= 1");
    if (observed_.empty()) throw Error(Errc::invalid_argument, "observed series is empty");
}

SimulationEvaluator SimulationEvaluator::for_microsim(const SimConfig& cfg,
                                                      const ParameterSpace& space,
                                                      IndicatorSeries observed, int repetitions,
                                                      int threads) {
    SimulateFn fn = [cfg, space](const Chromosome& c, std::uint64_t seed) {
        Rng rng(seed);
        return run_simulation(cfg, space, c, rng);
    };
    return SimulationEvaluator(std::move(fn), std::move(observed), repetitions, cfg.repetition_seed_base,
                               threads);
}

FitnessValue SimulationEvaluator::evaluate(const Chromosome& c) {
    ++evaluations_;
    if (auto hit = cache_.lookup(c)) return *hit;

    std::vector<IndicatorSeries> runs(static_cast<std::size_t>(repetitions_));
    const int workers = std::min(threads_, repetitions_);
    if (workers <= 1) {
        for (int r = 0; r < repetitions_; ++r) {
            runs[static_cast<std::size_t>(r)] = simulate_(c, derive_seed(seed_base_, static_cast<std::uint64_t>(r)));
            ++simulations_;
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < repetitions_; r = next.fetch_add(1)) {
                    runs[static_cast<std::size_t>(r)] =
                        simulate_(c, derive_seed(seed_base_, static_cast<std::uint64_t>(r)));
                    ++simulations_;
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // Average first, then score: the averaged series plays the role of the
    // simulated output indicators.
    const IndicatorSeries averaged = mean_series(runs);
    const Alignment aligned = align(averaged, observed_);
    const FitnessValue value = fitness(aligned.pairs);
    cache_.insert(c, value);
    return value;
}

EvaluatorStats SimulationEvaluator::stats() const {
    EvaluatorStats s;
    s.evaluations = evaluations_.load();
    s.cache_hits = cache_.hits();
    s.cache_misses = cache_.misses();
    s.simulations = simulations_.load();
    return s;
}

} // namespace simcal
