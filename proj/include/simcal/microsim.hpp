#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simcal/indicators.hpp"
#include "simcal/param_space.hpp"
#include "simcal/rng.hpp"

namespace simcal {

enum class Sex : std::uint8_t { A, B };

enum class Activity : std::uint8_t { student, worker, unemployed, inactive, retired };

struct Individual {
    std::int32_t id = -1;
    std::int32_t age = 0;
    Sex sex = Sex::A;
    Activity activity = Activity::student;
    std::int32_t sector = -1;    // valid iff worker
    std::int32_t residence = -1; // municipality id
    std::int32_t workplace = -1; // municipality id, valid iff worker
    std::int32_t household = -1;

    bool is_worker() const { return activity == Activity::worker; }
};

struct Household {
    std::int32_t id = -1;
    std::vector<std::int32_t> members; // individual ids, nonempty
    std::int32_t municipality = -1;
    std::int32_t rooms = 1;
    std::int32_t dwelling = -1; // index into the municipality's housing stock

    std::size_t size() const { return members.size(); }
};

struct Dwelling {
    std::int32_t rooms = 1;
    std::int32_t occupant = -1; // household id, -1 when vacant
};

struct Municipality {
    std::int32_t id = -1;
    std::int32_t district = 0;
    std::vector<std::int32_t> job_slots;  // per sector
    std::vector<std::int32_t> jobs_taken; // per sector, <= job_slots
    std::vector<Dwelling> housing;

    std::int64_t total_job_slots() const;
    std::int32_t free_slots(std::int32_t sector) const {
        return job_slots[static_cast<std::size_t>(sector)] -
               jobs_taken[static_cast<std::size_t>(sector)];
    }
};

struct EventCounts {
    std::int32_t births = 0;
    std::int32_t deaths = 0;
    std::int32_t out_migrations = 0;
};

// Weighted age band used when synthesizing the initial population.
struct AgeBand {
    int lo = 0;
    int hi = 0; // inclusive
    double weight = 1.0;
};

struct SynthesisSpec {
    int municipalities = 2;
    std::vector<int> district_of;         // per municipality; defaulted when empty
    int individuals_per_municipality = 500;
    int sectors = 3;
    int job_slots_per_sector = 60;        // per municipality
    double couple_fraction = 0.55;        // share of adults initially paired
    double initial_unemployment = 0.10;
    double initial_inactive = 0.08;
    double housing_vacancy = 0.12;        // extra vacant dwellings per household
    std::vector<AgeBand> age_mix;         // defaulted when empty
};

struct SimConfig {
    int start_year = 2000;
    int steps = 10;
    std::uint64_t repetition_seed_base = 1;
    SynthesisSpec synthesis;

    // Fixed model constants. mortality_scale is a hook: 0 disables deaths.
    double mortality_scale = 1.0;
    int retirement_age = 65;
    int adulthood_age = 18;
    int higher_education_age = 18;
    std::vector<int> age_bin_edges = {15, 25, 45, 65};

    void check() const; // throws Errc::invalid_argument
};

// The eleven calibration parameters unpacked by name, so the simulation
// code never depends on chromosome slot order.
struct SimParams {
    int age_min_having_child = 15;
    int age_max_having_child = 45;
    double nb_child = 2;
    double probability_to_make_couple = 0.02;
    int nb_join_trials = 10;
    double splitting_proba = 0.1;
    double prob_to_accept_new_residence = 0.5;
    int res_satisfact_margin = 1;
    double prob_study_outside = 0.1;
    double prob_looking_regional_jobs = 0.1;
    double job_vacancy_rate = 0.02;

    static SimParams from_chromosome(const ParameterSpace& space, const Chromosome& c);
};

/// Full mutable state of the synthetic region for one simulation run.
struct WorldState {
    std::int32_t year = 0;
    std::vector<Individual> individuals; // sorted by id
    std::vector<Household> households;   // sorted by id
    std::vector<Municipality> municipalities;
    std::vector<EventCounts> events; // per municipality, current year
    std::int32_t next_individual_id = 0;
    std::int32_t next_household_id = 0;
    std::vector<int> age_bin_edges;
    int sectors = 0;

    Individual* find_individual(std::int32_t id);
    const Individual* find_individual(std::int32_t id) const;
    Household* find_household(std::int32_t id);
    const Household* find_household(std::int32_t id) const;
    Municipality& municipality(std::int32_t id) {
        return municipalities[static_cast<std::size_t>(id)];
    }
    const Municipality& municipality(std::int32_t id) const {
        return municipalities[static_cast<std::size_t>(id)];
    }

    std::vector<std::int32_t> district_ids() const;
    std::int64_t total_population() const {
        return static_cast<std::int64_t>(individuals.size());
    }
};

WorldState init_world(const SimConfig& cfg, Rng& rng);

// One simulated year, applying the demographic and labor sub-processes in a
// fixed order: aging, deaths, births, couple formation, household splitting,
// residence change, education out-migration, labor market. Event counters
// are reset at entry and accumulate over the year; `year` advances by one.
void step_year(WorldState& world, const SimParams& params, const SimConfig& cfg, Rng& rng);

// Indicator values for the world's current year.
IndicatorSeries extract_indicators(const WorldState& world);

// init_world followed by cfg.steps years; indicators collected after every
// step, covering years start_year+1 .. start_year+steps.
IndicatorSeries run_simulation(const SimConfig& cfg, const SimParams& params, Rng& rng);

IndicatorSeries run_simulation(const SimConfig& cfg, const ParameterSpace& space,
                               const Chromosome& c, Rng& rng);

// Age histogram label for a given age under the configured bin edges,
// e.g. "15-24" or "65+".
std::string age_bin_label(const std::vector<int>& edges, int age);
std::vector<std::string> age_bin_labels(const std::vector<int>& edges);

// Consistency check used by tests: id links, household/municipality
// agreement, worker/job bookkeeping. Returns a description of the first
// problem found, or nullopt when the state is coherent.
std::optional<std::string> check_integrity(const WorldState& world);

} // namespace simcal
