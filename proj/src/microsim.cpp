#include "simcal/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "simcal/error.hpp"

namespace simcal {

namespace {

// Piecewise-constant yearly death hazard by age band. The top band is
// certain death, which also keeps ages within the modeled range.
double death_hazard(int age) {
    if (age < 1) return 0.004;
    if (age < 40) return 0.0008;
    if (age < 60) return 0.004;
    if (age < 70) return 0.012;
    if (age < 80) return 0.035;
    if (age < 90) return 0.09;
    if (age < 110) return 0.22;
    return 1.0;
}

std::vector<AgeBand> default_age_mix() {
    return {
        {0, 17, 0.18}, {18, 29, 0.16}, {30, 44, 0.20},
        {45, 64, 0.27}, {65, 84, 0.16}, {85, 95, 0.03},
    };
}

int draw_age(const std::vector<AgeBand>& mix, Rng& rng) {
    double total = 0.0;
    for (const auto& b : mix) total += b.weight;
    double u = uniform_real(rng, 0.0, total);
    for (const auto& b : mix) {
        if (u < b.weight || &b == &mix.back()) {
            return static_cast<int>(uniform_int(rng, b.lo, b.hi));
        }
        u -= b.weight;
    }
    return mix.back().hi;
}

template <typename T>
T* find_by_id(std::vector<T>& items, std::int32_t id) {
    auto it = std::lower_bound(items.begin(), items.end(), id,
                               [](const T& a, std::int32_t b) { return a.id < b; });
    if (it == items.end() || it->id != id) return nullptr;
    return &*it;
}

} // namespace

std::int64_t Municipality::total_job_slots() const {
    return std::accumulate(job_slots.begin(), job_slots.end(), std::int64_t{0});
}

void SimConfig::check() const {
    if (steps < 1) throw Error(Errc::invalid_argument, "steps must be >= 1");
    if (synthesis.municipalities < 1) {
        throw Error(Errc::invalid_argument, "at least one municipality is required");
    }
    if (synthesis.individuals_per_municipality < 1) {
        throw Error(Errc::invalid_argument, "at least one individual per municipality is required");
    }
    if (synthesis.sectors < 1) throw Error(Errc::invalid_argument, "at least one sector is required");
    if (!synthesis.district_of.empty() &&
        synthesis.district_of.size() != static_cast<std::size_t>(synthesis.municipalities)) {
        throw Error(Errc::invalid_argument,
                    "district_of must list one district per municipality");
    }
    if (age_bin_edges.empty() || !std::is_sorted(age_bin_edges.begin(), age_bin_edges.end())) {
        throw Error(Errc::invalid_argument, "age_bin_edges must be nonempty and ascending");
    }
}

SimParams SimParams::from_chromosome(const ParameterSpace& space, const Chromosome& c) {
    const auto violations = validate(space, c);
    if (!violations.empty()) {
        throw Error(Errc::invalid_argument, "invalid chromosome: " + violations.front().param +
                                                " " + violations.front().reason);
    }
    auto value = [&](const char* name) {
        const std::size_t i = space.index_of(name);
        if (i == ParameterSpace::npos) {
            throw Error(Errc::invalid_argument, std::string("parameter space lacks '") + name + "'");
        }
        return c.values[i];
    };
    SimParams p;
    p.age_min_having_child = static_cast<int>(value("ageMinHavingChild"));
    p.age_max_having_child = static_cast<int>(value("ageMaxHavingChild"));
    p.nb_child = value("nbChild");
    p.probability_to_make_couple = value("probabilityToMakeCouple");
    p.nb_join_trials = static_cast<int>(value("nbJoinTrials"));
    p.splitting_proba = value("splittingProba");
    p.prob_to_accept_new_residence = value("probToAcceptNewResidence");
    p.res_satisfact_margin = static_cast<int>(value("resSatisfactMargin"));
    p.prob_study_outside = value("probStudyOutside");
    p.prob_looking_regional_jobs = value("probLookingRegionalJobs");
    p.job_vacancy_rate = value("jobVacancyRate");
    return p;
}

Individual* WorldState::find_individual(std::int32_t id) { return find_by_id(individuals, id); }

const Individual* WorldState::find_individual(std::int32_t id) const {
    return find_by_id(const_cast<std::vector<Individual>&>(individuals), id);
}

Household* WorldState::find_household(std::int32_t id) { return find_by_id(households, id); }

const Household* WorldState::find_household(std::int32_t id) const {
    return find_by_id(const_cast<std::vector<Household>&>(households), id);
}

std::vector<std::int32_t> WorldState::district_ids() const {
    std::set<std::int32_t> ids;
    for (const auto& m : municipalities) ids.insert(m.district);
    return {ids.begin(), ids.end()};
}

WorldState init_world(const SimConfig& cfg, Rng& rng) {
    cfg.check();
    const auto& spec = cfg.synthesis;
    const auto age_mix = spec.age_mix.empty() ? default_age_mix() : spec.age_mix;

    WorldState world;
    world.year = cfg.start_year;
    world.age_bin_edges = cfg.age_bin_edges;
    world.sectors = spec.sectors;
    world.events.assign(static_cast<std::size_t>(spec.municipalities), EventCounts{});

    for (std::int32_t m = 0; m < spec.municipalities; ++m) {
        Municipality muni;
        muni.id = m;
        muni.district = spec.district_of.empty()
                            ? (spec.municipalities > 1 ? (m < spec.municipalities / 2 ? 0 : 1) : 0)
                            : spec.district_of[static_cast<std::size_t>(m)];
        muni.job_slots.assign(static_cast<std::size_t>(spec.sectors),
                              spec.job_slots_per_sector);
        muni.jobs_taken.assign(static_cast<std::size_t>(spec.sectors), 0);
        world.municipalities.push_back(std::move(muni));
    }

    for (std::int32_t m = 0; m < spec.municipalities; ++m) {
        Municipality& muni = world.municipality(m);

        std::vector<std::int32_t> adults_a, adults_b, children;
        for (int n = 0; n < spec.individuals_per_municipality; ++n) {
            Individual ind;
            ind.id = world.next_individual_id++;
            ind.age = draw_age(age_mix, rng);
            ind.sex = bernoulli(rng, 0.5) ? Sex::A : Sex::B;
            ind.residence = m;
            if (ind.age < cfg.adulthood_age) {
                children.push_back(ind.id);
            } else if (ind.sex == Sex::A) {
                adults_a.push_back(ind.id);
            } else {
                adults_b.push_back(ind.id);
            }
            world.individuals.push_back(std::move(ind));
        }

        const std::size_t adults = adults_a.size() + adults_b.size();
        const std::size_t couples =
            std::min({static_cast<std::size_t>(spec.couple_fraction * adults / 2.0),
                      adults_a.size(), adults_b.size()});

        std::vector<std::int32_t> couple_households, all_households;
        auto new_household = [&](std::vector<std::int32_t> members) {
            Household hh;
            hh.id = world.next_household_id++;
            hh.members = std::move(members);
            hh.municipality = m;
            for (auto id : hh.members) world.find_individual(id)->household = hh.id;
            all_households.push_back(hh.id);
            world.households.push_back(std::move(hh));
            return world.households.back().id;
        };

        for (std::size_t i = 0; i < couples; ++i) {
            couple_households.push_back(new_household({adults_a[i], adults_b[i]}));
        }
        for (std::size_t i = couples; i < adults_a.size(); ++i) new_household({adults_a[i]});
        for (std::size_t i = couples; i < adults_b.size(); ++i) new_household({adults_b[i]});

        for (auto child : children) {
            const auto& pool = couple_households.empty() ? all_households : couple_households;
            if (pool.empty()) {
                new_household({child});
                continue;
            }
            const auto hid = pool[static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<long>(pool.size()) - 1))];
            Household* hh = world.find_household(hid);
            hh->members.push_back(child);
            world.find_individual(child)->household = hid;
        }

        // One dwelling per household plus a vacancy buffer.
        for (auto hid : all_households) {
            Household* hh = world.find_household(hid);
            hh->rooms = std::max<std::int32_t>(
                1, static_cast<std::int32_t>(hh->members.size()) +
                       static_cast<std::int32_t>(uniform_int(rng, -1, 2)));
            hh->dwelling = static_cast<std::int32_t>(muni.housing.size());
            muni.housing.push_back({hh->rooms, hid});
        }
        const auto vacant = static_cast<std::size_t>(
            std::lround(spec.housing_vacancy * static_cast<double>(all_households.size())));
        for (std::size_t i = 0; i < vacant; ++i) {
            muni.housing.push_back({static_cast<std::int32_t>(uniform_int(rng, 1, 5)), -1});
        }
    }

    // Initial activity mix and local job take-up.
    for (auto& ind : world.individuals) {
        if (ind.age < cfg.adulthood_age) {
            ind.activity = Activity::student;
            continue;
        }
        if (ind.age >= cfg.retirement_age) {
            ind.activity = Activity::retired;
            continue;
        }
        const double u = uniform_real(rng, 0.0, 1.0);
        if (u < cfg.synthesis.initial_inactive) {
            ind.activity = Activity::inactive;
            continue;
        }
        if (u < cfg.synthesis.initial_inactive + cfg.synthesis.initial_unemployment) {
            ind.activity = Activity::unemployed;
            continue;
        }
        Municipality& muni = world.municipality(ind.residence);
        const int k = world.sectors;
        const int start = static_cast<int>(uniform_int(rng, 0, k - 1));
        ind.activity = Activity::unemployed;
        for (int s = 0; s < k; ++s) {
            const std::int32_t sector = static_cast<std::int32_t>((start + s) % k);
            if (muni.free_slots(sector) > 0) {
                ind.activity = Activity::worker;
                ind.sector = sector;
                ind.workplace = ind.residence;
                ++muni.jobs_taken[static_cast<std::size_t>(sector)];
                break;
            }
        }
    }

    return world;
}

namespace {

void release_job(WorldState& world, Individual& ind) {
    if (ind.is_worker()) {
        --world.municipality(ind.workplace).jobs_taken[static_cast<std::size_t>(ind.sector)];
        ind.sector = -1;
        ind.workplace = -1;
    }
}

// Detach an individual from the world. Empty households give their
// dwelling back to the municipality's vacant stock.
void remove_individual(WorldState& world, std::int32_t id) {
    Individual* ind = world.find_individual(id);
    release_job(world, *ind);
    Household* hh = world.find_household(ind->household);
    hh->members.erase(std::find(hh->members.begin(), hh->members.end(), id));
    if (hh->members.empty()) {
        if (hh->dwelling >= 0) {
            world.municipality(hh->municipality)
                .housing[static_cast<std::size_t>(hh->dwelling)]
                .occupant = -1;
        }
        const auto hid = hh->id;
        world.households.erase(
            std::find_if(world.households.begin(), world.households.end(),
                         [hid](const Household& h) { return h.id == hid; }));
    }
    world.individuals.erase(
        std::find_if(world.individuals.begin(), world.individuals.end(),
                     [id](const Individual& i) { return i.id == id; }));
}

void apply_aging(WorldState& world) {
    for (auto& ind : world.individuals) ++ind.age;
}

void apply_deaths(WorldState& world, const SimConfig& cfg, Rng& rng) {
    if (cfg.mortality_scale <= 0.0) return;
    std::vector<std::int32_t> dead;
    for (const auto& ind : world.individuals) {
        const double h = std::min(1.0, death_hazard(ind.age) * cfg.mortality_scale);
        if (bernoulli(rng, h)) dead.push_back(ind.id);
    }
    for (auto id : dead) {
        ++world.events[static_cast<std::size_t>(world.find_individual(id)->residence)].deaths;
        remove_individual(world, id);
    }
}

void apply_births(WorldState& world, const SimParams& params, const SimConfig& cfg, Rng& rng) {
    const int window = params.age_max_having_child - params.age_min_having_child + 1;
    if (window <= 0 || params.nb_child <= 0.0) return;
    // Yearly birth probability per fertile couple, chosen so the expected
    // number of children over the full fertile window equals nb_child.
    const double p_birth = std::min(1.0, params.nb_child / static_cast<double>(window));

    std::vector<std::int32_t> hh_ids;
    hh_ids.reserve(world.households.size());
    for (const auto& hh : world.households) hh_ids.push_back(hh.id);

    for (auto hid : hh_ids) {
        Household* hh = world.find_household(hid);
        bool has_adult_a = false, fertile_b = false;
        for (auto mid : hh->members) {
            const Individual* ind = world.find_individual(mid);
            if (ind->age < cfg.adulthood_age) continue;
            if (ind->sex == Sex::A) has_adult_a = true;
            if (ind->sex == Sex::B && ind->age >= params.age_min_having_child &&
                ind->age <= params.age_max_having_child) {
                fertile_b = true;
            }
        }
        if (!has_adult_a || !fertile_b) continue;
        if (!bernoulli(rng, p_birth)) continue;

        Individual baby;
        baby.id = world.next_individual_id++;
        baby.age = 0;
        baby.sex = bernoulli(rng, 0.5) ? Sex::A : Sex::B;
        baby.activity = Activity::student;
        baby.residence = hh->municipality;
        baby.household = hid;
        hh->members.push_back(baby.id);
        ++world.events[static_cast<std::size_t>(hh->municipality)].births;
        world.individuals.push_back(std::move(baby));
        // ids grow monotonically, so the sort order is preserved
    }
}

bool is_partnered(const WorldState& world, const Individual& ind, int adulthood_age) {
    const Household* hh = world.find_household(ind.household);
    for (auto mid : hh->members) {
        if (mid == ind.id) continue;
        const Individual* other = world.find_individual(mid);
        if (other->sex != ind.sex && other->age >= adulthood_age) return true;
    }
    return false;
}

void merge_households(WorldState& world, std::int32_t src_id, std::int32_t dst_id) {
    Household* src = world.find_household(src_id);
    Household* dst = world.find_household(dst_id);
    for (auto mid : src->members) {
        Individual* ind = world.find_individual(mid);
        ind->household = dst_id;
        ind->residence = dst->municipality;
        dst->members.push_back(mid);
    }
    if (src->dwelling >= 0) {
        world.municipality(src->municipality)
            .housing[static_cast<std::size_t>(src->dwelling)]
            .occupant = -1;
    }
    world.households.erase(
        std::find_if(world.households.begin(), world.households.end(),
                     [src_id](const Household& h) { return h.id == src_id; }));
}

void apply_coupling(WorldState& world, const SimParams& params, const SimConfig& cfg, Rng& rng) {
    if (params.probability_to_make_couple <= 0.0 || params.nb_join_trials <= 0) return;

    std::vector<std::int32_t> singles_a, singles_b;
    for (const auto& ind : world.individuals) {
        if (ind.age < cfg.adulthood_age) continue;
        if (is_partnered(world, ind, cfg.adulthood_age)) continue;
        (ind.sex == Sex::A ? singles_a : singles_b).push_back(ind.id);
    }
    std::set<std::int32_t> paired;

    auto propose = [&](std::int32_t proposer_id, std::vector<std::int32_t>& pool) {
        Individual* proposer = world.find_individual(proposer_id);
        for (int trial = 0; trial < params.nb_join_trials; ++trial) {
            const auto pick = static_cast<std::size_t>(
                uniform_int(rng, 0, static_cast<long>(pool.size()) - 1));
            const std::int32_t candidate_id = pool[pick];
            if (paired.count(candidate_id)) continue;
            Individual* candidate = world.find_individual(candidate_id);
            if (candidate->household == proposer->household) continue;
            if (!bernoulli(rng, params.probability_to_make_couple)) continue;
            // The proposer's household moves in with the candidate's.
            merge_households(world, proposer->household, candidate->household);
            paired.insert(proposer_id);
            paired.insert(candidate_id);
            return;
        }
    };

    for (auto id : singles_a) {
        if (paired.count(id) || singles_b.empty()) continue;
        propose(id, singles_b);
    }
}

std::int32_t claim_dwelling(WorldState& world, Municipality& muni, std::int32_t rooms_if_new,
                            std::int32_t household_id) {
    for (std::size_t d = 0; d < muni.housing.size(); ++d) {
        if (muni.housing[d].occupant < 0) {
            muni.housing[d].occupant = household_id;
            return static_cast<std::int32_t>(d);
        }
    }
    muni.housing.push_back({rooms_if_new, household_id});
    return static_cast<std::int32_t>(muni.housing.size() - 1);
}

void apply_splitting(WorldState& world, const SimParams& params, Rng& rng) {
    if (params.splitting_proba <= 0.0) return;
    std::vector<std::int32_t> hh_ids;
    for (const auto& hh : world.households) hh_ids.push_back(hh.id);

    for (auto hid : hh_ids) {
        Household* hh = world.find_household(hid);
        if (hh->members.size() < 2) continue;
        if (!bernoulli(rng, params.splitting_proba)) continue;

        std::vector<std::int32_t> leavers;
        for (auto mid : hh->members) {
            if (world.find_individual(mid)->age >= 16) leavers.push_back(mid);
        }
        if (leavers.empty()) continue;
        const std::int32_t leaver_id = leavers[static_cast<std::size_t>(
            uniform_int(rng, 0, static_cast<long>(leavers.size()) - 1))];

        hh->members.erase(std::find(hh->members.begin(), hh->members.end(), leaver_id));
        Municipality& muni = world.municipality(hh->municipality);

        Household fresh;
        fresh.id = world.next_household_id++;
        fresh.members = {leaver_id};
        fresh.municipality = hh->municipality;
        fresh.dwelling = claim_dwelling(world, muni, 2, fresh.id);
        fresh.rooms = muni.housing[static_cast<std::size_t>(fresh.dwelling)].rooms;
        world.find_individual(leaver_id)->household = fresh.id;
        world.households.push_back(std::move(fresh));
    }
}

void apply_residence_change(WorldState& world, const SimParams& params, Rng& rng) {
    if (params.prob_to_accept_new_residence <= 0.0) return;
    std::vector<std::int32_t> hh_ids;
    for (const auto& hh : world.households) hh_ids.push_back(hh.id);

    for (auto hid : hh_ids) {
        Household* hh = world.find_household(hid);
        const auto need = static_cast<std::int32_t>(hh->members.size());
        if (std::abs(hh->rooms - need) <= params.res_satisfact_margin) continue;

        Municipality& muni = world.municipality(hh->municipality);
        std::int32_t found = -1;
        for (std::size_t d = 0; d < muni.housing.size(); ++d) {
            const auto& dw = muni.housing[d];
            if (dw.occupant < 0 && std::abs(dw.rooms - need) <= params.res_satisfact_margin) {
                found = static_cast<std::int32_t>(d);
                break;
            }
        }
        if (found < 0) continue;
        if (!bernoulli(rng, params.prob_to_accept_new_residence)) continue;

        if (hh->dwelling >= 0) muni.housing[static_cast<std::size_t>(hh->dwelling)].occupant = -1;
        muni.housing[static_cast<std::size_t>(found)].occupant = hid;
        hh->dwelling = found;
        hh->rooms = muni.housing[static_cast<std::size_t>(found)].rooms;
    }
}

void apply_education_migration(WorldState& world, const SimParams& params, const SimConfig& cfg,
                               Rng& rng) {
    if (params.prob_study_outside <= 0.0) return;
    std::vector<std::int32_t> leavers;
    for (const auto& ind : world.individuals) {
        if (ind.age == cfg.higher_education_age && bernoulli(rng, params.prob_study_outside)) {
            leavers.push_back(ind.id);
        }
    }
    for (auto id : leavers) {
        ++world.events[static_cast<std::size_t>(world.find_individual(id)->residence)]
              .out_migrations;
        remove_individual(world, id);
    }
}

void apply_labor_market(WorldState& world, const SimParams& params, const SimConfig& cfg,
                        Rng& rng) {
    for (auto& ind : world.individuals) {
        if (ind.age >= cfg.retirement_age && ind.activity != Activity::retired) {
            release_job(world, ind);
            ind.activity = Activity::retired;
        } else if (ind.activity == Activity::student && ind.age >= cfg.higher_education_age) {
            // Finished school and stayed in the region: joins the labor force.
            ind.activity = Activity::unemployed;
        }
    }

    // Job creation compounds on the current stock: a rate of 1 doubles the
    // slot count every year. Fractional remainders round stochastically.
    if (params.job_vacancy_rate > 0.0) {
        for (auto& muni : world.municipalities) {
            for (auto& slots : muni.job_slots) {
                const double extra = params.job_vacancy_rate * static_cast<double>(slots);
                auto add = static_cast<std::int32_t>(std::floor(extra));
                if (bernoulli(rng, extra - std::floor(extra))) ++add;
                slots += add;
            }
        }
    }

    const int k = world.sectors;
    const auto munis = static_cast<std::int32_t>(world.municipalities.size());
    for (auto& ind : world.individuals) {
        if (ind.activity != Activity::unemployed) continue;
        Municipality& local = world.municipality(ind.residence);
        const int start = static_cast<int>(uniform_int(rng, 0, k - 1));
        bool hired = false;
        for (int s = 0; s < k && !hired; ++s) {
            const std::int32_t sector = static_cast<std::int32_t>((start + s) % k);
            if (local.free_slots(sector) > 0) {
                ind.activity = Activity::worker;
                ind.sector = sector;
                ind.workplace = ind.residence;
                ++local.jobs_taken[static_cast<std::size_t>(sector)];
                hired = true;
            }
        }
        if (hired || munis < 2) continue;
        if (!bernoulli(rng, params.prob_looking_regional_jobs)) continue;
        for (std::int32_t m = 0; m < munis && !hired; ++m) {
            if (m == ind.residence) continue;
            Municipality& remote = world.municipality(m);
            for (int s = 0; s < k && !hired; ++s) {
                const std::int32_t sector = static_cast<std::int32_t>((start + s) % k);
                if (remote.free_slots(sector) > 0) {
                    ind.activity = Activity::worker;
                    ind.sector = sector;
                    ind.workplace = m;
                    ++remote.jobs_taken[static_cast<std::size_t>(sector)];
                    hired = true;
                }
            }
        }
    }
}

} // namespace

void step_year(WorldState& world, const SimParams& params, const SimConfig& cfg, Rng& rng) {
    world.events.assign(world.municipalities.size(), EventCounts{});
    apply_aging(world);
    apply_deaths(world, cfg, rng);
    apply_births(world, params, cfg, rng);
    apply_coupling(world, params, cfg, rng);
    apply_splitting(world, params, rng);
    apply_residence_change(world, params, rng);
    apply_education_migration(world, params, cfg, rng);
    apply_labor_market(world, params, cfg, rng);
    ++world.year;
}

std::string age_bin_label(const std::vector<int>& edges, int age) {
    int lo = 0;
    for (std::size_t i = 0; i <= edges.size(); ++i) {
        const bool last = i == edges.size();
        if (last || age < edges[i]) {
            if (last) return std::to_string(lo) + "+";
            return std::to_string(lo) + "-" + std::to_string(edges[i] - 1);
        }
        lo = edges[i];
    }
    return {};
}

std::vector<std::string> age_bin_labels(const std::vector<int>& edges) {
    std::vector<std::string> labels;
    int lo = 0;
    for (auto e : edges) {
        labels.push_back(std::to_string(lo) + "-" + std::to_string(e - 1));
        lo = e;
    }
    labels.push_back(std::to_string(lo) + "+");
    return labels;
}

IndicatorSeries extract_indicators(const WorldState& world) {
    IndicatorSeries out;
    const auto year = world.year;
    const auto edges = world.age_bin_edges;
    const auto labels = age_bin_labels(edges);

    auto bin_of = [&](int age) {
        std::size_t b = 0;
        while (b < edges.size() && age >= edges[b]) ++b;
        return b;
    };

    for (const auto& muni : world.municipalities) {
        std::vector<double> ages(labels.size(), 0.0), employed(labels.size(), 0.0),
            unemployed(labels.size(), 0.0);
        double workplace_count = 0.0;
        for (const auto& ind : world.individuals) {
            if (ind.workplace == muni.id) ++workplace_count;
            if (ind.residence != muni.id) continue;
            const auto b = bin_of(ind.age);
            ++ages[b];
            if (ind.activity == Activity::worker) ++employed[b];
            if (ind.activity == Activity::unemployed) ++unemployed[b];
        }
        for (std::size_t b = 0; b < labels.size(); ++b) {
            out.set({Indicator::age_structure, labels[b], GeoLevel::municipality, muni.id, year},
                    ages[b]);
            out.set({Indicator::employment, labels[b], GeoLevel::municipality, muni.id, year},
                    employed[b]);
            out.set({Indicator::unemployment, labels[b], GeoLevel::municipality, muni.id, year},
                    unemployed[b]);
        }
        const auto& ev = world.events[static_cast<std::size_t>(muni.id)];
        out.set({Indicator::births_deaths, "births", GeoLevel::municipality, muni.id, year},
                ev.births);
        out.set({Indicator::births_deaths, "deaths", GeoLevel::municipality, muni.id, year},
                ev.deaths);
        out.set({Indicator::out_migration, "", GeoLevel::municipality, muni.id, year},
                ev.out_migrations);
        out.set({Indicator::workplace, "", GeoLevel::municipality, muni.id, year},
                workplace_count);
    }

    for (auto district : world.district_ids()) {
        auto in_district = [&](std::int32_t muni_id) {
            return world.municipality(muni_id).district == district;
        };

        double hh_sizes[4] = {0, 0, 0, 0}; // 1, 2, 3, 4+
        double hh_total = 0.0;
        for (const auto& hh : world.households) {
            if (!in_district(hh.municipality)) continue;
            ++hh_total;
            ++hh_sizes[std::min<std::size_t>(hh.members.size(), 4) - 1];
        }
        static const char* size_keys[4] = {"1", "2", "3", "4+"};
        for (std::size_t s = 0; s < 4; ++s) {
            const double pct = hh_total > 0 ? 100.0 * hh_sizes[s] / hh_total : 0.0;
            out.set({Indicator::household_structure, size_keys[s], GeoLevel::district, district,
                     year},
                    pct);
        }

        std::vector<double> by_sector(static_cast<std::size_t>(world.sectors), 0.0);
        double workers = 0.0;
        for (const auto& ind : world.individuals) {
            if (!ind.is_worker() || !in_district(ind.residence)) continue;
            ++workers;
            ++by_sector[static_cast<std::size_t>(ind.sector)];
        }
        for (std::int32_t s = 0; s < world.sectors; ++s) {
            const double pct =
                workers > 0 ? 100.0 * by_sector[static_cast<std::size_t>(s)] / workers : 0.0;
            out.set({Indicator::sector_activity, "s" + std::to_string(s), GeoLevel::district,
                     district, year},
                    pct);
        }
    }
    return out;
}

IndicatorSeries run_simulation(const SimConfig& cfg, const SimParams& params, Rng& rng) {
    WorldState world = init_world(cfg, rng);
    IndicatorSeries series;
    for (int step = 0; step < cfg.steps; ++step) {
        step_year(world, params, cfg, rng);
        IndicatorSeries year = extract_indicators(world);
        series.entries.merge(year.entries);
    }
    return series;
}

IndicatorSeries run_simulation(const SimConfig& cfg, const ParameterSpace& space,
                               const Chromosome& c, Rng& rng) {
    return run_simulation(cfg, SimParams::from_chromosome(space, c), rng);
}

std::optional<std::string> check_integrity(const WorldState& world) {
    auto fail = [](const std::string& what) { return std::optional<std::string>(what); };

    for (std::size_t i = 1; i < world.individuals.size(); ++i) {
        if (world.individuals[i - 1].id >= world.individuals[i].id) {
            return fail("individuals not sorted by id");
        }
    }
    for (std::size_t i = 1; i < world.households.size(); ++i) {
        if (world.households[i - 1].id >= world.households[i].id) {
            return fail("households not sorted by id");
        }
    }
    if (world.events.size() != world.municipalities.size()) {
        return fail("event counter size mismatch");
    }

    std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> jobs;
    for (const auto& ind : world.individuals) {
        const std::string tag = "individual " + std::to_string(ind.id);
        if (ind.age < 0 || ind.age > 120) return fail(tag + ": age out of range");
        const Household* hh = world.find_household(ind.household);
        if (!hh) return fail(tag + ": dangling household id");
        if (std::find(hh->members.begin(), hh->members.end(), ind.id) == hh->members.end()) {
            return fail(tag + ": household does not list it as member");
        }
        if (ind.residence != hh->municipality) {
            return fail(tag + ": residence differs from household municipality");
        }
        const bool has_job = ind.sector >= 0 && ind.workplace >= 0;
        if (ind.is_worker() != has_job) return fail(tag + ": worker/job fields inconsistent");
        if (has_job) {
            if (ind.sector >= world.sectors) return fail(tag + ": sector out of range");
            if (static_cast<std::size_t>(ind.workplace) >= world.municipalities.size()) {
                return fail(tag + ": workplace out of range");
            }
            ++jobs[{ind.workplace, ind.sector}];
        }
    }

    for (const auto& hh : world.households) {
        const std::string tag = "household " + std::to_string(hh.id);
        if (hh.members.empty()) return fail(tag + ": empty");
        if (static_cast<std::size_t>(hh.municipality) >= world.municipalities.size()) {
            return fail(tag + ": municipality out of range");
        }
        for (auto mid : hh.members) {
            const Individual* ind = world.find_individual(mid);
            if (!ind) return fail(tag + ": dangling member id");
            if (ind->household != hh.id) return fail(tag + ": member points elsewhere");
        }
        if (hh.dwelling >= 0) {
            const auto& muni = world.municipality(hh.municipality);
            if (static_cast<std::size_t>(hh.dwelling) >= muni.housing.size()) {
                return fail(tag + ": dwelling index out of range");
            }
            if (muni.housing[static_cast<std::size_t>(hh.dwelling)].occupant != hh.id) {
                return fail(tag + ": dwelling occupant mismatch");
            }
        }
    }

    for (const auto& muni : world.municipalities) {
        for (std::int32_t s = 0; s < world.sectors; ++s) {
            const auto taken = muni.jobs_taken[static_cast<std::size_t>(s)];
            if (taken < 0 || taken > muni.job_slots[static_cast<std::size_t>(s)]) {
                return fail("municipality " + std::to_string(muni.id) +
                            ": jobs taken outside [0, slots]");
            }
            auto it = jobs.find({muni.id, s});
            const std::int32_t counted = it == jobs.end() ? 0 : it->second;
            if (counted != taken) {
                return fail("municipality " + std::to_string(muni.id) +
                            ": job bookkeeping mismatch in sector " + std::to_string(s));
            }
        }
    }
    return std::nullopt;
}

} // namespace simcal
