#include "simcal/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "simcal/error.hpp"

namespace simcal {

namespace {

using nlohmann::json;

template <typename T>
void read_if(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

ParamKind parse_kind(const std::string& s) {
    if (s == "integer") return ParamKind::integer;
    if (s == "real") return ParamKind::real;
    throw Error(Errc::parse, "unknown parameter kind '" + s + "' (expected integer or real)");
}

} // namespace

WorkbenchConfig parse_config(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse, origin + ": " + e.what());
    }

    WorkbenchConfig cfg;
    try {
        if (j.contains("sim")) {
            const auto& s = j.at("sim");
            read_if(s, "start_year", cfg.sim.start_year);
            read_if(s, "steps", cfg.sim.steps);
            read_if(s, "repetition_seed_base", cfg.sim.repetition_seed_base);
            read_if(s, "mortality_scale", cfg.sim.mortality_scale);
            read_if(s, "retirement_age", cfg.sim.retirement_age);
            read_if(s, "adulthood_age", cfg.sim.adulthood_age);
            read_if(s, "higher_education_age", cfg.sim.higher_education_age);
            read_if(s, "age_bin_edges", cfg.sim.age_bin_edges);
            if (s.contains("synthesis")) {
                const auto& y = s.at("synthesis");
                auto& syn = cfg.sim.synthesis;
                read_if(y, "municipalities", syn.municipalities);
                read_if(y, "district_of", syn.district_of);
                read_if(y, "individuals_per_municipality", syn.individuals_per_municipality);
                read_if(y, "sectors", syn.sectors);
                read_if(y, "job_slots_per_sector", syn.job_slots_per_sector);
                read_if(y, "couple_fraction", syn.couple_fraction);
                read_if(y, "initial_unemployment", syn.initial_unemployment);
                read_if(y, "initial_inactive", syn.initial_inactive);
                read_if(y, "housing_vacancy", syn.housing_vacancy);
                if (y.contains("age_mix")) {
                    syn.age_mix.clear();
                    for (const auto& b : y.at("age_mix")) {
                        syn.age_mix.push_back({b.at("lo").get<int>(), b.at("hi").get<int>(),
                                               b.at("weight").get<double>()});
                    }
                }
            }
        }
        if (j.contains("ga")) {
            const auto& g = j.at("ga");
            read_if(g, "population_size", cfg.ga.population_size);
            read_if(g, "max_generations", cfg.ga.max_generations);
            read_if(g, "plateau_generations", cfg.ga.plateau_generations);
            read_if(g, "truncation_fraction", cfg.ga.truncation_fraction);
            read_if(g, "mutation_rate", cfg.ga.mutation_rate);
            read_if(g, "mutation_scale", cfg.ga.mutation_scale);
            read_if(g, "repetitions", cfg.ga.repetitions);
            read_if(g, "master_seed", cfg.ga.master_seed);
        }
        if (j.contains("parameters")) {
            std::vector<ParameterDef> defs;
            for (const auto& p : j.at("parameters")) {
                defs.push_back({p.at("name").get<std::string>(), p.at("lower").get<double>(),
                                p.at("upper").get<double>(),
                                parse_kind(p.at("kind").get<std::string>())});
            }
            cfg.space = ParameterSpace(std::move(defs));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::parse, origin + ": " + e.what());
    }

    cfg.sim.check();
    cfg.ga.check();
    return cfg;
}

WorkbenchConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), "'" + path + "'");
}

std::string config_to_json(const WorkbenchConfig& cfg) {
    json syn = {
        {"municipalities", cfg.sim.synthesis.municipalities},
        {"individuals_per_municipality", cfg.sim.synthesis.individuals_per_municipality},
        {"sectors", cfg.sim.synthesis.sectors},
        {"job_slots_per_sector", cfg.sim.synthesis.job_slots_per_sector},
        {"couple_fraction", cfg.sim.synthesis.couple_fraction},
        {"initial_unemployment", cfg.sim.synthesis.initial_unemployment},
        {"initial_inactive", cfg.sim.synthesis.initial_inactive},
        {"housing_vacancy", cfg.sim.synthesis.housing_vacancy},
    };
    if (!cfg.sim.synthesis.district_of.empty()) {
        syn["district_of"] = cfg.sim.synthesis.district_of;
    }
    if (!cfg.sim.synthesis.age_mix.empty()) {
        json mix = json::array();
        for (const auto& b : cfg.sim.synthesis.age_mix) {
            mix.push_back({{"lo", b.lo}, {"hi", b.hi}, {"weight", b.weight}});
        }
        syn["age_mix"] = mix;
    }

    json params = json::array();
    for (const auto& p : cfg.space.params()) {
        params.push_back({{"name", p.name},
                          {"lower", p.lower},
                          {"upper", p.upper},
                          {"kind", p.kind == ParamKind::integer ? "integer" : "real"}});
    }

    json j = {
        {"sim",
         {{"start_year", cfg.sim.start_year},
          {"steps", cfg.sim.steps},
          {"repetition_seed_base", cfg.sim.repetition_seed_base},
          {"mortality_scale", cfg.sim.mortality_scale},
          {"retirement_age", cfg.sim.retirement_age},
          {"adulthood_age", cfg.sim.adulthood_age},
          {"higher_education_age", cfg.sim.higher_education_age},
          {"age_bin_edges", cfg.sim.age_bin_edges},
          {"synthesis", syn}}},
        {"ga",
         {{"population_size", cfg.ga.population_size},
          {"max_generations", cfg.ga.max_generations},
          {"plateau_generations", cfg.ga.plateau_generations},
          {"truncation_fraction", cfg.ga.truncation_fraction},
          {"mutation_rate", cfg.ga.mutation_rate},
          {"mutation_scale", cfg.ga.mutation_scale},
          {"repetitions", cfg.ga.repetitions},
          {"master_seed", cfg.ga.master_seed}}},
        {"parameters", params},
    };
    return j.dump(2) + "\n";
}

void save_config(const std::string& path, const WorkbenchConfig& config) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot open '" + path + "' for writing");
    out << config_to_json(config);
}

} // namespace simcal
