#include "simcal/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "simcal/error.hpp"

namespace simcal {

ParameterSpace::ParameterSpace(std::vector<ParameterDef> params) : params_(std::move(params)) {
    if (params_.empty()) {
        throw Error(Errc::invalid_argument, "parameter space must not be empty");
    }
    std::set<std::string> names;
    for (const auto& p : params_) {
        if (!(p.lower < p.upper)) {
            throw Error(Errc::invalid_argument,
                        "parameter '" + p.name + "': lower bound must be below upper bound");
        }
        if (p.kind == ParamKind::integer &&
            (p.lower != std::floor(p.lower) || p.upper != std::floor(p.upper))) {
            throw Error(Errc::invalid_argument,
                        "parameter '" + p.name + "': integer bounds must be whole numbers");
        }
        if (!names.insert(p.name).second) {
            throw Error(Errc::invalid_argument, "duplicate parameter name '" + p.name + "'");
        }
    }
}

ParameterSpace ParameterSpace::default_space() {
    return ParameterSpace({
        {"ageMinHavingChild", 15, 20, ParamKind::integer},
        {"ageMaxHavingChild", 40, 50, ParamKind::integer},
        {"nbChild", 1, 6, ParamKind::integer},
        {"probabilityToMakeCouple", 0, 0.05, ParamKind::real},
        {"nbJoinTrials", 1, 50, ParamKind::integer},
        {"splittingProba", 0, 1, ParamKind::real},
        {"probToAcceptNewResidence", 0, 1, ParamKind::real},
        {"resSatisfactMargin", 0, 3, ParamKind::integer},
        {"probStudyOutside", 0, 1, ParamKind::real},
        {"probLookingRegionalJobs", 0, 1, ParamKind::real},
        {"jobVacancyRate", 0, 1, ParamKind::real},
    });
}

std::size_t ParameterSpace::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i].name == name) return i;
    }
    return npos;
}

Chromosome sample_uniform(const ParameterSpace& space, Rng& rng) {
    Chromosome c;
    c.values.reserve(space.size());
    for (const auto& p : space.params()) {
        if (p.kind == ParamKind::integer) {
            c.values.push_back(static_cast<double>(
                uniform_int(rng, static_cast<long>(p.lower), static_cast<long>(p.upper))));
        } else {
            c.values.push_back(uniform_real(rng, p.lower, p.upper));
        }
    }
    return c;
}

std::vector<Violation> validate(const ParameterSpace& space, const Chromosome& c) {
    std::vector<Violation> out;
    if (c.values.size() != space.size()) {
        out.push_back({"<chromosome>", "expected " + std::to_string(space.size()) +
                                           " values, got " + std::to_string(c.values.size())});
        return out;
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& p = space[i];
        const double v = c.values[i];
        if (!std::isfinite(v)) {
            out.push_back({p.name, "non-finite value"});
            continue;
        }
        if (v < p.lower) {
            out.push_back({p.name, "below lower bound " + std::to_string(p.lower)});
        } else if (v > p.upper) {
            out.push_back({p.name, "above upper bound " + std::to_string(p.upper)});
        }
        if (p.kind == ParamKind::integer && v != std::floor(v)) {
            out.push_back({p.name, "non-integer value"});
        }
    }
    return out;
}

Chromosome clamp_and_round(const ParameterSpace& space, const Chromosome& c) {
    if (c.values.size() != space.size()) {
        throw Error(Errc::invalid_argument, "chromosome length does not match parameter space");
    }
    Chromosome out = c;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& p = space[i];
        double v = out.values[i];
        if (!std::isfinite(v)) v = p.lower;
        if (p.kind == ParamKind::integer) v = std::round(v);
        v = std::clamp(v, p.lower, p.upper);
        out.values[i] = v;
    }
    return out;
}

} // namespace simcal
