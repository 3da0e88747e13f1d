#include "simcal/indicators.hpp"

#include "simcal/error.hpp"

namespace simcal {

namespace {

struct IndicatorInfo {
    Indicator indicator;
    const char* name;
    GeoLevel level;
    bool percentage;
};

constexpr IndicatorInfo kIndicators[] = {
    {Indicator::age_structure, "age_structure", GeoLevel::municipality, false},
    {Indicator::births_deaths, "births_deaths", GeoLevel::municipality, false},
    {Indicator::out_migration, "out_migration", GeoLevel::municipality, false},
    {Indicator::household_structure, "household_structure", GeoLevel::district, true},
    {Indicator::employment, "employment", GeoLevel::municipality, false},
    {Indicator::unemployment, "unemployment", GeoLevel::municipality, false},
    {Indicator::sector_activity, "sector_activity", GeoLevel::district, true},
    {Indicator::workplace, "workplace", GeoLevel::municipality, false},
};

const IndicatorInfo& info(Indicator ind) {
    return kIndicators[static_cast<std::size_t>(ind)];
}

} // namespace

const char* indicator_name(Indicator ind) { return info(ind).name; }

const char* geo_level_name(GeoLevel level) {
    return level == GeoLevel::municipality ? "municipality" : "district";
}

Indicator parse_indicator(const std::string& name) {
    for (const auto& e : kIndicators) {
        if (name == e.name) return e.indicator;
    }
    std::string accepted;
    for (const auto& e : kIndicators) {
        if (!accepted.empty()) accepted += ", ";
        accepted += e.name;
    }
    throw Error(Errc::parse, "unknown indicator '" + name + "'; accepted names: " + accepted);
}

GeoLevel parse_geo_level(const std::string& name) {
    if (name == "municipality") return GeoLevel::municipality;
    if (name == "district") return GeoLevel::district;
    throw Error(Errc::parse,
                "unknown geo level '" + name + "'; accepted names: municipality, district");
}

GeoLevel indicator_level(Indicator ind) { return info(ind).level; }

bool indicator_is_percentage(Indicator ind) { return info(ind).percentage; }

IndicatorSeries mean_series(std::span<const IndicatorSeries> runs) {
    IndicatorSeries out;
    if (runs.empty()) return out;
    for (const auto& run : runs) {
        for (const auto& [key, value] : run.entries) {
            out.entries[key] += value;
        }
    }
    const double n = static_cast<double>(runs.size());
    for (auto& [key, value] : out.entries) {
        value /= n;
    }
    return out;
}

} // namespace simcal
