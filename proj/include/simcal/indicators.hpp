#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace simcal {

// The eight output indicators the calibration compares against observed
// data. Household structure and sector shares are district-level
// percentages; everything else is a municipality-level count.
enum class Indicator : std::uint8_t {
    age_structure,
    births_deaths,
    out_migration,
    household_structure,
    employment,
    unemployment,
    sector_activity,
    workplace,
};

enum class GeoLevel : std::uint8_t { municipality, district };

const char* indicator_name(Indicator ind);
const char* geo_level_name(GeoLevel level);

// Throws Errc::parse with the list of accepted names on unknown input.
Indicator parse_indicator(const std::string& name);
GeoLevel parse_geo_level(const std::string& name);

// Geographic level each indicator is reported at.
GeoLevel indicator_level(Indicator ind);
bool indicator_is_percentage(Indicator ind);

struct IndicatorKey {
    Indicator indicator;
    std::string subkey; // age bin, sector, household size, "births"/"deaths"
    GeoLevel level;
    std::int32_t geo = 0;
    std::int32_t year = 0;

    auto operator<=>(const IndicatorKey&) const = default;
};

/// Simulated or observed values keyed by (indicator, subkey, geography, year).
struct IndicatorSeries {
    std::map<IndicatorKey, double> entries;

    void set(const IndicatorKey& key, double value) { entries[key] = value; }
    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

// Entrywise mean over the union of keys; a key missing from a run
// contributes zero. Simulation runs over the same world layout emit
// identical key grids, so in practice every key is present everywhere.
IndicatorSeries mean_series(std::span<const IndicatorSeries> runs);

} // namespace simcal
