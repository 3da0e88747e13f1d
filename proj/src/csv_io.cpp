#include "simcal/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "simcal/error.hpp"

namespace simcal {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

struct CsvReader {
    std::string path;
    std::ifstream in;
    std::vector<std::string> header;
    int line_number = 0;

    explicit CsvReader(const std::string& p) : path(p), in(p) {
        if (!in) throw Error(Errc::io, "cannot open '" + path + "' for reading");
        std::string line;
        if (!std::getline(in, line)) throw Error(Errc::parse, "'" + path + "' is empty");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        header = split_line(line);
        line_number = 1;
    }

    void expect_header(const std::vector<std::string>& expected) {
        if (header != expected) {
            std::string want;
            for (const auto& h : expected) {
                if (!want.empty()) want += ",";
                want += h;
            }
            throw Error(Errc::parse, "'" + path + "': expected header '" + want + "'");
        }
    }

    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_number;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            fields = split_line(line);
            if (fields.size() != header.size()) {
                throw Error(Errc::parse, "'" + path + "' line " + std::to_string(line_number) +
                                             ": expected " + std::to_string(header.size()) +
                                             " fields, got " + std::to_string(fields.size()));
            }
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::parse,
                    "'" + path + "' line " + std::to_string(line_number) + ": " + what);
    }

    double to_double(const std::string& s) const {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') fail("not a number: '" + s + "'");
        return v;
    }

    long to_long(const std::string& s) const {
        char* end = nullptr;
        const long v = std::strtol(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0') fail("not an integer: '" + s + "'");
        return v;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot open '" + path + "' for writing");
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

IndicatorSeries load_indicator_csv(const std::string& path) {
    CsvReader reader(path);
    reader.expect_header({"indicator", "subkey", "geo_level", "geo_id", "year", "value"});
    IndicatorSeries series;
    std::vector<std::string> f;
    while (reader.next(f)) {
        IndicatorKey key;
        key.indicator = parse_indicator(f[0]);
        key.subkey = f[1];
        key.level = parse_geo_level(f[2]);
        if (key.level != indicator_level(key.indicator)) {
            reader.fail(std::string("indicator '") + f[0] + "' is reported at " +
                        geo_level_name(indicator_level(key.indicator)) + " level, not " + f[2]);
        }
        key.geo = static_cast<std::int32_t>(reader.to_long(f[3]));
        key.year = static_cast<std::int32_t>(reader.to_long(f[4]));
        series.set(key, reader.to_double(f[5]));
    }
    return series;
}

void write_indicator_csv(const std::string& path, const IndicatorSeries& series) {
    auto out = open_out(path);
    out << "indicator,subkey,geo_level,geo_id,year,value\n";
    for (const auto& [key, value] : series.entries) {
        out << indicator_name(key.indicator) << ',' << key.subkey << ','
            << geo_level_name(key.level) << ',' << key.geo << ',' << key.year << ','
            << format_double(value) << '\n';
    }
}

void write_trajectory_csv(const std::string& path, const std::vector<GenerationRecord>& records) {
    auto out = open_out(path);
    out << "generation,best,mean,evaluations,cache_hits\n";
    for (const auto& r : records) {
        out << r.generation << ',' << format_double(r.best_fitness) << ','
            << format_double(r.mean_fitness) << ',' << r.evaluations << ',' << r.cache_hits
            << '\n';
    }
}

std::vector<GenerationRecord> load_trajectory_csv(const std::string& path) {
    CsvReader reader(path);
    reader.expect_header({"generation", "best", "mean", "evaluations", "cache_hits"});
    std::vector<GenerationRecord> records;
    std::vector<std::string> f;
    while (reader.next(f)) {
        GenerationRecord r;
        r.generation = static_cast<int>(reader.to_long(f[0]));
        r.best_fitness = reader.to_double(f[1]);
        r.mean_fitness = reader.to_double(f[2]);
        r.evaluations = static_cast<std::uint64_t>(reader.to_long(f[3]));
        r.cache_hits = static_cast<std::uint64_t>(reader.to_long(f[4]));
        records.push_back(r);
    }
    return records;
}

void write_params_csv(const std::string& path, const ParameterSpace& space, const Chromosome& c) {
    if (c.values.size() != space.size()) {
        throw Error(Errc::invalid_argument, "chromosome length does not match parameter space");
    }
    auto out = open_out(path);
    out << "name,value\n";
    for (std::size_t i = 0; i < space.size(); ++i) {
        out << space[i].name << ',' << format_double(c.values[i]) << '\n';
    }
}

Chromosome load_params_csv(const std::string& path, const ParameterSpace& space) {
    CsvReader reader(path);
    reader.expect_header({"name", "value"});
    std::vector<bool> seen(space.size(), false);
    Chromosome c;
    c.values.assign(space.size(), 0.0);
    std::vector<std::string> f;
    while (reader.next(f)) {
        const auto i = space.index_of(f[0]);
        if (i == ParameterSpace::npos) reader.fail("unknown parameter '" + f[0] + "'");
        if (seen[i]) reader.fail("duplicate parameter '" + f[0] + "'");
        seen[i] = true;
        c.values[i] = reader.to_double(f[1]);
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!seen[i]) {
            throw Error(Errc::parse, "'" + path + "': missing parameter '" + space[i].name + "'");
        }
    }
    const auto violations = validate(space, c);
    if (!violations.empty()) {
        throw Error(Errc::invalid_argument, "'" + path + "': " + violations.front().param + " " +
                                                violations.front().reason);
    }
    return c;
}

void write_samples_csv(const std::string& path, const SampleMatrix& m) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < m.space.size(); ++i) out << m.space[i].name << ',';
    out << "fitness\n";
    for (std::size_t row = 0; row < m.rows(); ++row) {
        for (double v : m.chromosomes[row].values) out << format_double(v) << ',';
        out << format_double(m.fitness[row]) << '\n';
    }
}

SampleMatrix load_samples_csv(const std::string& path, const ParameterSpace& space) {
    CsvReader reader(path);
    std::vector<std::string> expected;
    for (std::size_t i = 0; i < space.size(); ++i) expected.push_back(space[i].name);
    expected.push_back("fitness");
    reader.expect_header(expected);

    SampleMatrix m;
    m.space = space;
    std::vector<std::string> f;
    while (reader.next(f)) {
        Chromosome c;
        c.values.reserve(space.size());
        for (std::size_t i = 0; i < space.size(); ++i) c.values.push_back(reader.to_double(f[i]));
        m.chromosomes.push_back(std::move(c));
        m.fitness.push_back(reader.to_double(f[space.size()]));
    }
    return m;
}

void write_analysis_csv(const std::string& path, const CorrelationReport& corr,
                        const RegressionReport& reg) {
    if (corr.entries.size() + 1 != reg.terms.size()) {
        throw Error(Errc::invalid_argument, "correlation and regression reports disagree in size");
    }
    auto out = open_out(path);
    out << "term,pearson_r,r_squared,coefficient,std_error,t_stat,p_value\n";
    out << "intercept,,," << format_double(reg.terms[0].coefficient) << ','
        << format_double(reg.terms[0].std_error) << ',' << format_double(reg.terms[0].t_stat)
        << ',' << format_double(reg.terms[0].p_value) << '\n';
    for (std::size_t i = 0; i < corr.entries.size(); ++i) {
        const auto& c = corr.entries[i];
        const auto& t = reg.terms[i + 1];
        out << c.param << ',';
        if (c.defined) {
            out << format_double(c.r) << ',' << format_double(c.r_squared);
        } else {
            out << ',';
        }
        out << ',' << format_double(t.coefficient) << ',' << format_double(t.std_error) << ','
            << format_double(t.t_stat) << ',' << format_double(t.p_value) << '\n';
    }
}

void write_analysis_txt(const std::string& path, const CorrelationReport& corr,
                        const RegressionReport& reg) {
    auto out = open_out(path);
    char buf[256];

    out << "Correlation between input parameters and fitness\n";
    out << "------------------------------------------------\n";
    std::snprintf(buf, sizeof(buf), "%-28s %12s %10s\n", "parameter", "pearson_r", "r^2");
    out << buf;
    for (const auto& e : corr.entries) {
        if (e.defined) {
            std::snprintf(buf, sizeof(buf), "%-28s %12.4f %10.4f\n", e.param.c_str(), e.r,
                          e.r_squared);
        } else {
            std::snprintf(buf, sizeof(buf), "%-28s %12s %10s\n", e.param.c_str(), "undefined",
                          "undefined");
        }
        out << buf;
    }

    std::snprintf(buf, sizeof(buf),
                  "\nLinear regression meta-model (R^2 = %.4f, n = %d, dof = %d)\n",
                  reg.r_squared, reg.observations, reg.dof);
    out << buf;
    out << "-----------------------------------------------------------\n";
    std::snprintf(buf, sizeof(buf), "%-28s %12s %12s %10s %10s\n", "term", "coefficient",
                  "std_error", "t_stat", "p_value");
    out << buf;
    for (const auto& t : reg.terms) {
        std::snprintf(buf, sizeof(buf), "%-28s %12.4f %12.4f %10.2f %10.4f\n", t.name.c_str(),
                      t.coefficient, t.std_error, t.t_stat, t.p_value);
        out << buf;
    }
}

} // namespace simcal
