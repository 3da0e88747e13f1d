#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "simcal/rng.hpp"

namespace simcal {

enum class ParamKind { integer, real };

struct ParameterDef {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    ParamKind kind = ParamKind::real;

    double width() const { return upper - lower; }
};

/// Ordered, named set of bounded calibration parameters. The order is
/// canonical: slot i of every Chromosome refers to params()[i].
class ParameterSpace {
public:
    ParameterSpace() = default;
    explicit ParameterSpace(std::vector<ParameterDef> params);

    // The canonical 11-parameter calibration space.
    static ParameterSpace default_space();

    std::size_t size() const { return params_.size(); }
    const ParameterDef& operator[](std::size_t i) const { return params_[i]; }
    const std::vector<ParameterDef>& params() const { return params_; }

    // Index of a parameter by name, or npos.
    std::size_t index_of(const std::string& name) const;
    bool has(const std::string& name) const { return index_of(name) != npos; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<ParameterDef> params_;
};

/// One concrete assignment of all parameters, aligned to a ParameterSpace.
struct Chromosome {
    std::vector<double> values;

    bool operator==(const Chromosome& other) const { return values == other.values; }
};

struct Violation {
    std::string param;
    std::string reason;
};

Chromosome sample_uniform(const ParameterSpace& space, Rng& rng);

// Empty result means the chromosome is valid.
std::vector<Violation> validate(const ParameterSpace& space, const Chromosome& c);

// Clip every slot into range; round integer slots to the nearest whole
// value before clipping. Idempotent, and the result always validates.
Chromosome clamp_and_round(const ParameterSpace& space, const Chromosome& c);

} // namespace simcal
