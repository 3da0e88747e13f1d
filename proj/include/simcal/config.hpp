#pragma once

#include <string>

#include "simcal/ga.hpp"
#include "simcal/microsim.hpp"
#include "simcal/param_space.hpp"

namespace simcal {

/// Everything one experiment needs: world synthesis, GA settings, and the
/// parameter space. One JSON file per experiment.
struct WorkbenchConfig {
    SimConfig sim;
    GAConfig ga;
    ParameterSpace space = ParameterSpace::default_space();
};

WorkbenchConfig load_config(const std::string& path);
void save_config(const std::string& path, const WorkbenchConfig& config);

// Parse from a JSON string (used by the loader and by tests).
WorkbenchConfig parse_config(const std::string& json_text, const std::string& origin);
std::string config_to_json(const WorkbenchConfig& config);

} // namespace simcal
