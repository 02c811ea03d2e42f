#pragma once

#include <nlohmann/json_fwd.hpp>

#include "flr/experiment.hpp"

namespace flr {

// Scenario file: {decay, J, p, slope, sigma2, n, seed} plus the optional
// beta2_exponent_sign switch. Unknown fields are rejected.
ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioSpec& s);

// Experiment config. Cells come either from an explicit "cells" array or a
// "grid" shorthand {decays, slopes, n} expanded in row-major order; sigma2,
// J and p act as per-file defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);

nlohmann::json summary_to_json(const MonteCarloSummary& summary);
nlohmann::json report_to_json(const ExperimentReport& report);

ScenarioSpec load_scenario_file(const std::filesystem::path& path);
ExperimentConfig load_experiment_config_file(const std::filesystem::path& path);

}  // namespace flr
