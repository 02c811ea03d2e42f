#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flr/baselines.hpp"
#include "flr/estimator.hpp"
#include "flr/metrics.hpp"
#include "flr/simulator.hpp"

namespace flr {

inline constexpr const char* kVersion = "0.1.0";

/// Constants of the two penalized criteria used throughout an experiment.
/// Known-variance selection additionally takes sigma^2 from the scenario.
/// The defaults match the effective penalty multipliers of the two modes,
/// (1 + theta_kv) = theta_uv (1 + delta_uv).
struct SelectionSettings {
    double theta_kv = 3.725;
    double theta_uv = 4.5;
    double delta_uv = 0.05;
    std::optional<int> max_dim_cap;
};

struct ExperimentConfig {
    std::vector<ScenarioSpec> cells;  // decay x slope x n grid; seeds are
                                      // derived from master_seed and ignored
    std::vector<Method> methods;
    int replicates = 2;
    SelectionSettings selection;
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    bool write_replicates = false;
    std::optional<int> cv_replicate_cap;  // leave-one-out folds are costly

    void validate() const;
};

// Default Table-style grid: {P1,P2,E} x {beta1,beta2} x n in {200,500,1000},
// all four methods, sigma^2 = 0.01.
ExperimentConfig default_experiment_config();

struct CellResult {
    ScenarioSpec scenario;
    double seconds = 0.0;
    std::vector<ReplicateRecord> records;  // per method x replicate, in
                                           // config method order
    int failed_replicates = 0;
    std::vector<std::string> failures;
};

struct ExperimentReport {
    ExperimentConfig config;
    MonteCarloSummary summary;
    std::vector<CellResult> cells;
    std::string version = kVersion;
    std::string started_at;  // wall-clock timestamp, excluded from determinism
    double total_seconds = 0.0;
};

// Runs every cell x replicate in a worker pool: generate -> fpca -> each
// method -> risk report; aggregates per cell. Results are bitwise
// independent of the worker count.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Writes summary.csv, table.csv (x 1e4 presentation scale), report.json and
// optionally replicates.csv under out_dir.
void write_experiment_outputs(const ExperimentReport& report,
                              const std::filesystem::path& out_dir);

struct RateStudyResult {
    double slope = 0.0;
    double intercept = 0.0;
    MonteCarloSummary summary;
    ExperimentReport report;
};

// Replicates the base scenario across sizes in n_list with one method and
// regresses log mean risk on log n.
RateStudyResult run_rate_study(const ScenarioSpec& base, const std::vector<int>& n_list,
                               Method method, int replicates, const SelectionSettings& selection,
                               std::uint64_t master_seed, int threads = 0);

struct FitFileResult {
    SelectionResult selection;      // kv/uv path
    BaselineTable baseline;         // gcv/cv path
    Method method = Method::kv;
    int n_train = 0;
    int n_test = 0;
    Curve beta_hat;
    double held_out_mse = 0.0;      // mean squared prediction error on the
                                    // held-out split; NaN when no split
    std::vector<std::string> warnings;
};

// Real-data entry point: loads CSVs, splits off a held-out fraction
// (seeded shuffle), centres the training part, fits, selects and evaluates
// held-out prediction error. known-variance selection needs sigma2.
FitFileResult fit_file(const std::filesystem::path& curves, const std::filesystem::path& responses,
                       Method method, const SelectionSettings& selection,
                       std::optional<double> sigma2, double holdout_fraction = 0.2,
                       std::uint64_t seed = 1);

}  // namespace flr
