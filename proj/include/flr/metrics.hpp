#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flr/fpca.hpp"
#include "flr/simulator.hpp"

namespace flr {

/// Risk diagnostics of one fitted slope against the simulation truth.
struct RiskReport {
    double prediction_error = 0.0;  // ||beta_hat - beta||_Gamma^2
    double empirical_error = 0.0;   // ||beta_hat - beta||_{Gamma_n}^2
    double l2_error = 0.0;          // ||beta_hat - beta||^2
    int selected_m = 0;
    int oracle_m = 0;
    double oracle_risk = 0.0;
};

struct SummaryCell {
    std::string method;
    std::string decay;
    std::string slope;
    int n = 0;
    double mean_risk = 0.0;
    double ci_halfwidth = 0.0;
    int replicate_count = 0;
    std::optional<double> agreement_rate_kv_uv;
};

struct MonteCarloSummary {
    std::vector<SummaryCell> cells;
    std::vector<std::string> warnings;
};

/// Replicate-level record fed to the aggregator.
struct ReplicateRecord {
    std::string method;
    std::string decay;
    std::string slope;
    int n = 0;
    int replicate_index = 0;
    RiskReport risk;
};

// ||f||_Gamma^2 = sum_j lambda_j <f, psi_j>^2 over the supplied eigensystem.
double gamma_norm_sq(const Curve& f, const EigenSystem& sys);

// ||f||_{Gamma_n}^2 = (1/n) sum_i <f, X_i>^2.
double empirical_norm_sq(const Curve& f, const FunctionalSample& s);

// Dimension minimizing the true prediction error among m = 1..max_m,
// ties toward the smallest m. Returns (m, risk at m).
std::pair<int, double> oracle_dimension(const FpcaResult& r, const Curve& true_beta,
                                        const EigenSystem& sys, int max_m);

// Mean and 1.96 * sd / sqrt(R) half-width per cell; cells are emitted in
// first-appearance order. Cells with fewer than 2 replicates are dropped
// with a warning. When both kv and uv records exist for a cell, the
// agreement rate (fraction of replicates selecting the same dimension)
// is attached to both.
MonteCarloSummary aggregate(const std::vector<ReplicateRecord>& records);

// Least squares fit of log(risk) against log(n); returns (slope, intercept).
std::pair<double, double> rate_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace flr
