#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flr/fpca.hpp"
#include "flr/sample.hpp"

namespace flr {

enum class Method { kv, uv, gcv, cv };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// Constants of the penalized selection criterion.
///
/// Known-variance mode uses pen(m) = (1+theta) sigma^2 m / n with theta > 0.
/// Unknown-variance mode uses pen(m) = theta (1+delta) sigma2_m m / n with
/// theta > 4 and delta > 0, where sigma2_m is the per-dimension residual
/// variance estimate.
class SelectionConfig {
  public:
    enum class VarianceMode { known, unknown };

    // Default constants make the two penalties price dimensions equally
    // ((1 + theta_kv) = theta_uv (1 + delta) = 4.725), which keeps the two
    // criteria selecting the same dimension on most samples.
    static SelectionConfig known_variance(double sigma2, double theta = 3.725);
    static SelectionConfig unknown_variance(double theta = 4.5, double delta = 0.05);

    VarianceMode mode() const { return mode_; }
    double sigma2() const { return sigma2_; }
    double theta() const { return theta_; }
    double delta() const { return delta_; }
    const std::optional<int>& max_dim_cap() const { return max_dim_cap_; }
    void set_max_dim_cap(int cap);

  private:
    SelectionConfig() = default;

    VarianceMode mode_ = VarianceMode::known;
    double sigma2_ = 0.0;
    double theta_ = 0.0;
    double delta_ = 0.0;
    std::optional<int> max_dim_cap_;
};

/// One row of the selection table.
struct DimensionRecord {
    int m = 0;
    double contrast = 0.0;   // gamma_n(beta_hat_m)
    double penalty = 0.0;
    double criterion = 0.0;
    double sigma2_m = 0.0;   // residual variance estimate, = contrast
};

struct SelectionResult {
    int selected_m = 0;
    Curve beta_hat;
    int max_dim = 0;
    std::vector<DimensionRecord> table;
    Method criterion_name = Method::kv;
};

// Least square contrast gamma_n(t) = (1/n) sum_i (Y_i - <t, X_i>)^2.
double contrast(const FunctionalSample& s, const Curve& t);

// Projection estimator beta_hat_m = sum_{j<=m} <g_hat,psi_hat_j>/lambda_hat_j psi_hat_j.
// Requires lambda_hat_m > 0.
Curve beta_hat(const FpcaResult& r, int m);

// Eigenvalue floor s_n = (2/n^2)(1 - 1/ln^2 n) below which dimensions are
// not trusted.
double eigenvalue_threshold(int n);

// Largest admissible dimension: N <= 20 sqrt(n/ln^3 n) (additionally
// N <= n/(theta(1+2delta)) in unknown-variance mode) and lambda_hat_N >= s_n.
// Requires n >= 6.
int max_dimension(const FpcaResult& r, const SelectionConfig& cfg, int n);

// Mode-appropriate penalty; sigma2_m is required in unknown-variance mode.
double penalty(const SelectionConfig& cfg, int m, int n,
               std::optional<double> sigma2_m = std::nullopt);

// Evaluates the criterion for every m = 1..N_hat and returns the minimizer
// (ties broken toward the smallest m). In unknown-variance mode the
// criterion is the product form gamma_n(beta_hat_m) (1 + theta(1+delta) m/n).
SelectionResult select_dimension(const FunctionalSample& s, const FpcaResult& r,
                                 const SelectionConfig& cfg);

}  // namespace flr
