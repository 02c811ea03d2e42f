#include "flr/estimator.hpp"

#include <cmath>
#include <limits>

#include "flr/errors.hpp"

namespace flr {

std::string method_name(Method m) {
    switch (m) {
        case Method::kv: return "kv";
        case Method::uv: return "uv";
        case Method::gcv: return "gcv";
        case Method::cv: return "cv";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "kv") return Method::kv;
    if (name == "uv") return Method::uv;
    if (name == "gcv") return Method::gcv;
    if (name == "cv") return Method::cv;
    throw ConfigError("unknown method '" + name + "', expected kv, uv, gcv or cv");
}

SelectionConfig SelectionConfig::known_variance(double sigma2, double theta) {
    if (!(sigma2 > 0.0)) throw ConfigError("known-variance mode needs sigma2 > 0");
    if (!(theta > 0.0)) throw ConfigError("known-variance mode needs theta > 0");
    SelectionConfig cfg;
    cfg.mode_ = VarianceMode::known;
    cfg.sigma2_ = sigma2;
    cfg.theta_ = theta;
    return cfg;
}

SelectionConfig SelectionConfig::unknown_variance(double theta, double delta) {
    if (!(theta > 4.0)) throw ConfigError("unknown-variance mode needs theta > 4");
    if (!(delta > 0.0)) throw ConfigError("unknown-variance mode needs delta > 0");
    SelectionConfig cfg;
    cfg.mode_ = VarianceMode::unknown;
    cfg.theta_ = theta;
    cfg.delta_ = delta;
    return cfg;
}

void SelectionConfig::set_max_dim_cap(int cap) {
    if (cap < 1) throw ConfigError("max_dim_cap must be >= 1");
    max_dim_cap_ = cap;
}

double contrast(const FunctionalSample& s, const Curve& t) {
    const Eigen::VectorXd fitted = s.scores(t);
    return (s.responses() - fitted).squaredNorm() / s.size();
}

Curve beta_hat(const FpcaResult& r, int m) {
    if (m < 1) throw DimensionError("beta_hat needs m >= 1, got " + std::to_string(m));
    if (m > r.rank()) {
        throw RankError("beta_hat needs lambda_hat_m > 0; eigenvalue " +
                        std::to_string(r.rank() + 1) + " is the first zero");
    }
    Eigen::VectorXd coeffs(m);
    for (int j = 1; j <= m; ++j) coeffs(j - 1) = r.g_coefficient(j) / r.eigenvalue(j - 1);
    return Curve(r.grid(), r.eigenfunctions().leftCols(m) * coeffs);
}

double eigenvalue_threshold(int n) {
    const double ln_n = std::log(static_cast<double>(n));
    return (2.0 / (static_cast<double>(n) * n)) * (1.0 - 1.0 / (ln_n * ln_n));
}

int max_dimension(const FpcaResult& r, const SelectionConfig& cfg, int n) {
    if (n < 6) throw DomainError("maximal dimension needs n >= 6, got n = " + std::to_string(n));
    const double ln_n = std::log(static_cast<double>(n));
    double cap_real = 20.0 * std::sqrt(n / (ln_n * ln_n * ln_n));
    if (cfg.mode() == SelectionConfig::VarianceMode::unknown) {
        cap_real = std::min(cap_real, n / (cfg.theta() * (1.0 + 2.0 * cfg.delta())));
    }
    int cap = static_cast<int>(std::floor(cap_real));
    if (cfg.max_dim_cap()) cap = std::min(cap, *cfg.max_dim_cap());
    cap = std::min(cap, static_cast<int>(r.eigenvalues().size()));

    const double threshold = eigenvalue_threshold(n);
    if (cap < 1 || r.eigenvalues().size() == 0 || r.eigenvalue(0) < threshold) {
        throw DegenerateSampleError("no admissible dimension: largest eigenvalue below the s_n threshold");
    }
    int n_hat = 1;
    while (n_hat < cap && r.eigenvalue(n_hat) >= threshold) ++n_hat;
    return n_hat;
}

double penalty(const SelectionConfig& cfg, int m, int n, std::optional<double> sigma2_m) {
    if (m < 1) throw DomainError("penalty needs m >= 1, got " + std::to_string(m));
    if (n < 1) throw DomainError("penalty needs n >= 1, got " + std::to_string(n));
    if (cfg.mode() == SelectionConfig::VarianceMode::known) {
        return (1.0 + cfg.theta()) * cfg.sigma2() * m / n;
    }
    if (!sigma2_m) throw DomainError("unknown-variance penalty needs sigma2_m");
    return cfg.theta() * (1.0 + cfg.delta()) * (*sigma2_m) * m / n;
}

SelectionResult select_dimension(const FunctionalSample& s, const FpcaResult& r,
                                 const SelectionConfig& cfg) {
    const int n = s.size();
    int n_hat = max_dimension(r, cfg, n);
    // lambda_hat_N >= s_n > 0 already forces N <= rank; guarded regardless.
    n_hat = std::min(n_hat, r.rank());

    const bool known = cfg.mode() == SelectionConfig::VarianceMode::known;

    SelectionResult result;
    result.max_dim = n_hat;
    result.criterion_name = known ? Method::kv : Method::uv;
    result.table.reserve(static_cast<size_t>(n_hat));

    // Fitted responses grow one basis direction at a time.
    Eigen::VectorXd fitted = Eigen::VectorXd::Zero(n);
    const double w = s.grid()->weight();
    double best = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= n_hat; ++m) {
        const double coeff = r.g_coefficient(m) / r.eigenvalue(m - 1);
        fitted += coeff * (w * (s.curves() * r.eigenfunctions().col(m - 1)));
        DimensionRecord rec;
        rec.m = m;
        rec.contrast = (s.responses() - fitted).squaredNorm() / n;
        rec.sigma2_m = rec.contrast;
        if (known) {
            rec.penalty = penalty(cfg, m, n);
            rec.criterion = rec.contrast + rec.penalty;
        } else {
            rec.penalty = penalty(cfg, m, n, rec.sigma2_m);
            rec.criterion = rec.contrast * (1.0 + cfg.theta() * (1.0 + cfg.delta()) * m / n);
        }
        if (rec.criterion < best) {
            best = rec.criterion;
            result.selected_m = m;
        }
        result.table.push_back(rec);
    }
    result.beta_hat = beta_hat(r, result.selected_m);
    return result;
}

}  // namespace flr
