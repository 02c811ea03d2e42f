#include "flr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "flr/errors.hpp"
#include "flr/estimator.hpp"

namespace flr {

double gamma_norm_sq(const Curve& f, const EigenSystem& sys) {
    require_same_grid(f.grid, sys.grid);
    const Eigen::VectorXd coeffs = sys.grid->weight() * (sys.functions.transpose() * f.values);
    return sys.lambdas.dot(coeffs.cwiseAbs2());
}

double empirical_norm_sq(const Curve& f, const FunctionalSample& s) {
    return s.scores(f).squaredNorm() / s.size();
}

std::pair<int, double> oracle_dimension(const FpcaResult& r, const Curve& true_beta,
                                        const EigenSystem& sys, int max_m) {
    if (max_m < 1) throw DimensionError("oracle search needs max_m >= 1");
    const int upper = std::min(max_m, r.rank());
    if (upper < 1) throw RankError("oracle search needs at least one positive eigenvalue");
    int best_m = 1;
    double best_risk = gamma_norm_sq(beta_hat(r, 1) - true_beta, sys);
    for (int m = 2; m <= upper; ++m) {
        const double risk = gamma_norm_sq(beta_hat(r, m) - true_beta, sys);
        if (risk < best_risk) {
            best_risk = risk;
            best_m = m;
        }
    }
    return {best_m, best_risk};
}

MonteCarloSummary aggregate(const std::vector<ReplicateRecord>& records) {
    using CellKey = std::tuple<std::string, std::string, std::string, int>;
    std::vector<CellKey> order;
    std::map<CellKey, std::vector<double>> risks;
    // Per data cell: replicate -> selected m for kv and uv.
    using DataKey = std::tuple<std::string, std::string, int>;
    std::map<DataKey, std::map<int, int>> kv_dims, uv_dims;

    for (const auto& rec : records) {
        CellKey key{rec.method, rec.decay, rec.slope, rec.n};
        auto [it, inserted] = risks.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(rec.risk.prediction_error);
        DataKey dkey{rec.decay, rec.slope, rec.n};
        if (rec.method == "kv") kv_dims[dkey][rec.replicate_index] = rec.risk.selected_m;
        if (rec.method == "uv") uv_dims[dkey][rec.replicate_index] = rec.risk.selected_m;
    }

    MonteCarloSummary summary;
    for (const auto& key : order) {
        const auto& values = risks[key];
        const auto& [method, decay, slope, n] = key;
        if (values.size() < 2) {
            summary.warnings.push_back("cell (" + method + "," + decay + "," + slope + ",n=" +
                                       std::to_string(n) + ") has fewer than 2 replicates; omitted");
            continue;
        }
        const double count = static_cast<double>(values.size());
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= count;
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= (count - 1.0);

        SummaryCell cell;
        cell.method = method;
        cell.decay = decay;
        cell.slope = slope;
        cell.n = n;
        cell.mean_risk = mean;
        cell.ci_halfwidth = 1.96 * std::sqrt(var) / std::sqrt(count);
        cell.replicate_count = static_cast<int>(values.size());

        if (method == "kv" || method == "uv") {
            DataKey dkey{decay, slope, n};
            auto kv_it = kv_dims.find(dkey);
            auto uv_it = uv_dims.find(dkey);
            if (kv_it != kv_dims.end() && uv_it != uv_dims.end()) {
                int common = 0, agree = 0;
                for (const auto& [rep, m_kv] : kv_it->second) {
                    auto match = uv_it->second.find(rep);
                    if (match == uv_it->second.end()) continue;
                    ++common;
                    if (match->second == m_kv) ++agree;
                }
                if (common > 0) {
                    cell.agreement_rate_kv_uv = static_cast<double>(agree) / common;
                }
            }
        }
        summary.cells.push_back(std::move(cell));
    }
    return summary;
}

std::pair<double, double> rate_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DomainError("rate fit needs at least 3 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [n, risk] : points) {
        if (!(n > 0.0) || !(risk > 0.0)) {
            throw DomainError("rate fit needs positive sample sizes and risks");
        }
        const double x = std::log(n);
        const double y = std::log(risk);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(points.size());
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("rate fit needs at least two distinct sample sizes");
    const double slope = (count * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / count;
    return {slope, intercept};
}

}  // namespace flr
