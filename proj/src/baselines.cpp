#include "flr/baselines.hpp"

#include <cmath>
#include <limits>

#include "flr/errors.hpp"

namespace flr {

namespace {

int argmin_record(const std::vector<BaselineRecord>& table) {
    double best = std::numeric_limits<double>::infinity();
    int best_m = 0;
    for (const auto& rec : table) {
        if (rec.score < best) {
            best = rec.score;
            best_m = rec.m;
        }
    }
    return best_m;
}

}  // namespace

BaselineTable gcv_select(const FunctionalSample& s, const FpcaResult& r, int max_m) {
    if (max_m < 1 || max_m > r.rank()) {
        throw DimensionError("gcv needs 1 <= max_m <= rank, got max_m = " + std::to_string(max_m) +
                             " with rank " + std::to_string(r.rank()));
    }
    const int n = s.size();
    const double w = s.grid()->weight();

    BaselineTable out;
    out.method = Method::gcv;
    out.table.reserve(static_cast<size_t>(max_m));
    Eigen::VectorXd fitted = Eigen::VectorXd::Zero(n);
    for (int m = 1; m <= max_m; ++m) {
        const double coeff = r.g_coefficient(m) / r.eigenvalue(m - 1);
        fitted += coeff * (w * (s.curves() * r.eigenfunctions().col(m - 1)));
        if (m >= n) continue;  // degenerate denominator
        const double rss = (s.responses() - fitted).squaredNorm();
        const double denom = 1.0 - static_cast<double>(m) / n;
        out.table.push_back({m, rss / (denom * denom)});
    }
    if (out.table.empty()) {
        throw DegenerateSampleError("every gcv dimension has m >= n");
    }
    out.selected_m = argmin_record(out.table);
    return out;
}

BaselineTable cv_select(const FunctionalSample& s, int max_m) {
    const int n = s.size();
    if (n < 3) throw InsufficientDataError("leave-one-out cv needs n >= 3, got " + std::to_string(n));
    if (max_m < 1) throw DimensionError("cv needs max_m >= 1");

    const Eigen::MatrixXd& X = s.curves();
    const Eigen::VectorXd& y = s.responses();
    const int p = s.grid()->size();
    const double w = s.grid()->weight();

    Eigen::VectorXd sq_error_sum = Eigen::VectorXd::Zero(max_m);
    int folds_used = 0;
    int skipped = 0;

    Eigen::MatrixXd fold_X(n - 1, p);
    Eigen::VectorXd fold_y(n - 1);
    for (int i = 0; i < n; ++i) {
        int row = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            fold_X.row(row) = X.row(j);
            fold_y(row) = y(j);
            ++row;
        }
        FunctionalSample fold(s.grid(), fold_X, fold_y);
        const Eigen::RowVectorXd mean_curve = fold_X.colwise().mean();
        const double mean_y = fold_y.mean();
        FunctionalSample centred = center_sample(fold);
        FpcaResult fpca = fit_fpca(centred);
        if (fpca.rank() == 0) {
            ++skipped;
            continue;
        }
        const int m_cap = std::min(max_m, fpca.rank());

        // Per-dimension increments of the held-out prediction.
        const Eigen::VectorXd held_out = X.row(i).transpose() - mean_curve.transpose();
        double prediction = mean_y;
        int j = 1;
        for (int m = 1; m <= max_m; ++m) {
            for (; j <= std::min(m, m_cap); ++j) {
                const double coeff = fpca.g_coefficient(j) / fpca.eigenvalue(j - 1);
                prediction += coeff * (w * fpca.eigenfunctions().col(j - 1).dot(held_out));
            }
            const double err = y(i) - prediction;
            sq_error_sum(m - 1) += err * err;
        }
        ++folds_used;
    }
    if (folds_used == 0) {
        throw DegenerateSampleError("every leave-one-out fold was rank-deficient");
    }

    BaselineTable out;
    out.method = Method::cv;
    out.skipped_folds = skipped;
    out.table.reserve(static_cast<size_t>(max_m));
    for (int m = 1; m <= max_m; ++m) {
        out.table.push_back({m, sq_error_sum(m - 1) / folds_used});
    }
    out.selected_m = argmin_record(out.table);
    return out;
}

}  // namespace flr
