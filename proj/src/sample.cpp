#include "flr/sample.hpp"

#include <utility>

#include "flr/csv.hpp"
#include "flr/errors.hpp"

namespace flr {

FunctionalSample::FunctionalSample(GridPtr grid, Eigen::MatrixXd curves, Eigen::VectorXd responses,
                                   bool centred)
    : grid_(std::move(grid)),
      curves_(std::move(curves)),
      responses_(std::move(responses)),
      centred_(centred) {
    if (!grid_) throw DomainError("sample needs a grid");
    if (curves_.rows() < 1) throw InsufficientDataError("sample needs at least one curve");
    if (curves_.cols() != grid_->size()) {
        throw GridMismatchError("curves have " + std::to_string(curves_.cols()) +
                                " columns on a grid of " + std::to_string(grid_->size()) +
                                " points");
    }
    if (responses_.size() != curves_.rows()) {
        throw DomainError("sample has " + std::to_string(curves_.rows()) + " curves but " +
                          std::to_string(responses_.size()) + " responses");
    }
    if (!curves_.allFinite() || !responses_.allFinite()) {
        throw DomainError("sample values must be finite");
    }
}

Eigen::VectorXd FunctionalSample::scores(const Curve& f) const {
    require_same_grid(grid_, f.grid);
    return grid_->weight() * (curves_ * f.values);
}

FunctionalSample center_sample(const FunctionalSample& s) {
    if (s.size() < 2) {
        throw InsufficientDataError("centering needs n >= 2, got n = " +
                                    std::to_string(s.size()));
    }
    if (s.centred()) return s;  // makes centering exactly idempotent
    Eigen::MatrixXd X = s.curves();
    Eigen::RowVectorXd mean_curve = X.colwise().mean();
    X.rowwise() -= mean_curve;
    Eigen::VectorXd y = s.responses();
    y.array() -= y.mean();
    return FunctionalSample(s.grid(), std::move(X), std::move(y), /*centred=*/true);
}

FunctionalSample load_sample_csv(const std::filesystem::path& curve_path,
                                 const std::filesystem::path& response_path) {
    auto rows = read_numeric_csv(curve_path);
    if (rows.size() < 2) {
        throw ParseError(curve_path.filename().string() +
                         ": needs a header row plus at least one curve row");
    }
    GridPtr grid;
    try {
        grid = std::make_shared<Grid>(rows.front());
    } catch (const DomainError& e) {
        throw ParseError(curve_path.filename().string() + ": bad grid header: " + e.what());
    }
    const int n = static_cast<int>(rows.size()) - 1;
    const int p = grid->size();
    Eigen::MatrixXd X(n, p);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < p; ++k) X(i, k) = rows[static_cast<size_t>(i) + 1][static_cast<size_t>(k)];
    }

    auto resp = read_numeric_column(response_path);
    if (static_cast<int>(resp.size()) != n) {
        throw ParseError("count mismatch: " + std::to_string(n) + " curves in " +
                         curve_path.filename().string() + " vs " + std::to_string(resp.size()) +
                         " responses in " + response_path.filename().string());
    }
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(resp.data(), n);
    return FunctionalSample(std::move(grid), std::move(X), std::move(y));
}

void save_sample_csv(const FunctionalSample& s, const std::filesystem::path& curve_path,
                     const std::filesystem::path& response_path) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(s.size()) + 1);
    rows.push_back(s.grid()->points());
    const auto& X = s.curves();
    for (int i = 0; i < s.size(); ++i) {
        std::vector<double> row(static_cast<size_t>(X.cols()));
        for (int k = 0; k < X.cols(); ++k) row[static_cast<size_t>(k)] = X(i, k);
        rows.push_back(std::move(row));
    }
    write_numeric_csv(curve_path, rows, 17);

    std::vector<std::vector<double>> resp;
    resp.reserve(static_cast<size_t>(s.size()));
    for (int i = 0; i < s.size(); ++i) resp.push_back({s.response(i)});
    write_numeric_csv(response_path, resp, 17);
}

}  // namespace flr
