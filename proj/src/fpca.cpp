#include "flr/fpca.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "flr/errors.hpp"

namespace flr {

namespace {

constexpr double kClampRatio = 1e-12;
constexpr double kSignTol = 1e-12;

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (std::abs(v(k)) > kSignTol) {
            if (v(k) < 0.0) v = -v;
            return;
        }
    }
}

}  // namespace

FpcaResult::FpcaResult(GridPtr grid, Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenfunctions,
                       Curve cross_covariance, int sample_size)
    : grid_(std::move(grid)),
      eigenvalues_(std::move(eigenvalues)),
      eigenfunctions_(std::move(eigenfunctions)),
      g_hat_(std::move(cross_covariance)),
      n_(sample_size) {
    g_coeffs_ = grid_->weight() * (eigenfunctions_.transpose() * g_hat_.values);
}

Curve FpcaResult::eigenfunction(int j) const {
    if (j < 1 || j > rank()) {
        throw DimensionError("eigenfunction index " + std::to_string(j) + " outside 1.." +
                             std::to_string(rank()));
    }
    return Curve(grid_, eigenfunctions_.col(j - 1));
}

FpcaResult fit_fpca(const FunctionalSample& s) {
    if (!s.centred()) {
        throw DomainError("fit_fpca needs a centred sample; call center_sample first");
    }
    const int n = s.size();
    const int p = s.grid()->size();
    const double w = s.grid()->weight();
    const Eigen::MatrixXd& X = s.curves();
    const int n_eigen = std::min(n, p);

    Eigen::VectorXd raw_values(n_eigen);
    Eigen::MatrixXd basis;  // p x n_eigen, candidate eigenfunction values

    if (p <= n) {
        // Second-moment route: M = (w/n) X'X is the matrix of Gamma_n in
        // value space; Euclidean-unit eigenvectors scaled by 1/sqrt(w) are
        // quadrature-orthonormal.
        Eigen::MatrixXd M = (w / n) * (X.transpose() * X);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
        if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
        raw_values = solver.eigenvalues().reverse();
        basis = solver.eigenvectors().rowwise().reverse() / std::sqrt(w);
    } else {
        // Gram route: G_ij = (1/n) <X_i, X_j>. An eigenvector u with value
        // lambda > 0 maps to the eigenfunction sum_i u_i X_i / sqrt(n*lambda).
        Eigen::MatrixXd G = (w / n) * (X * X.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G);
        if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
        raw_values = solver.eigenvalues().reverse();
        Eigen::MatrixXd U = solver.eigenvectors().rowwise().reverse();
        basis.resize(p, n_eigen);
        for (int j = 0; j < n_eigen; ++j) {
            const double lambda = raw_values(j);
            if (lambda > 0.0) {
                basis.col(j) = X.transpose() * U.col(j) / std::sqrt(n * lambda);
            } else {
                basis.col(j).setZero();
            }
        }
    }

    // Clamp the tail so rank boundaries are stable.
    const double lambda_max = raw_values.size() > 0 ? std::max(raw_values(0), 0.0) : 0.0;
    const double floor = kClampRatio * lambda_max;
    Eigen::VectorXd eigenvalues(n_eigen);
    int rank = 0;
    for (int j = 0; j < n_eigen; ++j) {
        eigenvalues(j) = raw_values(j) < floor ? 0.0 : raw_values(j);
        if (eigenvalues(j) > 0.0) rank = j + 1;
    }

    Eigen::MatrixXd eigenfunctions = basis.leftCols(rank);
    for (int j = 0; j < rank; ++j) canonicalize_sign(eigenfunctions.col(j));

    Eigen::VectorXd g_values = (X.transpose() * s.responses()) / n;
    Curve g_hat(s.grid(), std::move(g_values));

    return FpcaResult(s.grid(), std::move(eigenvalues), std::move(eigenfunctions),
                      std::move(g_hat), n);
}

Eigen::VectorXd project_coefficients(const FpcaResult& r, const Curve& f, int m) {
    if (m < 1 || m > r.rank()) {
        throw DimensionError("projection dimension " + std::to_string(m) + " outside 1.." +
                             std::to_string(r.rank()));
    }
    require_same_grid(r.grid(), f.grid);
    return r.grid()->weight() * (r.eigenfunctions().leftCols(m).transpose() * f.values);
}

}  // namespace flr
