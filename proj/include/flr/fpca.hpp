#pragma once

#include <Eigen/Core>

#include "flr/sample.hpp"

namespace flr {

/// Eigendecomposition of the empirical covariance operator
/// Gamma_n : f -> (1/n) sum_i <f,X_i> X_i together with the empirical
/// cross-covariance g_hat = (1/n) sum_i Y_i X_i.
///
/// Eigenvalues are sorted decreasingly, values below 1e-12 * lambda_1 are
/// clamped to exactly 0, and the stored eigenvalue vector has length
/// min(n, p). Eigenfunctions are kept for the positive eigenvalues only
/// (columns of `eigenfunctions`, quadrature-orthonormal), with signs fixed
/// so the first coordinate larger than 1e-12 in magnitude is positive.
class FpcaResult {
  public:
    FpcaResult(GridPtr grid, Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenfunctions,
               Curve cross_covariance, int sample_size);

    const GridPtr& grid() const { return grid_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    double eigenvalue(int j) const { return eigenvalues_(j); }

    // Number of strictly positive eigenvalues = number of eigenfunctions.
    int rank() const { return static_cast<int>(eigenfunctions_.cols()); }

    // p x rank matrix; column j-1 holds the values of psi_hat_j.
    const Eigen::MatrixXd& eigenfunctions() const { return eigenfunctions_; }
    Curve eigenfunction(int j) const;  // 1-based

    const Curve& cross_covariance() const { return g_hat_; }
    int sample_size() const { return n_; }

    // <g_hat, psi_hat_j>, 1-based.
    double g_coefficient(int j) const { return g_coeffs_(j - 1); }

  private:
    GridPtr grid_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenfunctions_;
    Curve g_hat_;
    Eigen::VectorXd g_coeffs_;
    int n_;
};

// Requires a centred sample. Solves the p x p second-moment system when
// n >= p and the n x n Gram system otherwise; both give identical nonzero
// eigenvalues and quadrature-orthonormal eigenfunctions.
FpcaResult fit_fpca(const FunctionalSample& s);

// (<f, psi_hat_1>, ..., <f, psi_hat_m>).
Eigen::VectorXd project_coefficients(const FpcaResult& r, const Curve& f, int m);

}  // namespace flr
