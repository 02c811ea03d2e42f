// Straight-from-formula reference implementations used only by tests.
// They avoid the library's linear algebra paths: eigenvalues come from a
// hand-rolled Jacobi sweep and least squares from explicit normal equations
// solved by Gaussian elimination.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "flr/estimator.hpp"
#include "flr/rng.hpp"
#include "flr/sample.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix make_matrix(int rows, int cols) {
    return Matrix(static_cast<size_t>(rows), std::vector<double>(static_cast<size_t>(cols), 0.0));
}

// Cyclic Jacobi rotations; fine for the tiny matrices the tests use.
inline void jacobi_eigen(Matrix a, std::vector<double>& values, Matrix& vectors) {
    const size_t n = a.size();
    vectors = make_matrix(static_cast<int>(n), static_cast<int>(n));
    for (size_t i = 0; i < n; ++i) vectors[i][i] = 1.0;

    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (size_t p = 0; p < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; ++k) {
                    const double vkp = vectors[k][p], vkq = vectors[k][q];
                    vectors[k][p] = c * vkp - s * vkq;
                    vectors[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    values.resize(n);
    for (size_t i = 0; i < n; ++i) values[i] = a[i][i];
    // sort decreasing, permuting vector columns along
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return values[x] > values[y]; });
    std::vector<double> sorted_values(n);
    Matrix sorted_vectors = make_matrix(static_cast<int>(n), static_cast<int>(n));
    for (size_t i = 0; i < n; ++i) {
        sorted_values[i] = values[order[i]];
        for (size_t k = 0; k < n; ++k) sorted_vectors[k][i] = vectors[k][order[i]];
    }
    values = std::move(sorted_values);
    vectors = std::move(sorted_vectors);
}

inline std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        if (std::abs(a[pivot][col]) < 1e-300) throw std::runtime_error("singular system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (size_t row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            for (size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (size_t row = n; row-- > 0;) {
        double acc = b[row];
        for (size_t k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
        x[row] = acc / a[row][row];
    }
    return x;
}

// The covariance operator matrix (w/n) X'X built coefficient by coefficient.
inline Matrix second_moment_matrix(const flr::FunctionalSample& s) {
    const int n = s.size();
    const int p = s.grid()->size();
    const double w = s.grid()->weight();
    Matrix m = make_matrix(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += s.curves()(k, i) * s.curves()(k, j);
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] = w * acc / n;
        }
    }
    return m;
}

// Gram matrix (1/n) <X_i, X_j>.
inline Matrix gram_matrix(const flr::FunctionalSample& s) {
    const int n = s.size();
    const double w = s.grid()->weight();
    Matrix m = make_matrix(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                w * s.curves().row(i).dot(s.curves().row(j)) / n;
        }
    }
    return m;
}

// {+1, -1} constant curves with responses {2, -2} on a 2-point grid.
inline flr::FunctionalSample two_constant_curves() {
    auto grid = std::make_shared<flr::Grid>(std::vector<double>{0.25, 0.75});
    Eigen::MatrixXd curves(2, 2);
    curves << 1.0, 1.0, -1.0, -1.0;
    Eigen::VectorXd responses(2);
    responses << 2.0, -2.0;
    return flr::FunctionalSample(grid, curves, responses, /*centred=*/true);
}

inline flr::FunctionalSample random_sample(flr::Rng& rng, int n, int p, double response_scale = 1.0,
                                           bool centred = true) {
    auto grid = flr::Grid::uniform(p);
    Eigen::MatrixXd curves(n, p);
    Eigen::VectorXd responses(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < p; ++k) curves(i, k) = rng.gaussian();
        responses(i) = response_scale * rng.gaussian();
    }
    return flr::FunctionalSample(grid, curves, responses, centred);
}

// Independent straight-from-formula penalized selection: eigenpairs from the
// Jacobi sweep, per-dimension least squares by explicit normal equations,
// criterion and maximal dimension by direct arithmetic.
struct BruteForceSelection {
    int selected_m = 0;
    std::vector<double> criteria;
};

inline BruteForceSelection brute_force_select(const flr::FunctionalSample& s,
                                              const flr::SelectionConfig& cfg) {
    const int n = s.size();
    const int p = s.grid()->size();
    const double w = s.grid()->weight();

    std::vector<double> lambdas;
    Matrix vectors;
    jacobi_eigen(second_moment_matrix(s), lambdas, vectors);

    const double ln_n = std::log(static_cast<double>(n));
    double cap_real = 20.0 * std::sqrt(n / (ln_n * ln_n * ln_n));
    if (cfg.mode() == flr::SelectionConfig::VarianceMode::unknown) {
        cap_real = std::min(cap_real, n / (cfg.theta() * (1.0 + 2.0 * cfg.delta())));
    }
    const double threshold = (2.0 / (static_cast<double>(n) * n)) * (1.0 - 1.0 / (ln_n * ln_n));
    int n_hat = 0;
    for (int m = 1; m <= std::min(static_cast<int>(std::floor(cap_real)), std::min(n, p)); ++m) {
        if (lambdas[static_cast<size_t>(m - 1)] >= threshold) n_hat = m;
        else break;
    }
    if (n_hat < 1) throw std::runtime_error("brute force oracle: degenerate instance");

    BruteForceSelection result;
    double best = 1e300;
    for (int m = 1; m <= n_hat; ++m) {
        Matrix phi = make_matrix(n, m);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                double acc = 0.0;
                for (int k = 0; k < p; ++k) {
                    acc += s.curves()(i, k) *
                           vectors[static_cast<size_t>(k)][static_cast<size_t>(j)] / std::sqrt(w);
                }
                phi[static_cast<size_t>(i)][static_cast<size_t>(j)] = w * acc;
            }
        }
        Matrix gram = make_matrix(m, m);
        std::vector<double> rhs(static_cast<size_t>(m), 0.0);
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i)
                    acc += phi[static_cast<size_t>(i)][static_cast<size_t>(a)] *
                           phi[static_cast<size_t>(i)][static_cast<size_t>(b)];
                gram[static_cast<size_t>(a)][static_cast<size_t>(b)] = acc;
            }
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += phi[static_cast<size_t>(i)][static_cast<size_t>(a)] * s.responses()(i);
            rhs[static_cast<size_t>(a)] = acc;
        }
        const std::vector<double> coef = solve_linear(gram, rhs);
        double rss = 0.0;
        for (int i = 0; i < n; ++i) {
            double fit = 0.0;
            for (int j = 0; j < m; ++j)
                fit += phi[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                       coef[static_cast<size_t>(j)];
            const double resid = s.responses()(i) - fit;
            rss += resid * resid;
        }
        const double gamma = rss / n;
        double criterion;
        if (cfg.mode() == flr::SelectionConfig::VarianceMode::known) {
            criterion = gamma + (1.0 + cfg.theta()) * cfg.sigma2() * m / n;
        } else {
            criterion = gamma * (1.0 + cfg.theta() * (1.0 + cfg.delta()) * m / n);
        }
        result.criteria.push_back(criterion);
        if (criterion < best) {
            best = criterion;
            result.selected_m = m;
        }
    }
    return result;
}

// Explicit hat-matrix construction H_m = Phi (Phi' Phi)^-1 Phi' with its
// trace and the resulting gcv score.
struct HatOracle {
    double trace = 0.0;
    double score = 0.0;
};

inline HatOracle gcv_oracle(const flr::FunctionalSample& s, const flr::FpcaResult& r, int m) {
    const int n = s.size();
    Matrix phi = make_matrix(n, m);
    for (int j = 1; j <= m; ++j) {
        const Eigen::VectorXd col = s.scores(r.eigenfunction(j));
        for (int i = 0; i < n; ++i)
            phi[static_cast<size_t>(i)][static_cast<size_t>(j - 1)] = col(i);
    }
    Matrix gram = make_matrix(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += phi[static_cast<size_t>(i)][static_cast<size_t>(a)] *
                       phi[static_cast<size_t>(i)][static_cast<size_t>(b)];
            gram[static_cast<size_t>(a)][static_cast<size_t>(b)] = acc;
        }
    Matrix hat = make_matrix(n, n);
    for (int col = 0; col < n; ++col) {
        std::vector<double> rhs(static_cast<size_t>(m), 0.0);
        for (int a = 0; a < m; ++a)
            rhs[static_cast<size_t>(a)] = phi[static_cast<size_t>(col)][static_cast<size_t>(a)];
        const std::vector<double> solved = solve_linear(gram, rhs);
        for (int row = 0; row < n; ++row) {
            double acc = 0.0;
            for (int a = 0; a < m; ++a)
                acc += phi[static_cast<size_t>(row)][static_cast<size_t>(a)] *
                       solved[static_cast<size_t>(a)];
            hat[static_cast<size_t>(row)][static_cast<size_t>(col)] = acc;
        }
    }
    HatOracle out;
    for (int i = 0; i < n; ++i) out.trace += hat[static_cast<size_t>(i)][static_cast<size_t>(i)];
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        double fit = 0.0;
        for (int j = 0; j < n; ++j)
            fit += hat[static_cast<size_t>(i)][static_cast<size_t>(j)] * s.responses()(j);
        const double resid = s.responses()(i) - fit;
        rss += resid * resid;
    }
    const double denom = 1.0 - out.trace / n;
    out.score = rss / (denom * denom);
    return out;
}

}  // namespace oracle
