#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "flr/rng.hpp"
#include "flr/sample.hpp"

namespace flr {

/// Eigenvalue decay regime of the simulated covariance operator.
/// Polynomial: lambda_j = j^-a. Exponential: lambda_j = exp(-j^a).
struct ProcessSpec {
    enum class Decay { polynomial, exponential };

    Decay decay = Decay::polynomial;
    double a = 2.0;
    int truncation = 150;  // number of Karhunen-Loeve terms
    int grid_size = 100;

    static ProcessSpec p1() { return ProcessSpec{Decay::polynomial, 2.0}; }
    static ProcessSpec p2() { return ProcessSpec{Decay::polynomial, 3.0}; }
    static ProcessSpec e() { return ProcessSpec{Decay::exponential, 1.0}; }

    double eigenvalue(int j) const;  // 1-based
    std::string label() const;       // "P1", "P2", "E", "poly:a", "exp:a"
};

ProcessSpec::Decay parse_decay_kind(const std::string& s);
ProcessSpec parse_decay(const std::string& label);

struct SlopeSpec {
    enum class Kind { beta1, beta2, ellipsoid };

    Kind kind = Kind::beta1;
    double r = 2.0;  // ellipsoid smoothness
    double R = 1.0;  // ellipsoid radius
    // The Gaussian bump in beta2 uses exp(sign (x-0.3)^2 / 0.05); the default
    // -1 keeps the bump bounded, +1 reproduces the alternative convention.
    int beta2_exponent_sign = -1;

    static SlopeSpec beta1() { return SlopeSpec{Kind::beta1}; }
    static SlopeSpec beta2() { return SlopeSpec{Kind::beta2}; }
    static SlopeSpec ellipsoid(double r, double R);

    std::string label() const;  // "beta1", "beta2", "ellipsoid:r=..,R=.."
};

SlopeSpec parse_slope(const std::string& label);

struct ScenarioSpec {
    ProcessSpec process;
    SlopeSpec slope;
    double noise_variance = 0.01;
    int n = 0;
    std::uint64_t seed = 0;
};

/// True (truncated) eigensystem of the simulated process: lambdas(j) and
/// the grid-sampled basis functions psi_j(x) = sqrt(2) sin(pi (j-0.5) x)
/// as columns of `functions`.
struct EigenSystem {
    GridPtr grid;
    Eigen::VectorXd lambdas;    // length J
    Eigen::MatrixXd functions;  // p x J

    Curve function(int j) const { return Curve(grid, functions.col(j - 1)); }
};

// Pointwise formulas behind the sampled curves.
double kl_basis_value(int j, double x);  // sqrt(2) sin(pi (j-0.5) x)
double beta1_value(double x);            // ln(15x^2+10) + cos(4 pi x)
double beta2_value(double x, int exponent_sign = -1);

EigenSystem eigen_basis(const ProcessSpec& spec);

// X = sum_j sqrt(lambda_j) xi_j psi_j with xi_j iid standard normal.
Curve draw_curve(const ProcessSpec& spec, Rng& rng);
// Same expansion with the scores fixed by the caller.
Curve curve_from_scores(const ProcessSpec& spec, const Eigen::VectorXd& scores);
Curve curve_from_scores(const EigenSystem& sys, const Eigen::VectorXd& scores);

Curve slope_curve(const SlopeSpec& slope, const GridPtr& grid, int truncation = 150);

struct GeneratedData {
    FunctionalSample sample;
    Curve true_beta;
    EigenSystem true_system;
};

// Y_i = <beta, X_i> + eps_i, eps_i ~ N(0, sigma^2), inner product by grid
// quadrature. Deterministic given (seed, stream).
GeneratedData generate(const ScenarioSpec& scenario, std::uint64_t stream = 0);

}  // namespace flr
