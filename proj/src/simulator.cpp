#include "flr/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "flr/errors.hpp"

namespace flr {

double ProcessSpec::eigenvalue(int j) const {
    switch (decay) {
        case Decay::polynomial: return std::pow(static_cast<double>(j), -a);
        case Decay::exponential: return std::exp(-std::pow(static_cast<double>(j), a));
    }
    return 0.0;
}

std::string ProcessSpec::label() const {
    if (decay == Decay::polynomial && a == 2.0) return "P1";
    if (decay == Decay::polynomial && a == 3.0) return "P2";
    if (decay == Decay::exponential && a == 1.0) return "E";
    std::ostringstream os;
    os << (decay == Decay::polynomial ? "poly:" : "exp:") << a;
    return os.str();
}

ProcessSpec::Decay parse_decay_kind(const std::string& s) {
    if (s == "polynomial" || s == "poly") return ProcessSpec::Decay::polynomial;
    if (s == "exponential" || s == "exp") return ProcessSpec::Decay::exponential;
    throw ConfigError("unknown decay kind '" + s + "'");
}

ProcessSpec parse_decay(const std::string& label) {
    if (label == "P1") return ProcessSpec::p1();
    if (label == "P2") return ProcessSpec::p2();
    if (label == "E") return ProcessSpec::e();
    const auto colon = label.find(':');
    if (colon != std::string::npos) {
        ProcessSpec spec;
        spec.decay = parse_decay_kind(label.substr(0, colon));
        try {
            spec.a = std::stod(label.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad decay exponent in '" + label + "'");
        }
        if (!(spec.a > 0.0)) throw ConfigError("decay exponent must be positive in '" + label + "'");
        return spec;
    }
    throw ConfigError("unknown decay '" + label + "', expected P1, P2, E, poly:<a> or exp:<a>");
}

SlopeSpec SlopeSpec::ellipsoid(double r, double R) {
    if (!(r > 0.0) || !(R > 0.0)) throw ConfigError("ellipsoid slope needs r > 0 and R > 0");
    SlopeSpec s;
    s.kind = Kind::ellipsoid;
    s.r = r;
    s.R = R;
    return s;
}

std::string SlopeSpec::label() const {
    switch (kind) {
        case Kind::beta1: return "beta1";
        case Kind::beta2: return "beta2";
        case Kind::ellipsoid: {
            std::ostringstream os;
            os << "ellipsoid:r=" << r << ",R=" << R;
            return os.str();
        }
    }
    return "?";
}

SlopeSpec parse_slope(const std::string& label) {
    if (label == "beta1") return SlopeSpec::beta1();
    if (label == "beta2") return SlopeSpec::beta2();
    if (label.rfind("ellipsoid:", 0) == 0) {
        double r = 0.0, R = 0.0;
        if (std::sscanf(label.c_str(), "ellipsoid:r=%lf,R=%lf", &r, &R) == 2) {
            return SlopeSpec::ellipsoid(r, R);
        }
        throw ConfigError("bad ellipsoid slope '" + label + "', expected ellipsoid:r=<r>,R=<R>");
    }
    throw ConfigError("unknown slope '" + label + "'");
}

double kl_basis_value(int j, double x) {
    return std::sqrt(2.0) * std::sin(M_PI * (j - 0.5) * x);
}

double beta1_value(double x) {
    return std::log(15.0 * x * x + 10.0) + std::cos(4.0 * M_PI * x);
}

double beta2_value(double x, int exponent_sign) {
    return std::exp(exponent_sign * (x - 0.3) * (x - 0.3) / 0.05) * std::cos(4.0 * M_PI * x);
}

EigenSystem eigen_basis(const ProcessSpec& spec) {
    if (spec.truncation < 1) throw ConfigError("truncation must be >= 1");
    GridPtr grid = Grid::uniform(spec.grid_size);
    const int p = grid->size();
    const int J = spec.truncation;

    Eigen::VectorXd lambdas(J);
    Eigen::MatrixXd psis(p, J);
    for (int j = 1; j <= J; ++j) {
        lambdas(j - 1) = spec.eigenvalue(j);
        for (int k = 0; k < p; ++k) {
            psis(k, j - 1) = kl_basis_value(j, grid->point(k));
        }
    }
    return EigenSystem{std::move(grid), std::move(lambdas), std::move(psis)};
}

Curve curve_from_scores(const EigenSystem& sys, const Eigen::VectorXd& scores) {
    if (scores.size() != sys.lambdas.size()) {
        throw DimensionError("expected " + std::to_string(sys.lambdas.size()) + " scores, got " +
                             std::to_string(scores.size()));
    }
    Eigen::VectorXd weighted = sys.lambdas.cwiseSqrt().cwiseProduct(scores);
    return Curve(sys.grid, sys.functions * weighted);
}

Curve curve_from_scores(const ProcessSpec& spec, const Eigen::VectorXd& scores) {
    return curve_from_scores(eigen_basis(spec), scores);
}

Curve draw_curve(const ProcessSpec& spec, Rng& rng) {
    const EigenSystem sys = eigen_basis(spec);
    Eigen::VectorXd scores(sys.lambdas.size());
    for (Eigen::Index j = 0; j < scores.size(); ++j) scores(j) = rng.gaussian();
    return curve_from_scores(sys, scores);
}

Curve slope_curve(const SlopeSpec& slope, const GridPtr& grid, int truncation) {
    const int p = grid->size();
    Eigen::VectorXd values(p);
    switch (slope.kind) {
        case SlopeSpec::Kind::beta1:
            for (int k = 0; k < p; ++k) values(k) = beta1_value(grid->point(k));
            break;
        case SlopeSpec::Kind::beta2:
            for (int k = 0; k < p; ++k) {
                values(k) = beta2_value(grid->point(k), slope.beta2_exponent_sign);
            }
            break;
        case SlopeSpec::Kind::ellipsoid: {
            // Coefficients c j^{-(r+1)/2 - 0.05} scaled so that
            // sum_j j^r <beta,psi_j>^2 = R^2: the slope sits on the boundary
            // of the smoothness ellipsoid.
            double weighted_sum = 0.0;
            for (int j = 1; j <= truncation; ++j) {
                weighted_sum += std::pow(static_cast<double>(j), -1.0 - 0.1);
            }
            const double scale = slope.R / std::sqrt(weighted_sum);
            values.setZero();
            for (int j = 1; j <= truncation; ++j) {
                const double coeff =
                    scale * std::pow(static_cast<double>(j), -(slope.r + 1.0) / 2.0 - 0.05);
                for (int k = 0; k < p; ++k) {
                    values(k) += coeff * kl_basis_value(j, grid->point(k));
                }
            }
            break;
        }
    }
    return Curve(grid, std::move(values));
}

GeneratedData generate(const ScenarioSpec& scenario, std::uint64_t stream) {
    if (scenario.n < 6) throw ConfigError("scenario needs n >= 6");
    if (!(scenario.noise_variance > 0.0)) throw ConfigError("scenario needs sigma2 > 0");

    EigenSystem sys = eigen_basis(scenario.process);
    Curve beta = slope_curve(scenario.slope, sys.grid, scenario.process.truncation);

    const int n = scenario.n;
    const int J = scenario.process.truncation;
    const double sigma = std::sqrt(scenario.noise_variance);

    Rng rng(scenario.seed, stream);
    Eigen::MatrixXd scores(n, J);
    Eigen::VectorXd noise(n);
    // Draw order is fixed: J curve scores then one noise value per observation.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < J; ++j) scores(i, j) = rng.gaussian();
        noise(i) = sigma * rng.gaussian();
    }

    Eigen::MatrixXd X = (scores * sys.lambdas.cwiseSqrt().asDiagonal()) * sys.functions.transpose();
    Eigen::VectorXd y = sys.grid->weight() * (X * beta.values) + noise;

    // X has mean zero by construction; the estimator runs on the raw draws.
    FunctionalSample sample(sys.grid, std::move(X), std::move(y), /*centred=*/true);
    return GeneratedData{std::move(sample), std::move(beta), std::move(sys)};
}

}  // namespace flr
