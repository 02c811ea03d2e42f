#include "flr/grid.hpp"

#include <cmath>
#include <utility>

namespace flr {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw DomainError("grid needs at least 2 points, got " + std::to_string(points_.size()));
    }
    for (size_t k = 0; k < points_.size(); ++k) {
        const double t = points_[k];
        if (!std::isfinite(t) || t < 0.0 || t > 1.0) {
            throw DomainError("grid point " + std::to_string(k) + " = " + std::to_string(t) +
                              " outside [0,1]");
        }
        if (k > 0 && points_[k - 1] >= t) {
            throw DomainError("grid points not strictly increasing at index " + std::to_string(k));
        }
    }
    weight_ = 1.0 / static_cast<double>(points_.size());
}

GridPtr Grid::uniform(int p) {
    if (p < 2) throw DomainError("uniform grid needs p >= 2");
    std::vector<double> pts(static_cast<size_t>(p));
    // Midpoint abscissae: with weight 1/p this makes the rectangle rule a
    // midpoint rule, under which the sin(pi (j-1/2) t) family is discretely
    // orthonormal to machine precision.
    for (int k = 0; k < p; ++k) pts[static_cast<size_t>(k)] = (k + 0.5) / p;
    return std::make_shared<Grid>(std::move(pts));
}

bool Grid::same_as(const Grid& other) const {
    if (this == &other) return true;
    return points_ == other.points_;
}

Curve::Curve(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw DomainError("curve needs a grid");
    if (values.size() != grid->size()) {
        throw DomainError("curve has " + std::to_string(values.size()) + " values on a grid of " +
                          std::to_string(grid->size()) + " points");
    }
    if (!values.allFinite()) throw DomainError("curve values must be finite");
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (!a || !b || !a->same_as(*b)) {
        throw GridMismatchError("curves live on different grids");
    }
}

void require_same_grid(const Curve& f, const Curve& g) {
    require_same_grid(f.grid, g.grid);
}

double inner_product(const Curve& f, const Curve& g) {
    require_same_grid(f, g);
    return f.grid->weight() * f.values.dot(g.values);
}

double norm_sq(const Curve& f) { return f.grid->weight() * f.values.squaredNorm(); }

double norm(const Curve& f) { return std::sqrt(norm_sq(f)); }

Curve operator+(const Curve& f, const Curve& g) {
    require_same_grid(f, g);
    return Curve(f.grid, f.values + g.values);
}

Curve operator-(const Curve& f, const Curve& g) {
    require_same_grid(f, g);
    return Curve(f.grid, f.values - g.values);
}

Curve operator*(double c, const Curve& f) { return Curve(f.grid, c * f.values); }

}  // namespace flr
