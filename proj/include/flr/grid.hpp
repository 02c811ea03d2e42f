#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "flr/errors.hpp"

namespace flr {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Fixed sampling grid on [0,1] with a uniform quadrature weight 1/p.
/// Integrals are rectangle-rule sums: int f ~ (1/p) sum_k f(t_k).
class Grid {
  public:
    explicit Grid(std::vector<double> points);

    // p equispaced midpoints t_k = (k-1/2)/p, k = 1..p.
    static GridPtr uniform(int p);

    int size() const { return static_cast<int>(points_.size()); }
    double weight() const { return weight_; }
    double point(int k) const { return points_[static_cast<size_t>(k)]; }
    const std::vector<double>& points() const { return points_; }

    bool same_as(const Grid& other) const;

  private:
    std::vector<double> points_;
    double weight_;
};

/// Function values sampled on a shared grid. Immutable by convention:
/// operations return new curves.
struct Curve {
    GridPtr grid;
    Eigen::VectorXd values;

    Curve() = default;
    Curve(GridPtr g, Eigen::VectorXd v);

    int size() const { return static_cast<int>(values.size()); }
};

// Throws GridMismatchError unless f and g share a grid (same object or
// equal point sets).
void require_same_grid(const Curve& f, const Curve& g);
void require_same_grid(const GridPtr& a, const GridPtr& b);

// Quadrature inner product <f,g> = w * sum_k f(t_k) g(t_k).
double inner_product(const Curve& f, const Curve& g);

double norm_sq(const Curve& f);
double norm(const Curve& f);

Curve operator+(const Curve& f, const Curve& g);
Curve operator-(const Curve& f, const Curve& g);
Curve operator*(double c, const Curve& f);

}  // namespace flr
