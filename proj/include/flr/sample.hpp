#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>

#include "flr/grid.hpp"

namespace flr {

/// Regression dataset: n predictor curves on a shared grid plus n scalar
/// responses. Rows of `curves` are the sampled curve values.
class FunctionalSample {
  public:
    FunctionalSample(GridPtr grid, Eigen::MatrixXd curves, Eigen::VectorXd responses,
                     bool centred = false);

    int size() const { return static_cast<int>(curves_.rows()); }
    const GridPtr& grid() const { return grid_; }
    const Eigen::MatrixXd& curves() const { return curves_; }
    const Eigen::VectorXd& responses() const { return responses_; }
    bool centred() const { return centred_; }

    Curve curve(int i) const { return Curve(grid_, curves_.row(i).transpose()); }
    double response(int i) const { return responses_(i); }

    // <f, X_i> for every i, as a length-n vector.
    Eigen::VectorXd scores(const Curve& f) const;

  private:
    GridPtr grid_;
    Eigen::MatrixXd curves_;
    Eigen::VectorXd responses_;
    bool centred_;
};

// Subtracts the pointwise mean curve and the mean response. A sample whose
// centred flag is already set passes through unchanged, so centering twice
// equals centering once exactly.
FunctionalSample center_sample(const FunctionalSample& s);

// Curve CSV: header row = grid abscissae, each data row = one curve.
// Response CSV: one real per line, no header.
FunctionalSample load_sample_csv(const std::filesystem::path& curve_path,
                                 const std::filesystem::path& response_path);

void save_sample_csv(const FunctionalSample& s, const std::filesystem::path& curve_path,
                     const std::filesystem::path& response_path);

}  // namespace flr
