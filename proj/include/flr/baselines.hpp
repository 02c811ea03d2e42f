#pragma once

#include <vector>

#include "flr/estimator.hpp"

namespace flr {

struct BaselineRecord {
    int m = 0;
    double score = 0.0;
};

struct BaselineTable {
    std::vector<BaselineRecord> table;
    int selected_m = 0;
    Method method = Method::gcv;
    int skipped_folds = 0;  // leave-one-out folds dropped for zero rank
};

// GCV(m) = RSS(m) / (1 - m/n)^2 with RSS(m) = sum_i (Y_i - Y_hat_i)^2.
// The trace of the hat matrix is m exactly (orthogonal projection onto the
// fitted m-dimensional subspace), so the denominator needs no trace pass.
// Dimensions with m >= n are excluded from the search.
BaselineTable gcv_select(const FunctionalSample& s, const FpcaResult& r, int max_m);

// Leave-one-out CV: every fold is recentred and refit from scratch
// (no rank-one update), m capped per fold at that fold's rank. Folds whose
// first eigenvalue vanishes are skipped and counted.
BaselineTable cv_select(const FunctionalSample& s, int max_m);

}  // namespace flr
