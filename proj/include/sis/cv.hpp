#pragma once

#include "sis/lambda_grid.hpp"

#include <cstdint>

namespace sis {

/// Sensor-to-fold assignment for spatial (row-wise) cross-validation.
struct FoldPlan {
    int V = 5;
    std::vector<int> assignment; // length N, fold id in [0, V)
    std::uint64_t seed = 0;

    void validate() const;
};

/// Seeded uniform permutation of the sensors chunked into V near-equal folds.
FoldPlan make_folds(int N, int V, std::uint64_t seed);

struct CvSelection {
    double lambda_opt = 0.0;
    std::vector<double> mean_errors; // per grid point, per-entry normalized
    std::vector<bool> valid;         // per grid point
};

/// Spatial K-fold CV: fit the warm-started irMxNE path on the training
/// sensors of each fold, score the held-out rows by squared error per entry,
/// average over folds, and return the minimizing lambda (ties toward the
/// larger one). Folds run in parallel over jobs threads.
CvSelection select_lambda_cv(const BlockDesign& design, const Measurements& meas,
                             const LambdaGrid& grid, const FoldPlan& plan,
                             const ReweightConfig& config, int jobs = 1);

} // namespace sis
