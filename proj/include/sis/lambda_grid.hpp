#pragma once

#include "sis/irmxne.hpp"

namespace sis {

/// Strictly decreasing positive regularization values.
struct LambdaGrid {
    std::vector<double> values;
    double ratio_min = 0.1;

    int size() const { return static_cast<int>(values.size()); }
    void validate() const;
};

/// Geometric grid from lambda_max down to ratio_min * lambda_max, n points.
LambdaGrid make_grid(double lambda_max, int n = 20, double ratio_min = 0.1);

/// Warm-started path solver. Phase 1 solves the plain MxNE problems
/// sequentially down the grid, each warm-started from the previous solution;
/// phase 2 runs the remaining K-1 reweighted rounds per grid point from that
/// point's phase-1 solution. Phase 2 points are independent and parallelized
/// over jobs threads; output order follows the grid.
std::vector<SolveReport> solve_path_warm(const BlockDesign& design,
                                         const Measurements& meas,
                                         const LambdaGrid& grid,
                                         const ReweightConfig& config,
                                         int jobs = 1);

} // namespace sis
