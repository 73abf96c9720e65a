#pragma once

#include "sis/mxne.hpp"

namespace sis {

struct ReweightConfig {
    int K = 5;                  // reweighted iterations
    double eps_reweight = 1e-8; // weight floor
    SolverConfig inner;

    void validate() const;
};

/// Per-source weights for the next weighted subproblem:
/// w_s = 2*sqrt(||X_s||_F + eps). The weighted solve penalizes
/// lambda*||X~_s||_F with X = W*X~, which majorizes the sqrt-of-norm penalty.
Vector reweight(const Vector& block_norms, double eps_reweight);

/// Non-convex solver: K rounds of weighted MxNE solves. Without init the
/// first round is plain MxNE (unit weights); with init the weights of the
/// first round come from init's block norms, so a run continues where a
/// previous one stopped.
SolveReport irmxne_solve(const BlockDesign& design, const Measurements& meas,
                         double lambda, const ReweightConfig& config,
                         const Matrix* init = nullptr);

} // namespace sis
