#pragma once

#include "sis/types.hpp"

namespace sis {

/// Block coordinate descent settings. The duality-gap tolerance is absolute
/// on the objective scale; when tol == 0 it is set to tol_rel * 1/2 ||M||_F^2
/// at solve entry.
struct SolverConfig {
    double tol = 0.0;
    double tol_rel = 1e-8;
    int max_iter = 100000;
    int gap_check_every = 1;
    bool track_objective = false;

    void validate() const;
};

struct SolveReport {
    SourceEstimate estimate;
    double gap = 0.0;
    int sweeps = 0;
    bool converged = false;
    double tol_used = 0.0;              // effective absolute gap tolerance
    std::vector<double> objective_trace; // per sweep, if tracked
};

/// Per-block squared spectral norms of G (Lipschitz constants of the
/// blockwise gradient), by power iteration on the O x O Gram matrices.
Vector block_lipschitz(const BlockDesign& design);

/// Convex multi-task solver: minimizes 1/2||M - GX||_F^2 + lambda sum ||X_s||_F
/// by cyclic block coordinate descent, certified by duality gap. Inactive
/// blocks are exact zeros. Deterministic given inputs.
SolveReport mxne_solve(const BlockDesign& design, const Measurements& meas,
                       double lambda, const Matrix* init,
                       const SolverConfig& config);

/// Duality gap at X via the scaled-residual dual point
/// Theta = R / max(1, max_s ||G_s^T R||_F / lambda).
double duality_gap(const BlockDesign& design, const Measurements& meas,
                   double lambda, const Matrix& X);

/// Max KKT residual over inactive and active blocks at X.
double kkt_violation(const BlockDesign& design, const Measurements& meas,
                     double lambda, const Matrix& X);

} // namespace sis
