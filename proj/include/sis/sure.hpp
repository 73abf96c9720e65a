#pragma once

#include "sis/lambda_grid.hpp"

#include <cstdint>
#include <functional>

namespace sis {

/// Finite-difference step heuristic: 2*sigma / N^0.3.
double fd_step(double sigma, int N);

/// Gaussian perturbation probe shared across a grid search. Regenerable
/// exactly from (N, T, seed).
struct ProbeState {
    Matrix delta;  // N x T, iid standard normal
    double eps_fd; // finite-difference step
    std::uint64_t seed;

    static ProbeState draw(int N, int T, double sigma, std::uint64_t seed);
};

struct SureEval {
    double lam = 0.0;
    double sure = 0.0;
    double dof = 0.0;
    double residual_energy = 0.0;
    SourceEstimate estimate; // unperturbed solve
    bool valid = true;
};

/// Fitted-value map hook: observations -> G * Xhat. Lets tests check the
/// divergence machinery against closed-form estimators.
using FitMap = std::function<Matrix(const Matrix&)>;

/// Finite-difference Monte-Carlo divergence of a fitted-value map:
/// (1/eps) * sum (fit(M + eps*Delta) - fit(M)) .* Delta.
double fdmc_dof(const FitMap& fit, const Matrix& M, const ProbeState& probe);

/// Risk proxy at one lambda: two irMxNE solves (on M and on M + eps*Delta),
/// divergence by finite differences, then
/// SURE = ||M - G X||_F^2 - N*T*sigma^2 + 2*sigma^2*dof.
SureEval fdmc_sure(const BlockDesign& design, const Measurements& meas,
                   double lambda, const ProbeState& probe,
                   const ReweightConfig& config);

struct SureSelection {
    double lambda_opt = 0.0;
    std::vector<SureEval> evals; // one per grid point, grid order
};

/// Grid search for the SURE minimizer. One probe is drawn per call and
/// shared across the whole grid; both the unperturbed and perturbed
/// problems run as warm-started paths. n_probes > 1 averages the dof over
/// independently seeded probes. Ties break toward the larger lambda.
SureSelection select_lambda_sure(const BlockDesign& design,
                                 const Measurements& meas,
                                 const LambdaGrid& grid,
                                 const ReweightConfig& config,
                                 std::uint64_t seed, int n_probes = 1,
                                 int jobs = 1);

} // namespace sis
