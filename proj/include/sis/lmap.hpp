#pragma once

#include "sis/irmxne.hpp"

namespace sis {

/// Hierarchical-Bayes fixed-point settings. lambda0 and tol_lambda default
/// to lambda_max/2 and 1e-4*lambda_max when left at zero.
struct LmapConfig {
    double lambda0 = 0.0;
    double beta = 10.0; // Gamma hyperprior scale; hand-tuned per data regime
    int n_iter = 10;
    double tol_lambda = 0.0;
    ReweightConfig reweight;

    void validate() const;
};

struct LmapResult {
    double lambda = 0.0;
    std::vector<double> trace; // lambda^(0) .. lambda^(last)
    SourceEstimate estimate;
    bool converged = false;
    bool over_lambda_max = false; // some iterate reached lambda >= lambda_max
    double alpha = 0.0;
    double lambda_max_value = 0.0;
};

/// Fixed-point update: (2ST + alpha - 1) / (sum_s sqrt(||X_s||_F) + beta).
double lmap_update(int S, int T, double alpha, double beta,
                   const Vector& block_norms);

/// Alternates irMxNE solves with the lambda update until |dlambda| falls
/// below tol_lambda or n_iter is reached. alpha = (lambda_max/2)*beta + 1 at
/// entry. Iterates at or above lambda_max are a known failure mode of a
/// poorly chosen beta; they trigger a warning, never a clamp.
LmapResult select_lambda_map(const BlockDesign& design, const Measurements& meas,
                             const LmapConfig& config);

} // namespace sis
