#include "sis/lmap.hpp"
#include "sis/log.hpp"
#include "sis/problem_core.hpp"

#include <cmath>

namespace sis {

void LmapConfig::validate() const {
    if (!(beta > 0)) throw ConfigError("LmapConfig: beta must be > 0");
    if (lambda0 < 0) throw ConfigError("LmapConfig: lambda0 must be >= 0");
    if (tol_lambda < 0) throw ConfigError("LmapConfig: tol_lambda must be >= 0");
    if (n_iter < 1) throw ConfigError("LmapConfig: n_iter must be >= 1");
    reweight.validate();
}

double lmap_update(int S, int T, double alpha, double beta,
                   const Vector& norms) {
    if (!(alpha > 0) || !(beta > 0))
        throw ConfigError("lmap_update: alpha, beta must be > 0");
    return (2.0 * S * T + alpha - 1.0) /
           (norms.array().sqrt().sum() + beta);
}

LmapResult select_lambda_map(const BlockDesign& design, const Measurements& meas,
                             const LmapConfig& config) {
    config.validate();
    design.validate();
    meas.validate();

    LmapResult result;
    result.lambda_max_value = lambda_max(design, meas);
    const double lmax = result.lambda_max_value;
    result.alpha = (lmax / 2.0) * config.beta + 1.0;
    const double tol =
        config.tol_lambda > 0 ? config.tol_lambda : 1e-4 * lmax;
    double lambda = config.lambda0 > 0 ? config.lambda0 : lmax / 2.0;
    result.trace.push_back(lambda);

    const int T = meas.samples();
    for (int i = 1; i <= config.n_iter; ++i) {
        SolveReport rep = irmxne_solve(design, meas, lambda, config.reweight);
        const double next = lmap_update(design.S, T, result.alpha, config.beta,
                                        rep.estimate.block_norms);
        result.trace.push_back(next);
        result.estimate = std::move(rep.estimate);
        if (next >= lmax && !result.over_lambda_max) {
            result.over_lambda_max = true;
            log::warn("lmap: iterate lambda = %.6g reached lambda_max = %.6g "
                      "(beta likely too small)",
                      next, lmax);
        }
        const double step = std::abs(next - lambda);
        lambda = next;
        if (step < tol) {
            result.converged = true;
            break;
        }
    }
    result.lambda = lambda;
    return result;
}

} // namespace sis
