#include "sis/irmxne.hpp"
#include "sis/problem_core.hpp"

#include <cmath>

namespace sis {

void ReweightConfig::validate() const {
    if (K < 1) throw ConfigError("ReweightConfig: K must be >= 1");
    if (!(eps_reweight > 0))
        throw ConfigError("ReweightConfig: eps_reweight must be > 0");
    inner.validate();
}

Vector reweight(const Vector& norms, double eps_reweight) {
    return (2.0 * (norms.array() + eps_reweight).sqrt()).matrix();
}

SolveReport irmxne_solve(const BlockDesign& design, const Measurements& meas,
                         double lambda, const ReweightConfig& config,
                         const Matrix* init) {
    config.validate();
    design.validate();

    const int O = design.O;
    Matrix X;
    bool have_estimate = false;
    if (init) {
        if (init->rows() != design.G.cols() || init->cols() != meas.M.cols())
            throw DimensionError("irmxne_solve: init shape mismatch");
        X = *init;
        have_estimate = true;
    }

    SolveReport report;
    int total_sweeps = 0;
    bool all_converged = true;
    double prev_obj = 0.0;
    std::vector<int> prev_support;

    for (int k = 1; k <= config.K; ++k) {
        SolveReport inner;
        if (!have_estimate) {
            // First round, no warm start: unit weights, plain MxNE.
            inner = mxne_solve(design, meas, lambda, nullptr, config.inner);
            X = inner.estimate.X;
        } else {
            const Vector w = reweight(block_norms(X, O), config.eps_reweight);
            BlockDesign weighted = design;
            Matrix x_tilde(X.rows(), X.cols());
            for (int s = 0; s < design.S; ++s) {
                weighted.block(s) = design.block(s) * w[s];
                x_tilde.middleRows(s * O, O) = X.middleRows(s * O, O) / w[s];
            }
            inner = mxne_solve(weighted, meas, lambda, &x_tilde, config.inner);
            X = inner.estimate.X;
            for (int s = 0; s < design.S; ++s)
                X.middleRows(s * O, O) *= w[s];
        }
        have_estimate = true;
        total_sweeps += inner.sweeps;
        all_converged = all_converged && inner.converged;
        report.gap = inner.gap;
        report.tol_used = inner.tol_used;

        const double obj = objective_irmxne(design, meas, X, lambda);
        std::vector<int> support;
        const Vector bn = block_norms(X, O);
        for (int s = 0; s < design.S; ++s)
            if (bn[s] != 0.0) support.push_back(s);
        if (k > 1 && support == prev_support &&
            std::abs(obj - prev_obj) <= 1e-10 * std::max(1.0, std::abs(prev_obj)))
            break;
        prev_obj = obj;
        prev_support = std::move(support);
    }

    report.estimate = SourceEstimate::from_matrix(std::move(X), O);
    report.sweeps = total_sweeps;
    report.converged = all_converged;
    return report;
}

} // namespace sis
