#include "sis/mxne.hpp"
#include "sis/problem_core.hpp"

#include <cmath>
#include <vector>

namespace sis {

void SolverConfig::validate() const {
    if (tol < 0 || (tol == 0 && !(tol_rel > 0)))
        throw ConfigError("SolverConfig: tolerance must be positive");
    if (max_iter < 1) throw ConfigError("SolverConfig: max_iter must be >= 1");
    if (gap_check_every < 1)
        throw ConfigError("SolverConfig: gap_check_every must be >= 1");
}

Vector block_lipschitz(const BlockDesign& design) {
    Vector L(design.S);
    for (int s = 0; s < design.S; ++s) {
        Matrix gram = design.block(s).transpose() * design.block(s); // O x O
        if (gram.norm() == 0.0) {
            L[s] = 0.0;
            continue;
        }
        // Power iteration for the top eigenvalue of the Gram matrix.
        Vector v = Vector::Ones(design.O).normalized();
        double ev = 0.0;
        for (int it = 0; it < 10000; ++it) {
            Vector w = gram * v;
            const double nw = w.norm();
            if (nw == 0.0) { ev = 0.0; break; }
            v = w / nw;
            const double ev_new = v.dot(gram * v);
            if (std::abs(ev_new - ev) <= 1e-10 * std::abs(ev_new)) {
                ev = ev_new;
                break;
            }
            ev = ev_new;
        }
        L[s] = ev;
    }
    return L;
}

static double gap_from_residual(const BlockDesign& design, const Measurements& meas,
                                double lambda, const Matrix& R, const Matrix& X) {
    const double primal =
        0.5 * R.squaredNorm() + lambda * block_norms(X, design.O).sum();
    double max_corr = 0.0;
    for (int s = 0; s < design.S; ++s)
        max_corr = std::max(max_corr, (design.block(s).transpose() * R).norm());
    const double scale = std::max(1.0, max_corr / lambda);
    const Matrix theta = R / scale;
    const double dual =
        0.5 * meas.M.squaredNorm() - 0.5 * (meas.M - theta).squaredNorm();
    return primal - dual;
}

SolveReport mxne_solve(const BlockDesign& design, const Measurements& meas,
                       double lambda, const Matrix* init,
                       const SolverConfig& config) {
    design.validate();
    meas.validate();
    config.validate();
    if (!(lambda > 0)) throw ConfigError("mxne_solve: lambda must be > 0");
    const Eigen::Index P = design.G.cols();
    const Eigen::Index T = meas.M.cols();
    if (design.G.rows() != meas.M.rows())
        throw DimensionError("mxne_solve: sensor count mismatch");
    if (init && (init->rows() != P || init->cols() != T))
        throw DimensionError("mxne_solve: init shape mismatch");

    // Drop sensor rows that are identically zero in both G and M: they
    // cannot influence the fit, and solving on the compacted problem makes
    // zeroing out rows (e.g. cross-validation folds) bit-identical to
    // removing them.
    {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < design.G.rows(); ++i)
            if (!(design.G.row(i).isZero(0) && meas.M.row(i).isZero(0)))
                keep.push_back(i);
        if (static_cast<Eigen::Index>(keep.size()) < design.G.rows()) {
            BlockDesign compact = design;
            Measurements compact_meas = meas;
            compact.G.resize(keep.size(), P);
            compact_meas.M.resize(keep.size(), T);
            for (std::size_t k = 0; k < keep.size(); ++k) {
                compact.G.row(k) = design.G.row(keep[k]);
                compact_meas.M.row(k) = meas.M.row(keep[k]);
            }
            return mxne_solve(compact, compact_meas, lambda, init, config);
        }
    }

    SolveReport report;
    report.tol_used =
        config.tol > 0 ? config.tol : config.tol_rel * 0.5 * meas.M.squaredNorm();

    const Vector L = block_lipschitz(design);
    Matrix X = init ? *init : Matrix::Zero(P, T);
    // Zero-Lipschitz blocks cannot influence the fit; force them out.
    for (int s = 0; s < design.S; ++s)
        if (L[s] == 0.0) X.middleRows(s * design.O, design.O).setZero();
    Matrix R = (init && !init->isZero(0)) ? Matrix(meas.M - design.G * X)
                                          : Matrix(meas.M);

    const int O = design.O;
    // One coordinate update; returns the Frobenius norm of the block change.
    const auto update_block = [&](int s) {
        auto Xs = X.middleRows(s * O, O);
        const Matrix target = Xs + design.block(s).transpose() * R / L[s];
        const Matrix updated = block_soft_threshold(target, lambda / L[s]);
        if (Xs.isZero(0) && updated.isZero(0)) return 0.0;
        const Matrix delta = updated - Xs;
        R.noalias() -= design.block(s) * delta;
        Xs = updated;
        return delta.norm();
    };
    const auto post_sweep = [&](int sweep) {
        report.sweeps = sweep;
        if (!X.allFinite())
            throw NumericError("mxne_solve: non-finite iterate");
        if (config.track_objective)
            report.objective_trace.push_back(
                0.5 * R.squaredNorm() + lambda * block_norms(X, O).sum());
    };

    std::vector<int> active;
    int sweep = 0, full_sweeps = 0;
    while (sweep < config.max_iter) {
        // Full sweep: visits every block so new blocks can enter the support.
        ++sweep;
        ++full_sweeps;
        active.clear();
        for (int s = 0; s < design.S; ++s) {
            if (L[s] == 0.0) continue;
            update_block(s);
            if (!X.middleRows(s * O, O).isZero(0)) active.push_back(s);
        }
        post_sweep(sweep);
        if (full_sweeps % config.gap_check_every == 0 || sweep == config.max_iter) {
            report.gap = gap_from_residual(design, meas, lambda, R, X);
            if (report.gap <= report.tol_used) {
                report.converged = true;
                break;
            }
        }
        // Refine on the current support before scanning all blocks again;
        // this does most of the convergence work at a fraction of the cost.
        for (int inner = 0; inner < 50 && sweep < config.max_iter; ++inner) {
            ++sweep;
            double max_change = 0.0;
            for (int s : active) max_change = std::max(max_change, update_block(s));
            post_sweep(sweep);
            if (max_change <= 1e-12 * std::max(1.0, X.norm())) break;
        }
    }
    report.estimate = SourceEstimate::from_matrix(std::move(X), O);
    return report;
}

double duality_gap(const BlockDesign& design, const Measurements& meas,
                   double lambda, const Matrix& X) {
    if (!(lambda > 0)) throw ConfigError("duality_gap: lambda must be > 0");
    const Matrix R = meas.M - design.G * X;
    return gap_from_residual(design, meas, lambda, R, X);
}

double kkt_violation(const BlockDesign& design, const Measurements& meas,
                     double lambda, const Matrix& X) {
    if (!(lambda > 0)) throw ConfigError("kkt_violation: lambda must be > 0");
    const Matrix R = meas.M - design.G * X;
    const int O = design.O;
    double viol = 0.0;
    for (int s = 0; s < design.S; ++s) {
        const Matrix corr = design.block(s).transpose() * R;
        const double ns = X.middleRows(s * O, O).norm();
        if (ns == 0.0) {
            viol = std::max(viol, std::max(0.0, corr.norm() - lambda));
        } else {
            viol = std::max(
                viol, (corr - lambda * X.middleRows(s * O, O) / ns).norm());
        }
    }
    return viol;
}

} // namespace sis
