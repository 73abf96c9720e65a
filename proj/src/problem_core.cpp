#include "sis/problem_core.hpp"

#include <cmath>

namespace sis {

void BlockDesign::validate() const {
    if (O < 1) throw DimensionError("BlockDesign: O must be >= 1");
    if (S < 0) throw DimensionError("BlockDesign: S must be >= 0");
    if (G.cols() != static_cast<Eigen::Index>(S) * O)
        throw DimensionError("BlockDesign: P != S*O");
    if (static_cast<int>(positions.size()) != S)
        throw DimensionError("BlockDesign: positions size != S");
    if (!G.allFinite()) throw NumericError("BlockDesign: non-finite entry in G");
}

void Measurements::validate() const {
    if (M.cols() < 1) throw DimensionError("Measurements: T must be >= 1");
    if (!(sigma > 0)) throw ConfigError("Measurements: sigma must be > 0");
    if (!M.allFinite()) throw NumericError("Measurements: non-finite entry in M");
}

SourceEstimate SourceEstimate::from_matrix(Matrix X, int O) {
    SourceEstimate est;
    est.block_norms = ::sis::block_norms(X, O);
    est.X = std::move(X);
    const int S = static_cast<int>(est.block_norms.size());
    for (int s = 0; s < S; ++s)
        if (est.block_norms[s] != 0.0) est.active_set.push_back(s);
    return est;
}

Vector block_norms(const Matrix& X, int O) {
    if (O < 1 || X.rows() % O != 0)
        throw DimensionError("block_norms: P not divisible by O");
    const int S = static_cast<int>(X.rows()) / O;
    Vector out(S);
    for (int s = 0; s < S; ++s)
        out[s] = X.middleRows(s * O, O).norm();
    return out;
}

double lambda_max(const BlockDesign& design, const Measurements& meas) {
    if (design.G.rows() != meas.M.rows())
        throw DimensionError("lambda_max: sensor count mismatch");
    double lmax = 0.0;
    for (int s = 0; s < design.S; ++s)
        lmax = std::max(lmax, (design.block(s).transpose() * meas.M).norm());
    return lmax;
}

static double residual_energy(const BlockDesign& design, const Measurements& meas,
                              const Matrix& X) {
    if (design.G.rows() != meas.M.rows() || design.G.cols() != X.rows() ||
        X.cols() != meas.M.cols())
        throw DimensionError("objective: shape mismatch");
    return (meas.M - design.G * X).squaredNorm();
}

double objective_mxne(const BlockDesign& design, const Measurements& meas,
                      const Matrix& X, double lambda) {
    return 0.5 * residual_energy(design, meas, X) +
           lambda * block_norms(X, design.O).sum();
}

double objective_irmxne(const BlockDesign& design, const Measurements& meas,
                        const Matrix& X, double lambda) {
    return 0.5 * residual_energy(design, meas, X) +
           lambda * block_norms(X, design.O).array().sqrt().sum();
}

double explained_variance(const BlockDesign& design, const Measurements& meas,
                          const Matrix& X) {
    const double m2 = meas.M.squaredNorm();
    if (m2 == 0.0)
        throw NumericError("explained_variance: ||M||_F = 0");
    return 1.0 - residual_energy(design, meas, X) / m2;
}

Matrix block_soft_threshold(const Matrix& Y, double tau) {
    const double n = Y.norm();
    if (n <= tau) return Matrix::Zero(Y.rows(), Y.cols());
    if (tau == 0.0) return Y;
    return Y * (1.0 - tau / n);
}

} // namespace sis
