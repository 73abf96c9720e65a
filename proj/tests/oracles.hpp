#pragma once

// Test-only reference implementations, kept independent of the solver path
// they certify.

#include "sis/types.hpp"

#include <cmath>
#include <random>

namespace sis::oracle {

/// Numeric proximal operator of tau*||.||_F by golden-section search on the
/// scale factor along Y (the minimizer is a multiple of Y).
inline Matrix prox_frobenius(const Matrix& Y, double tau) {
    const auto value = [&](double c) {
        return 0.5 * (c - 1.0) * (c - 1.0) * Y.squaredNorm() +
               tau * std::abs(c) * Y.norm();
    };
    double lo = 0.0, hi = 1.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    for (int it = 0; it < 200; ++it) {
        if (value(a) < value(b)) hi = b; else lo = a;
        a = hi - gr * (hi - lo);
        b = lo + gr * (hi - lo);
    }
    return Y * (0.5 * (lo + hi));
}

/// Duality gap for the group penalty, written from the definition.
inline double mxne_gap(const Matrix& G, const Matrix& M, int O, double lambda,
                       const Matrix& X) {
    const Matrix R = M - G * X;
    const int S = static_cast<int>(G.cols()) / O;
    double penalty = 0.0, max_corr = 0.0;
    for (int s = 0; s < S; ++s) {
        penalty += X.middleRows(s * O, O).norm();
        max_corr =
            std::max(max_corr, (G.middleCols(s * O, O).transpose() * R).norm());
    }
    const double primal = 0.5 * R.squaredNorm() + lambda * penalty;
    const Matrix theta = R / std::max(1.0, max_corr / lambda);
    const double dual = 0.5 * M.squaredNorm() - 0.5 * (M - theta).squaredNorm();
    return primal - dual;
}

/// Proximal-gradient (FISTA) reference solver for the MxNE problem, run
/// until the duality gap drops below gap_tol.
inline Matrix mxne_prox_gradient(const Matrix& G, const Matrix& M, int O,
                                 double lambda, double gap_tol,
                                 int max_iter = 500000) {
    const int S = static_cast<int>(G.cols()) / O;
    Eigen::JacobiSVD<Matrix> svd(G);
    const double L = svd.singularValues()[0] * svd.singularValues()[0];
    Matrix X = Matrix::Zero(G.cols(), M.cols());
    Matrix V = X;
    double t = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        Matrix Y = V - G.transpose() * (G * V - M) / L;
        for (int s = 0; s < S; ++s) {
            auto Ys = Y.middleRows(s * O, O);
            const double n = Ys.norm();
            const double tau = lambda / L;
            if (n <= tau)
                Ys.setZero();
            else
                Ys *= (1.0 - tau / n);
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        V = Y + ((t - 1.0) / t_next) * (Y - X);
        X = Y;
        t = t_next;
        if (it % 10 == 0 && mxne_gap(G, M, O, lambda, X) <= gap_tol) break;
    }
    return X;
}

/// Seeded dense Gaussian instance with S blocks of O columns.
struct RandomInstance {
    Matrix G;
    Matrix M;
    int S, O;
};

inline RandomInstance random_instance(int N, int S, int O, int T,
                                      std::uint64_t seed,
                                      int planted_blocks = 0,
                                      double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RandomInstance inst;
    inst.S = S;
    inst.O = O;
    inst.G.resize(N, S * O);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < S * O; ++j) inst.G(i, j) = gauss(rng);
    inst.G /= std::sqrt(static_cast<double>(N));
    Matrix X = Matrix::Zero(S * O, T);
    for (int b = 0; b < planted_blocks; ++b)
        for (int o = 0; o < O; ++o)
            for (int t = 0; t < T; ++t) X(b * O + o, t) = amplitude * gauss(rng);
    inst.M = inst.G * X;
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t) inst.M(i, t) += gauss(rng);
    return inst;
}

inline BlockDesign to_design(const RandomInstance& inst) {
    BlockDesign design;
    design.G = inst.G;
    design.S = inst.S;
    design.O = inst.O;
    for (int s = 0; s < inst.S; ++s)
        design.positions.push_back(Point3(10.0 * s, 0.0, 0.0));
    return design;
}

inline Measurements to_meas(const Matrix& M, double sigma = 1.0) {
    Measurements meas;
    meas.M = M;
    meas.sigma = sigma;
    return meas;
}

} // namespace sis::oracle
