#pragma once

#include "sis/types.hpp"

namespace sis {

/// Frobenius norm of each O x T block of X (P = S*O rows).
Vector block_norms(const Matrix& X, int O);

/// Smallest lambda for which the all-zero matrix solves the MxNE problem:
/// max over source blocks of ||G_s^T M||_F.
double lambda_max(const BlockDesign& design, const Measurements& meas);

/// 1/2 ||M - GX||_F^2 + lambda * sum_s ||X_s||_F
double objective_mxne(const BlockDesign& design, const Measurements& meas,
                      const Matrix& X, double lambda);

/// 1/2 ||M - GX||_F^2 + lambda * sum_s sqrt(||X_s||_F)
double objective_irmxne(const BlockDesign& design, const Measurements& meas,
                        const Matrix& X, double lambda);

/// 1 - ||M - GX||_F^2 / ||M||_F^2. Requires ||M||_F > 0.
double explained_variance(const BlockDesign& design, const Measurements& meas,
                          const Matrix& X);

/// Proximal operator of tau*||.||_F: Y * max(0, 1 - tau/||Y||_F).
/// Returns the exact zero matrix when ||Y||_F <= tau.
Matrix block_soft_threshold(const Matrix& Y, double tau);

} // namespace sis
