#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace sis {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Point3 = Eigen::Vector3d;

/// Structural problem (shape/partition) violations.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// NaN/Inf encountered where finite values are required.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or incomplete configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A selector could not produce any valid candidate.
struct SelectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Design matrix with source-block column structure: S blocks of O columns
/// each (P = S*O), plus a 3-D position per source in millimeters.
struct BlockDesign {
    Matrix G;                      // N x P
    int S = 0;                     // source count
    int O = 1;                     // orientations per source
    std::vector<Point3> positions; // one per source, mm

    int sensors() const { return static_cast<int>(G.rows()); }
    int cols() const { return static_cast<int>(G.cols()); }

    /// N x O column slice for source s.
    Eigen::Block<const Matrix> block(int s) const {
        return G.block(0, s * O, G.rows(), O);
    }
    Eigen::Block<Matrix> block(int s) {
        return G.block(0, s * O, G.rows(), O);
    }

    /// Throws DimensionError / NumericError on invariant violations.
    void validate() const;
};

/// Observation matrix plus the known (whitened-scale) noise level.
struct Measurements {
    Matrix M;           // N x T
    double sigma = 1.0;

    int sensors() const { return static_cast<int>(M.rows()); }
    int samples() const { return static_cast<int>(M.cols()); }

    void validate() const;
};

/// Coefficient estimate with exact-zero blocks and the derived active set.
struct SourceEstimate {
    Matrix X;                    // P x T
    Vector block_norms;          // length S, Frobenius norm per block
    std::vector<int> active_set; // { s : block_norms[s] != 0 }

    /// Builds the estimate and derives block_norms / active_set from X.
    static SourceEstimate from_matrix(Matrix X, int O);

    bool is_zero() const { return active_set.empty(); }
};

} // namespace sis
