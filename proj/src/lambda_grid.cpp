#include "sis/lambda_grid.hpp"
#include "sis/parallel.hpp"

#include <cmath>

namespace sis {

void LambdaGrid::validate() const {
    if (values.empty()) throw ConfigError("LambdaGrid: empty grid");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0)) throw ConfigError("LambdaGrid: non-positive value");
        if (i > 0 && !(values[i] < values[i - 1]))
            throw ConfigError("LambdaGrid: values not strictly decreasing");
    }
}

LambdaGrid make_grid(double lambda_max, int n, double ratio_min) {
    if (n < 1) throw ConfigError("make_grid: n must be >= 1");
    if (!(ratio_min > 0) || !(ratio_min < 1))
        throw ConfigError("make_grid: ratio_min must be in (0, 1)");
    if (!(lambda_max > 0)) throw ConfigError("make_grid: lambda_max must be > 0");
    LambdaGrid grid;
    grid.ratio_min = ratio_min;
    grid.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        grid.values[i] = lambda_max * std::pow(ratio_min, t);
    }
    return grid;
}

std::vector<SolveReport> solve_path_warm(const BlockDesign& design,
                                         const Measurements& meas,
                                         const LambdaGrid& grid,
                                         const ReweightConfig& config,
                                         int jobs) {
    grid.validate();
    config.validate();
    const int n = grid.size();

    // Phase 1: plain MxNE down the grid, warm-started sequentially.
    std::vector<SolveReport> phase1(n);
    Matrix warm = Matrix::Zero(design.G.cols(), meas.M.cols());
    for (int i = 0; i < n; ++i) {
        phase1[i] = mxne_solve(design, meas, grid.values[i], &warm, config.inner);
        warm = phase1[i].estimate.X;
    }
    if (config.K == 1) return phase1;

    // Phase 2: the remaining K-1 reweighted rounds, independent per point.
    std::vector<SolveReport> path(n);
    ReweightConfig rest = config;
    rest.K = config.K - 1;
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
        SolveReport rep = irmxne_solve(design, meas, grid.values[i], rest,
                                       &phase1[i].estimate.X);
        rep.sweeps += phase1[i].sweeps;
        rep.converged = rep.converged && phase1[i].converged;
        path[i] = std::move(rep);
    });
    return path;
}

} // namespace sis
