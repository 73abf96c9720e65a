#include "sis/sure.hpp"
#include "sis/parallel.hpp"
#include "sis/problem_core.hpp"

#include <cmath>
#include <random>

namespace sis {

double fd_step(double sigma, int N) {
    if (!(sigma > 0)) throw ConfigError("fd_step: sigma must be > 0");
    if (N < 1) throw ConfigError("fd_step: N must be >= 1");
    return 2.0 * sigma / std::pow(static_cast<double>(N), 0.3);
}

ProbeState ProbeState::draw(int N, int T, double sigma, std::uint64_t seed) {
    ProbeState probe;
    probe.seed = seed;
    probe.eps_fd = fd_step(sigma, N);
    probe.delta.resize(N, T);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t) probe.delta(i, t) = gauss(rng);
    return probe;
}

double fdmc_dof(const FitMap& fit, const Matrix& M, const ProbeState& probe) {
    if (probe.delta.rows() != M.rows() || probe.delta.cols() != M.cols())
        throw DimensionError("fdmc_dof: probe shape mismatch");
    const Matrix fitted = fit(M);
    const Matrix perturbed = fit(M + probe.eps_fd * probe.delta);
    return (perturbed - fitted).cwiseProduct(probe.delta).sum() / probe.eps_fd;
}

static SureEval assemble_eval(const BlockDesign& design, const Measurements& meas,
                              double lambda, double dof,
                              SourceEstimate estimate, bool valid) {
    SureEval eval;
    eval.lam = lambda;
    eval.dof = dof;
    eval.residual_energy =
        (meas.M - design.G * estimate.X).squaredNorm();
    const double s2 = meas.sigma * meas.sigma;
    eval.sure = eval.residual_energy -
                meas.M.size() * s2 + 2.0 * s2 * dof;
    eval.estimate = std::move(estimate);
    eval.valid = valid;
    return eval;
}

SureEval fdmc_sure(const BlockDesign& design, const Measurements& meas,
                   double lambda, const ProbeState& probe,
                   const ReweightConfig& config) {
    SolveReport base = irmxne_solve(design, meas, lambda, config);
    Measurements perturbed = meas;
    perturbed.M += probe.eps_fd * probe.delta;
    SolveReport shifted = irmxne_solve(design, perturbed, lambda, config);
    const double dof =
        (design.G * (shifted.estimate.X - base.estimate.X))
            .cwiseProduct(probe.delta)
            .sum() /
        probe.eps_fd;
    return assemble_eval(design, meas, lambda, dof, std::move(base.estimate),
                         base.converged && shifted.converged);
}

SureSelection select_lambda_sure(const BlockDesign& design,
                                 const Measurements& meas,
                                 const LambdaGrid& grid,
                                 const ReweightConfig& config,
                                 std::uint64_t seed, int n_probes, int jobs) {
    if (n_probes < 1) throw ConfigError("select_lambda_sure: n_probes >= 1");
    grid.validate();
    const int n = grid.size();

    const std::vector<SolveReport> base_path =
        solve_path_warm(design, meas, grid, config, jobs);

    // One probe per replicate, each shared across every grid point.
    std::vector<ProbeState> probes;
    probes.reserve(n_probes);
    for (int r = 0; r < n_probes; ++r)
        probes.push_back(ProbeState::draw(meas.sensors(), meas.samples(),
                                          meas.sigma, seed + r));

    std::vector<std::vector<SolveReport>> shifted_paths(n_probes);
    parallel_for(static_cast<std::size_t>(n_probes), jobs, [&](std::size_t r) {
        Measurements perturbed = meas;
        perturbed.M += probes[r].eps_fd * probes[r].delta;
        shifted_paths[r] = solve_path_warm(design, perturbed, grid, config,
                                           n_probes > 1 ? 1 : jobs);
    });

    SureSelection sel;
    sel.evals.resize(n);
    for (int i = 0; i < n; ++i) {
        bool valid = base_path[i].converged;
        double dof = 0.0;
        for (int r = 0; r < n_probes; ++r) {
            valid = valid && shifted_paths[r][i].converged;
            dof += (design.G * (shifted_paths[r][i].estimate.X -
                                base_path[i].estimate.X))
                       .cwiseProduct(probes[r].delta)
                       .sum() /
                   probes[r].eps_fd;
        }
        dof /= n_probes;
        sel.evals[i] = assemble_eval(design, meas, grid.values[i], dof,
                                     base_path[i].estimate, valid);
    }

    int best = -1;
    for (int i = 0; i < n; ++i) {
        if (!sel.evals[i].valid) continue;
        if (best < 0 || sel.evals[i].sure < sel.evals[best].sure) best = i;
    }
    if (best < 0)
        throw SelectionError("select_lambda_sure: no valid grid point");
    sel.lambda_opt = grid.values[best];
    return sel;
}

} // namespace sis
