#include "sis/simulation.hpp"
#include "sis/problem_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace sis {

void SimulationSpec::validate() const {
    if (N < 1 || S < 1 || O < 1 || T < 1)
        throw ConfigError("SimulationSpec: dimensions must be >= 1");
    if (n_active < 0 || n_active > S)
        throw ConfigError("SimulationSpec: n_active must be in [0, S]");
    if (amplitude < 0) throw ConfigError("SimulationSpec: amplitude must be >= 0");
    if (n_active > 0 && amplitude == 0)
        throw ConfigError("SimulationSpec: planted sources need amplitude > 0");
    if (!(sigma > 0)) throw ConfigError("SimulationSpec: sigma must be > 0");
    if (min_separation_mm < 0 || correlation_mm <= 0)
        throw ConfigError("SimulationSpec: invalid geometry parameters");
}

namespace {

// Evenly spread points on a sphere of the given radius (Fibonacci lattice).
std::vector<Point3> sphere_grid(int S, double radius_mm) {
    std::vector<Point3> pts(S);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int s = 0; s < S; ++s) {
        const double z = S == 1 ? 0.0 : 1.0 - 2.0 * s / (S - 1.0);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * s;
        pts[s] = radius_mm * Point3(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

// Hann-windowed sinusoid with peak magnitude 1.
Vector time_course(int T) {
    Vector c(T);
    if (T == 1) {
        c[0] = 1.0;
        return c;
    }
    for (int t = 0; t < T; ++t) {
        const double u = static_cast<double>(t) / (T - 1);
        const double hann = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
        c[t] = hann * std::sin(2.0 * std::numbers::pi * 2.0 * u);
    }
    const double peak = c.cwiseAbs().maxCoeff();
    if (peak == 0.0)
        c.setOnes(); // degenerate window (tiny T)
    else
        c /= peak;
    return c;
}

} // namespace

std::tuple<BlockDesign, Measurements, SimulationTruth>
simulate(const SimulationSpec& spec) {
    spec.validate();
    const int N = spec.N, S = spec.S, O = spec.O, T = spec.T;
    const int P = S * O;

    BlockDesign design;
    design.S = S;
    design.O = O;
    design.positions = sphere_grid(S, 80.0);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Matrix Z(N, P);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < P; ++j) Z(i, j) = gauss(rng);

    // Mix columns of nearby sources through the symmetric square root of a
    // Gaussian kernel over positions.
    Matrix kernel(S, S);
    for (int a = 0; a < S; ++a)
        for (int b = 0; b < S; ++b) {
            const double d2 = (design.positions[a] - design.positions[b]).squaredNorm();
            kernel(a, b) = std::exp(-d2 / (2.0 * spec.correlation_mm * spec.correlation_mm));
        }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel);
    const Matrix mixer = eig.eigenvectors() *
                         eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                         eig.eigenvectors().transpose();

    design.G.resize(N, P);
    Matrix slice(N, S);
    for (int o = 0; o < O; ++o) {
        for (int s = 0; s < S; ++s) slice.col(s) = Z.col(s * O + o);
        slice *= mixer; // mixer is symmetric
        for (int s = 0; s < S; ++s) design.G.col(s * O + o) = slice.col(s);
    }

    // Unit spectral norm per source block.
    for (int s = 0; s < S; ++s) {
        Eigen::JacobiSVD<Matrix> svd(design.block(s));
        const double top = svd.singularValues()[0];
        if (top > 0) design.block(s) /= top;
    }

    // Planted support: seeded shuffle, greedy separation constraint.
    SimulationTruth truth;
    std::vector<int> order(S);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int cand : order) {
        if (static_cast<int>(truth.active_indices.size()) == spec.n_active) break;
        bool ok = true;
        for (int chosen : truth.active_indices)
            if ((design.positions[cand] - design.positions[chosen]).norm() <
                spec.min_separation_mm)
                ok = false;
        if (ok) truth.active_indices.push_back(cand);
    }
    if (static_cast<int>(truth.active_indices.size()) != spec.n_active)
        throw ConfigError("simulate: cannot place n_active sources at the "
                          "requested separation");
    std::sort(truth.active_indices.begin(), truth.active_indices.end());
    for (int s : truth.active_indices) truth.positions.push_back(design.positions[s]);

    truth.X_true = Matrix::Zero(P, T);
    const Vector course = time_course(T);
    for (int s : truth.active_indices) {
        Vector orient(O);
        for (int o = 0; o < O; ++o) orient[o] = gauss(rng);
        orient.normalize();
        truth.X_true.middleRows(s * O, O) =
            spec.amplitude * orient * course.transpose();
    }
    truth.M_clean = design.G * truth.X_true;

    Measurements meas;
    meas.sigma = spec.sigma;
    meas.M.resize(N, T);
    std::mt19937_64 noise_rng(spec.noise_seed);
    std::normal_distribution<double> noise_gauss(0.0, 1.0);
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t)
            meas.M(i, t) = truth.M_clean(i, t) + spec.sigma * noise_gauss(noise_rng);

    return {std::move(design), std::move(meas), std::move(truth)};
}

SimulationSpec default_scenario() {
    SimulationSpec spec;
    spec.N = 50;
    spec.S = 200;
    spec.O = 3;
    spec.T = 20;
    spec.n_active = 2;
    spec.amplitude = 1.0;
    spec.sigma = 1.0;
    spec.min_separation_mm = 60.0;
    return spec;
}

} // namespace sis
