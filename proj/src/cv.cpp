#include "sis/cv.hpp"
#include "sis/log.hpp"
#include "sis/parallel.hpp"
#include "sis/problem_core.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace sis {

void FoldPlan::validate() const {
    if (V < 2) throw ConfigError("FoldPlan: V must be >= 2");
    std::vector<int> counts(V, 0);
    for (int f : assignment) {
        if (f < 0 || f >= V) throw ConfigError("FoldPlan: fold id out of range");
        ++counts[f];
    }
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    if (*lo == 0) throw ConfigError("FoldPlan: empty fold");
    if (*hi - *lo > 1) throw ConfigError("FoldPlan: fold sizes differ by > 1");
}

FoldPlan make_folds(int N, int V, std::uint64_t seed) {
    if (V < 2 || V > N) throw ConfigError("make_folds: need 2 <= V <= N");
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    FoldPlan plan;
    plan.V = V;
    plan.seed = seed;
    plan.assignment.resize(N);
    // Chunk the permutation into V contiguous pieces, sizes differing by <= 1.
    int pos = 0;
    for (int v = 0; v < V; ++v) {
        const int size = N / V + (v < N % V ? 1 : 0);
        for (int i = 0; i < size; ++i) plan.assignment[order[pos++]] = v;
    }
    return plan;
}

namespace {

struct FoldResult {
    std::vector<double> errors; // per grid point
    std::vector<bool> valid;
    bool usable = false;
};

FoldResult run_fold(const BlockDesign& design, const Measurements& meas,
                    const LambdaGrid& grid, const FoldPlan& plan, int fold,
                    const ReweightConfig& config) {
    const int N = meas.sensors();
    std::vector<int> train, val;
    for (int i = 0; i < N; ++i)
        (plan.assignment[i] == fold ? val : train).push_back(i);

    BlockDesign train_design = design;
    train_design.G.resize(static_cast<Eigen::Index>(train.size()), design.G.cols());
    Measurements train_meas = meas;
    train_meas.M.resize(static_cast<Eigen::Index>(train.size()), meas.M.cols());
    for (std::size_t i = 0; i < train.size(); ++i) {
        train_design.G.row(static_cast<Eigen::Index>(i)) = design.G.row(train[i]);
        train_meas.M.row(static_cast<Eigen::Index>(i)) = meas.M.row(train[i]);
    }

    FoldResult result;
    if (lambda_max(train_design, train_meas) == 0.0) {
        log::warn("cv: fold %d has lambda_max = 0, skipping", fold);
        return result;
    }

    const auto path = solve_path_warm(train_design, train_meas, grid, config, 1);
    const int n = grid.size();
    result.errors.resize(n);
    result.valid.resize(n);
    const double norm = static_cast<double>(val.size()) * meas.samples();
    for (int i = 0; i < n; ++i) {
        double err = 0.0;
        for (int r : val)
            err += (meas.M.row(r) - design.G.row(r) * path[i].estimate.X)
                       .squaredNorm();
        result.errors[i] = err / norm;
        result.valid[i] = path[i].converged;
    }
    result.usable = true;
    return result;
}

} // namespace

CvSelection select_lambda_cv(const BlockDesign& design, const Measurements& meas,
                             const LambdaGrid& grid, const FoldPlan& plan,
                             const ReweightConfig& config, int jobs) {
    grid.validate();
    plan.validate();
    if (static_cast<int>(plan.assignment.size()) != meas.sensors())
        throw DimensionError("select_lambda_cv: fold plan does not match N");

    std::vector<FoldResult> folds(plan.V);
    parallel_for(static_cast<std::size_t>(plan.V), jobs, [&](std::size_t v) {
        folds[v] = run_fold(design, meas, grid, plan, static_cast<int>(v), config);
    });

    const int n = grid.size();
    CvSelection sel;
    sel.mean_errors.assign(n, 0.0);
    sel.valid.assign(n, true);
    int usable = 0;
    for (const auto& fold : folds) {
        if (!fold.usable) continue;
        ++usable;
        for (int i = 0; i < n; ++i) {
            sel.mean_errors[i] += fold.errors[i];
            sel.valid[i] = sel.valid[i] && fold.valid[i];
        }
    }
    if (usable == 0) throw SelectionError("select_lambda_cv: all folds failed");
    for (double& e : sel.mean_errors) e /= usable;

    int best = -1;
    for (int i = 0; i < n; ++i) {
        if (!sel.valid[i]) continue;
        if (best < 0 || sel.mean_errors[i] < sel.mean_errors[best]) best = i;
    }
    if (best < 0)
        throw SelectionError("select_lambda_cv: no valid grid point");
    sel.lambda_opt = grid.values[best];
    return sel;
}

} // namespace sis
