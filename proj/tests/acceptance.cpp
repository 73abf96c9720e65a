// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.

#include "sis/cv.hpp"
#include "sis/io.hpp"
#include "sis/lmap.hpp"
#include "sis/metrics.hpp"
#include "sis/parallel.hpp"
#include "sis/problem_core.hpp"
#include "sis/simulation.hpp"
#include "sis/sure.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace sis;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, name,
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- criterion 1: solver optimality on 50 seeded instances ---
void criterion_solver_optimality() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 0; seed < 50 && ok; ++seed) {
        auto inst = oracle::random_instance(20, 30, 3, 5, 9000 + seed, 3, 2.0);
        auto design = oracle::to_design(inst);
        auto meas = oracle::to_meas(inst.M);
        const double scale = 0.5 * inst.M.squaredNorm();
        const double lambda = 0.3 * lambda_max(design, meas);

        SolverConfig cfg;
        cfg.tol_rel = 1e-8;
        auto rep = mxne_solve(design, meas, lambda, nullptr, cfg);
        if (!rep.converged || rep.gap > 1e-8 * scale) {
            ok = false;
            detail = "duality gap not certified at seed " + std::to_string(seed);
            break;
        }
        if (kkt_violation(design, meas, lambda, rep.estimate.X) > 1e-6 * lambda) {
            ok = false;
            detail = "KKT violation too large at seed " + std::to_string(seed);
            break;
        }
        Matrix ox = oracle::mxne_prox_gradient(inst.G, inst.M, 3, lambda,
                                               1e-10 * scale);
        const double diff =
            std::abs(objective_mxne(design, meas, rep.estimate.X, lambda) -
                     objective_mxne(design, meas, ox, lambda));
        if (diff > 1e-8 * scale) {
            ok = false;
            detail = "objective off oracle by " + std::to_string(diff) +
                     " at seed " + std::to_string(seed);
        }
    }
    const double elapsed = seconds_since(start);
    if (ok && elapsed > 5.0) {
        ok = false;
        detail = "runtime " + std::to_string(elapsed) + "s > 5s";
    }
    report(1, "solver optimality (gap, KKT, prox-gradient oracle, <= 5 s)", ok,
           detail.empty() ? std::to_string(elapsed) + "s" : detail);
}

// --- criterion 2: lambda_max certificate, exact zero side ---
void criterion_lambda_max_certificate() {
    bool ok = true;
    std::string detail;
    SolverConfig cfg;
    for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
        auto inst = oracle::random_instance(15, 20, 3, 4, 500 + seed, 2, 1.5);
        auto design = oracle::to_design(inst);
        auto meas = oracle::to_meas(inst.M);
        const double lmax = lambda_max(design, meas);
        auto above = mxne_solve(design, meas, 1.0001 * lmax, nullptr, cfg);
        if (!above.estimate.X.isZero(0)) {
            ok = false;
            detail = "nonzero above lambda_max at seed " + std::to_string(seed);
            break;
        }
        auto below = mxne_solve(design, meas, 0.99 * lmax, nullptr, cfg);
        if (below.estimate.X.isZero(0)) {
            ok = false;
            detail = "zero below lambda_max at seed " + std::to_string(seed);
        }
    }
    report(2, "lambda_max certificate (100 instances, exact zero side)", ok,
           detail);
}

// --- criterion 3: irMxNE MM descent, K=1 bit-match ---
void criterion_irmxne_descent() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 0; seed < 50 && ok; ++seed) {
        auto inst = oracle::random_instance(20, 30, 3, 5, 7000 + seed, 3, 2.0);
        auto design = oracle::to_design(inst);
        auto meas = oracle::to_meas(inst.M);
        const double lambda = 0.3 * lambda_max(design, meas);

        ReweightConfig one;
        one.K = 1;
        auto plain = mxne_solve(design, meas, lambda, nullptr, one.inner);
        auto k1 = irmxne_solve(design, meas, lambda, one);
        if (!(plain.estimate.X == k1.estimate.X)) {
            ok = false;
            detail = "K=1 does not bit-match MxNE at seed " + std::to_string(seed);
            break;
        }

        ReweightConfig step = one;
        Matrix X = k1.estimate.X;
        double prev = objective_irmxne(design, meas, X, lambda);
        for (int k = 2; k <= 5; ++k) {
            auto rep = irmxne_solve(design, meas, lambda, step, &X);
            X = rep.estimate.X;
            const double obj = objective_irmxne(design, meas, X, lambda);
            if (obj > prev + 100 * rep.tol_used) {
                ok = false;
                detail = "objective increased at seed " + std::to_string(seed) +
                         " iteration " + std::to_string(k);
                break;
            }
            prev = obj;
        }
    }
    report(3, "irMxNE MM descent over K=5, K=1 bit-match", ok, detail);
}

// --- criterion 4: warm-start path equivalence ---
void criterion_path_equivalence() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 0; seed < 10 && ok; ++seed) {
        auto inst = oracle::random_instance(20, 30, 3, 5, 3000 + seed, 3, 2.0);
        auto design = oracle::to_design(inst);
        auto meas = oracle::to_meas(inst.M);
        auto grid = make_grid(lambda_max(design, meas), 10, 0.1);
        ReweightConfig cfg;
        cfg.K = 5;
        auto path = solve_path_warm(design, meas, grid, cfg, 2);
        for (int i = 0; i < grid.size(); ++i) {
            auto cold = irmxne_solve(design, meas, grid.values[i], cfg);
            const double warm_obj = objective_irmxne(design, meas,
                                                     path[i].estimate.X,
                                                     grid.values[i]);
            const double cold_obj = objective_irmxne(design, meas,
                                                     cold.estimate.X,
                                                     grid.values[i]);
            if (std::abs(warm_obj - cold_obj) > 100 * path[i].tol_used) {
                ok = false;
                detail = "objective mismatch at seed " + std::to_string(seed) +
                         " grid point " + std::to_string(i);
                break;
            }
        }
    }
    report(4, "warm-start path equals cold solves (10-point grid, 10 seeds)",
           ok, detail);
}

// --- criterion 5: FDMC dof machinery against closed-form estimators ---
void criterion_dof_oracles() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;

    const int N = 100, T = 50; // NT = 5000
    auto probe = ProbeState::draw(N, T, 1.0, 17);
    const double dof_id =
        fdmc_dof([](const Matrix& Y) { return Y; }, Matrix::Zero(N, T), probe);
    if (std::abs(dof_id - N * T) > 4.0 * std::sqrt(2.0 * N * T)) {
        ok = false;
        detail = "identity-map dof " + std::to_string(dof_id);
    }

    if (ok) {
        const int n = 40, t_cols = 5;
        std::mt19937_64 rng(4);
        std::normal_distribution<double> gauss;
        // Diagonal dominance keeps tr(A) well away from zero so the 5%
        // relative tolerance is meaningful.
        Matrix A = 0.5 * Matrix::Identity(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) += gauss(rng) / n;
        Matrix M(n, t_cols);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < t_cols; ++j) M(i, j) = gauss(rng);
        double mean_dof = 0.0;
        for (int r = 0; r < 200; ++r)
            mean_dof += fdmc_dof([&](const Matrix& Y) { return A * Y; }, M,
                                 ProbeState::draw(n, t_cols, 1.0, 100 + r));
        mean_dof /= 200.0;
        const double want = t_cols * A.trace();
        if (std::abs(mean_dof - want) > 0.05 * std::abs(want)) {
            ok = false;
            detail = "linear-smoother mean dof " + std::to_string(mean_dof) +
                     " vs " + std::to_string(want);
        }
    }
    const double elapsed = seconds_since(start);
    if (ok && elapsed > 10.0) {
        ok = false;
        detail = "runtime " + std::to_string(elapsed) + "s > 10s";
    }
    report(5, "FDMC dof oracle (identity map, linear smoother, <= 10 s)", ok,
           detail);
}

// Shared runs for criteria 6 and 7: default scenario at amplitude 8,
// 20 seeds, SURE and spatial CV.
struct TrendRun {
    double sure_risk_ratio = 0.0;
    double sure_precision = 0.0, sure_recall = 0.0;
    double cv_recall = 0.0;
    int sure_sources = 0, cv_sources = 0;
};

std::vector<TrendRun> run_trend_suite() {
    const int n_seeds = 20;
    std::vector<TrendRun> runs(n_seeds);
    parallel_for(n_seeds, 4, [&](std::size_t seed) {
        SimulationSpec spec = default_scenario();
        spec.amplitude = 8.0;
        spec.seed = 100 + 1000 * seed;
        spec.noise_seed = spec.seed + 1;
        auto [design, meas, truth] = simulate(spec);
        auto grid = make_grid(lambda_max(design, meas), 20, 0.1);
        ReweightConfig cfg; // K = 5

        auto sure = select_lambda_sure(design, meas, grid, cfg, seed);
        double risk_opt = 0.0, risk_min = -1.0;
        const SourceEstimate* chosen = nullptr;
        for (const auto& eval : sure.evals) {
            const double risk =
                (design.G * (eval.estimate.X - truth.X_true)).squaredNorm();
            if (risk_min < 0 || risk < risk_min) risk_min = risk;
            if (eval.lam == sure.lambda_opt) {
                risk_opt = risk;
                chosen = &eval.estimate;
            }
        }
        TrendRun run;
        run.sure_risk_ratio = risk_opt / std::max(risk_min, 1e-300);
        std::vector<Point3> est_pos;
        for (int s : chosen->active_set) est_pos.push_back(design.positions[s]);
        auto stats = delta_stats(est_pos, truth.positions, 7.0);
        run.sure_precision = stats.precision;
        run.sure_recall = stats.recall;
        run.sure_sources = static_cast<int>(chosen->active_set.size());

        auto plan = make_folds(spec.N, 5, seed);
        auto cv = select_lambda_cv(design, meas, grid, plan, cfg);
        auto refit = irmxne_solve(design, meas, cv.lambda_opt, cfg);
        est_pos.clear();
        for (int s : refit.estimate.active_set)
            est_pos.push_back(design.positions[s]);
        auto cv_stats = delta_stats(est_pos, truth.positions, 7.0);
        run.cv_recall = cv_stats.recall;
        run.cv_sources = static_cast<int>(refit.estimate.active_set.size());
        runs[seed] = run;
    });
    return runs;
}

void criterion_sure_quality(const std::vector<TrendRun>& runs) {
    int within = 0;
    for (const auto& run : runs)
        if (run.sure_risk_ratio <= 1.5) ++within;
    const bool ok = within >= static_cast<int>(runs.size()) * 8 / 10;
    report(6, "SURE-selected risk within 1.5x of grid optimum in >= 80% of seeds",
           ok, std::to_string(within) + "/" + std::to_string(runs.size()));
}

void criterion_trend(const std::vector<TrendRun>& runs, double elapsed) {
    std::vector<double> sure_prec, sure_rec, cv_rec, sure_src, cv_src;
    for (const auto& run : runs) {
        sure_prec.push_back(run.sure_precision);
        sure_rec.push_back(run.sure_recall);
        cv_rec.push_back(run.cv_recall);
        sure_src.push_back(run.sure_sources);
        cv_src.push_back(run.cv_sources);
    }
    bool ok = true;
    std::string detail;
    if (median(sure_prec) != 1.0) {
        ok = false;
        detail = "median SURE precision " + std::to_string(median(sure_prec));
    } else if (median(cv_rec) < median(sure_rec)) {
        ok = false;
        detail = "median CV recall " + std::to_string(median(cv_rec)) +
                 " < SURE recall " + std::to_string(median(sure_rec));
    } else if (!(median(cv_src) > median(sure_src))) {
        // Honest failure: CV does choose smaller lambda and at least as large
        // a support in nearly every seed, but with iid sensor rows the
        // reweighted support is so stable that the medians tie.
        int strictly = 0, at_least = 0;
        double mean_cv = 0.0, mean_sure = 0.0;
        for (const auto& run : runs) {
            if (run.cv_sources > run.sure_sources) ++strictly;
            if (run.cv_sources >= run.sure_sources) ++at_least;
            mean_cv += run.cv_sources;
            mean_sure += run.sure_sources;
        }
        ok = false;
        detail = "median CV support " + std::to_string(median(cv_src)) +
                 " not strictly larger than SURE " +
                 std::to_string(median(sure_src)) + " (CV >= SURE in " +
                 std::to_string(at_least) + "/" + std::to_string(runs.size()) +
                 " seeds, strictly > in " + std::to_string(strictly) +
                 ", mean support " + std::to_string(mean_cv / runs.size()) +
                 " vs " + std::to_string(mean_sure / runs.size()) + ")";
    } else if (elapsed > 600.0) {
        ok = false;
        detail = "runtime " + std::to_string(elapsed) + "s > 600s";
    }
    if (ok)
        detail = "precision(SURE)=" + std::to_string(median(sure_prec)) +
                 ", recall CV/SURE=" + std::to_string(median(cv_rec)) + "/" +
                 std::to_string(median(sure_rec)) + ", support CV/SURE=" +
                 std::to_string(median(cv_src)) + "/" +
                 std::to_string(median(sure_src)) + ", " +
                 std::to_string(elapsed) + "s";
    report(7, "simulated trend: SURE precise, CV high-recall large-support",
           ok, detail);
}

// --- criterion 8: lambda-MAP contract ---
void criterion_lmap() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 0; seed < 5 && ok; ++seed) {
        auto inst = oracle::random_instance(15, 12, 3, 4, 40 + seed, 2, 2.0);
        auto design = oracle::to_design(inst);
        auto meas = oracle::to_meas(inst.M);
        LmapConfig cfg;
        cfg.beta = 10.0;
        cfg.n_iter = 30;
        cfg.reweight.K = 3;
        auto result = select_lambda_map(design, meas, cfg);
        if (result.alpha != (result.lambda_max_value / 2.0) * cfg.beta + 1.0) {
            ok = false;
            detail = "alpha identity violated at seed " + std::to_string(seed);
            break;
        }
        if (result.converged) {
            const double tol = 1e-4 * result.lambda_max_value;
            const double step = std::abs(
                result.trace.back() - result.trace[result.trace.size() - 2]);
            if (step >= tol) {
                ok = false;
                detail = "stopping rule violated at seed " + std::to_string(seed);
            }
        }
    }
    if (ok) {
        // Tiny beta drives the update far above lambda_max: warning must fire.
        auto inst = oracle::random_instance(10, 6, 3, 3, 99);
        auto design = oracle::to_design(inst);
        auto meas = oracle::to_meas(inst.M);
        LmapConfig cfg;
        cfg.beta = 1e-3;
        cfg.lambda0 = 2.0 * lambda_max(design, meas);
        auto result = select_lambda_map(design, meas, cfg);
        if (!result.over_lambda_max) {
            ok = false;
            detail = "over-lambda_max warning did not fire";
        }
    }
    report(8, "lambda-MAP fixed point, alpha identity, over-lambda_max warning",
           ok, detail);
}

// --- criterion 9: CV determinism and train/validation hygiene ---
void criterion_cv_hygiene() {
    bool ok = true;
    std::string detail;
    auto inst = oracle::random_instance(16, 12, 3, 4, 8, 2, 2.0);
    auto design = oracle::to_design(inst);
    auto meas = oracle::to_meas(inst.M);
    auto grid = make_grid(lambda_max(design, meas), 6, 0.1);
    ReweightConfig cfg;
    cfg.K = 2;

    auto plan_a = make_folds(16, 4, 77);
    auto plan_b = make_folds(16, 4, 77);
    if (plan_a.assignment != plan_b.assignment) {
        ok = false;
        detail = "fold plans differ for identical seeds";
    } else {
        auto sel_a = select_lambda_cv(design, meas, grid, plan_a, cfg);
        auto sel_b = select_lambda_cv(design, meas, grid, plan_b, cfg, 4);
        if (sel_a.lambda_opt != sel_b.lambda_opt) {
            ok = false;
            detail = "lambda_opt differs for identical seeds";
        }
    }

    if (ok) {
        // Zeroing validation rows vs removing them: identical training fit.
        const std::vector<int> val_rows = {0, 5, 11};
        BlockDesign removed = design;
        Measurements removed_meas = meas;
        removed.G.resize(13, design.G.cols());
        removed_meas.M.resize(13, 4);
        int k = 0;
        for (int i = 0; i < 16; ++i) {
            if (std::find(val_rows.begin(), val_rows.end(), i) != val_rows.end())
                continue;
            removed.G.row(k) = design.G.row(i);
            removed_meas.M.row(k) = meas.M.row(i);
            ++k;
        }
        BlockDesign zeroed = design;
        Measurements zeroed_meas = meas;
        for (int i : val_rows) {
            zeroed.G.row(i).setZero();
            zeroed_meas.M.row(i).setZero();
        }
        const double lambda = 0.4 * lambda_max(removed, removed_meas);
        auto a = mxne_solve(removed, removed_meas, lambda, nullptr, cfg.inner);
        auto b = mxne_solve(zeroed, zeroed_meas, lambda, nullptr, cfg.inner);
        if (!(a.estimate.X == b.estimate.X)) {
            ok = false;
            detail = "zeroed vs removed validation rows differ";
        }
    }
    report(9, "CV determinism and zeroed-vs-removed row hygiene (exact)", ok,
           detail);
}

// --- criterion 10: NMAT round trip ---
void criterion_nmat() {
    bool ok = true;
    std::string detail;
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "sis_acceptance";
    fs::create_directories(dir);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20 && ok; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 10);
        const int cols = 1 + static_cast<int>(rng() % 10);
        Matrix A(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) A(i, j) = gauss(rng);
        const auto p1 = dir / "a.nmat";
        const auto p2 = dir / "b.nmat";
        io::nmat_write(p1, A);
        Matrix B = io::nmat_read(p1);
        io::nmat_write(p2, B);
        std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
        std::string c1((std::istreambuf_iterator<char>(f1)), {});
        std::string c2((std::istreambuf_iterator<char>(f2)), {});
        if (c1 != c2 ||
            std::memcmp(A.data(), B.data(), sizeof(double) * A.size()) != 0) {
            ok = false;
            detail = "round trip not byte-identical at trial " +
                     std::to_string(trial);
        }
    }
    if (ok) {
        try {
            io::nmat_write(dir / "empty.nmat", Matrix(0, 0));
            ok = false;
            detail = "0x0 write not rejected";
        } catch (const DimensionError&) {
        }
    }
    report(10, "NMAT byte-identical round trip, 0x0 rejection", ok, detail);
}

} // namespace

int main() {
    criterion_solver_optimality();
    criterion_lambda_max_certificate();
    criterion_irmxne_descent();
    criterion_path_equivalence();
    criterion_dof_oracles();
    const auto trend_start = Clock::now();
    const auto runs = run_trend_suite();
    const double trend_elapsed = seconds_since(trend_start);
    criterion_sure_quality(runs);
    criterion_trend(runs, trend_elapsed);
    criterion_lmap();
    criterion_cv_hygiene();
    criterion_nmat();
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
