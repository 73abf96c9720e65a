// Batch front-end: config-driven simulate / select / sweep / report pipelines
// over the block-sparse solver library.

#include "sis/cv.hpp"
#include "sis/io.hpp"
#include "sis/lmap.hpp"
#include "sis/log.hpp"
#include "sis/metrics.hpp"
#include "sis/parallel.hpp"
#include "sis/problem_core.hpp"
#include "sis/simulation.hpp"
#include "sis/sure.hpp"
#include "sis/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ExperimentConfig {
    // exactly one of the two data sources
    std::optional<sis::SimulationSpec> scenario;
    struct Files {
        fs::path G, M, positions;
        double sigma = 1.0;
    };
    std::optional<Files> files;

    std::string method = "sure";
    int grid_n = 20;
    double grid_ratio_min = 0.1;
    sis::ReweightConfig reweight;
    double delta_mm = 7.0;

    std::uint64_t sure_seed = 0;
    int sure_n_probes = 1;
    int cv_folds = 5;
    std::uint64_t cv_seed = 0;
    std::optional<double> lmap_beta;
    int lmap_n_iter = 10;

    std::vector<double> sweep_amplitudes = {1, 2, 4, 8};
    int sweep_n_seeds = 20;
    std::vector<std::string> sweep_methods = {"sure", "cv", "lmap"};

    json resolved; // full config echoed into every output
};

template <typename T>
T require_field(const json& obj, const std::string& key, const std::string& ctx) {
    if (!obj.contains(key))
        throw sis::ConfigError("config: missing field '" + ctx + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw sis::ConfigError("config: bad value for field '" + ctx + key + "'");
    }
}

template <typename T>
T optional_field(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    return obj.at(key).get<T>();
}

sis::SimulationSpec parse_scenario(const json& sc) {
    sis::SimulationSpec spec = sis::default_scenario();
    spec.N = optional_field(sc, "N", spec.N);
    spec.S = optional_field(sc, "S", spec.S);
    spec.O = optional_field(sc, "O", spec.O);
    spec.T = optional_field(sc, "T", spec.T);
    spec.n_active = optional_field(sc, "n_active", spec.n_active);
    spec.amplitude = optional_field(sc, "amplitude", spec.amplitude);
    spec.sigma = optional_field(sc, "sigma", spec.sigma);
    spec.seed = optional_field<std::uint64_t>(sc, "seed", spec.seed);
    spec.noise_seed = optional_field<std::uint64_t>(sc, "noise_seed", spec.seed + 1);
    spec.min_separation_mm =
        optional_field(sc, "min_separation_mm", spec.min_separation_mm);
    spec.correlation_mm = optional_field(sc, "correlation_mm", spec.correlation_mm);
    spec.validate();
    return spec;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw sis::ConfigError("config: cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw sis::ConfigError("config: parse error in " + path.string() + ": " +
                               e.what());
    }

    ExperimentConfig cfg;
    const json scenario = require_field<json>(doc, "scenario", "");
    const std::string type = require_field<std::string>(scenario, "type", "scenario.");
    if (type == "simulated") {
        cfg.scenario = parse_scenario(scenario);
    } else if (type == "files") {
        ExperimentConfig::Files files;
        files.G = require_field<std::string>(scenario, "G", "scenario.");
        files.M = require_field<std::string>(scenario, "M", "scenario.");
        files.positions = require_field<std::string>(scenario, "positions", "scenario.");
        files.sigma = optional_field(scenario, "sigma", 1.0);
        cfg.files = files;
    } else {
        throw sis::ConfigError("config: scenario.type must be 'simulated' or 'files'");
    }

    cfg.method = optional_field<std::string>(doc, "method", cfg.method);
    if (cfg.method != "sure" && cfg.method != "cv" && cfg.method != "lmap")
        throw sis::ConfigError("config: method must be one of sure, cv, lmap");

    if (doc.contains("grid")) {
        cfg.grid_n = optional_field(doc["grid"], "n", cfg.grid_n);
        cfg.grid_ratio_min =
            optional_field(doc["grid"], "ratio_min", cfg.grid_ratio_min);
    }
    if (doc.contains("reweight")) {
        cfg.reweight.K = optional_field(doc["reweight"], "K", cfg.reweight.K);
        cfg.reweight.eps_reweight =
            optional_field(doc["reweight"], "eps", cfg.reweight.eps_reweight);
    }
    if (doc.contains("solver")) {
        cfg.reweight.inner.tol_rel =
            optional_field(doc["solver"], "tol_rel", cfg.reweight.inner.tol_rel);
        cfg.reweight.inner.max_iter =
            optional_field(doc["solver"], "max_iter", cfg.reweight.inner.max_iter);
    }
    cfg.delta_mm = optional_field(doc, "delta_mm", cfg.delta_mm);
    if (doc.contains("sure")) {
        cfg.sure_seed = optional_field<std::uint64_t>(doc["sure"], "seed", cfg.sure_seed);
        cfg.sure_n_probes =
            optional_field(doc["sure"], "n_probes", cfg.sure_n_probes);
    }
    if (doc.contains("cv")) {
        cfg.cv_folds = optional_field(doc["cv"], "V", cfg.cv_folds);
        cfg.cv_seed = optional_field<std::uint64_t>(doc["cv"], "seed", cfg.cv_seed);
    }
    if (doc.contains("lmap")) {
        if (doc["lmap"].contains("beta"))
            cfg.lmap_beta = doc["lmap"]["beta"].get<double>();
        cfg.lmap_n_iter = optional_field(doc["lmap"], "n_iter", cfg.lmap_n_iter);
    }
    if (doc.contains("sweep")) {
        cfg.sweep_amplitudes = optional_field(doc["sweep"], "amplitudes",
                                              cfg.sweep_amplitudes);
        cfg.sweep_n_seeds = optional_field(doc["sweep"], "n_seeds", cfg.sweep_n_seeds);
        cfg.sweep_methods =
            optional_field(doc["sweep"], "methods", cfg.sweep_methods);
    }

    // lambda-MAP on real (file) data has no safe default beta; demand one.
    if (cfg.files && cfg.method == "lmap" && !cfg.lmap_beta)
        throw sis::ConfigError(
            "config: field 'lmap.beta' is mandatory with file input");

    cfg.resolved = doc;
    cfg.resolved["version"] = sis::version;
    return cfg;
}

struct Problem {
    sis::BlockDesign design;
    sis::Measurements meas;
    std::optional<sis::SimulationTruth> truth;
};

Problem load_problem(const ExperimentConfig& cfg) {
    Problem problem;
    if (cfg.scenario) {
        auto [design, meas, truth] = sis::simulate(*cfg.scenario);
        problem.design = std::move(design);
        problem.meas = std::move(meas);
        problem.truth = std::move(truth);
    } else {
        problem.design.G = sis::io::read_matrix(cfg.files->G);
        problem.design.positions = sis::io::read_positions(cfg.files->positions);
        problem.design.S = static_cast<int>(problem.design.positions.size());
        if (problem.design.S == 0 ||
            problem.design.G.cols() % problem.design.S != 0)
            throw sis::ConfigError("files: G columns not divisible by source count");
        problem.design.O =
            static_cast<int>(problem.design.G.cols()) / problem.design.S;
        problem.meas.M = sis::io::read_matrix(cfg.files->M);
        problem.meas.sigma = cfg.files->sigma;
        problem.design.validate();
        problem.meas.validate();
    }
    return problem;
}

struct SelectionOutcome {
    double lambda_opt = 0.0;
    double lambda_max_value = 0.0;
    sis::SourceEstimate estimate;
    json curve; // method-specific diagnostics per grid point / iterate
};

SelectionOutcome run_selection(const ExperimentConfig& cfg, const Problem& problem,
                               int jobs) {
    SelectionOutcome out;
    out.lambda_max_value = sis::lambda_max(problem.design, problem.meas);
    if (out.lambda_max_value == 0.0)
        throw sis::SelectionError("selection: lambda_max is 0 (M orthogonal to G)");
    const auto grid =
        sis::make_grid(out.lambda_max_value, cfg.grid_n, cfg.grid_ratio_min);

    if (cfg.method == "sure") {
        auto sel = sis::select_lambda_sure(problem.design, problem.meas, grid,
                                           cfg.reweight, cfg.sure_seed,
                                           cfg.sure_n_probes, jobs);
        out.lambda_opt = sel.lambda_opt;
        for (auto& eval : sel.evals) {
            out.curve.push_back({{"lambda", eval.lam},
                                 {"sure", eval.sure},
                                 {"dof", eval.dof},
                                 {"residual_energy", eval.residual_energy},
                                 {"valid", eval.valid}});
            if (eval.lam == sel.lambda_opt) out.estimate = std::move(eval.estimate);
        }
    } else if (cfg.method == "cv") {
        auto plan = sis::make_folds(problem.meas.sensors(), cfg.cv_folds, cfg.cv_seed);
        auto sel = sis::select_lambda_cv(problem.design, problem.meas, grid, plan,
                                         cfg.reweight, jobs);
        out.lambda_opt = sel.lambda_opt;
        for (int i = 0; i < grid.size(); ++i)
            out.curve.push_back({{"lambda", grid.values[i]},
                                 {"cv_error", sel.mean_errors[i]},
                                 {"valid", static_cast<bool>(sel.valid[i])}});
        // Refit on all sensors at the selected lambda.
        out.estimate = sis::irmxne_solve(problem.design, problem.meas,
                                         sel.lambda_opt, cfg.reweight)
                           .estimate;
    } else {
        sis::LmapConfig lmap;
        lmap.beta = cfg.lmap_beta.value_or(10.0);
        lmap.n_iter = cfg.lmap_n_iter;
        lmap.reweight = cfg.reweight;
        auto result = sis::select_lambda_map(problem.design, problem.meas, lmap);
        out.lambda_opt = result.lambda;
        out.estimate = std::move(result.estimate);
        for (double l : result.trace) out.curve.push_back({{"lambda", l}});
        out.curve.back()["converged"] = result.converged;
        out.curve.back()["over_lambda_max"] = result.over_lambda_max;
    }
    return out;
}

std::vector<sis::Point3> active_positions(const sis::BlockDesign& design,
                                          const sis::SourceEstimate& est) {
    std::vector<sis::Point3> pts;
    for (int s : est.active_set) pts.push_back(design.positions[s]);
    return pts;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

int cmd_simulate(const ExperimentConfig& cfg, const fs::path& out_dir) {
    if (!cfg.scenario)
        throw sis::ConfigError("simulate: scenario.type must be 'simulated'");
    fs::create_directories(out_dir);
    auto [design, meas, truth] = sis::simulate(*cfg.scenario);
    sis::io::nmat_write(out_dir / "G.nmat", design.G);
    sis::io::nmat_write(out_dir / "M.nmat", meas.M);
    sis::io::write_positions(out_dir / "positions.csv", design.positions);
    json truth_doc;
    truth_doc["active_indices"] = truth.active_indices;
    for (const auto& p : truth.positions)
        truth_doc["positions"].push_back({p.x(), p.y(), p.z()});
    truth_doc["config"] = cfg.resolved;
    write_json(out_dir / "truth.json", truth_doc);
    sis::io::nmat_write(out_dir / "X_true.nmat", truth.X_true);
    return 0;
}

int cmd_select(const ExperimentConfig& cfg, const fs::path& out_dir, int jobs) {
    fs::create_directories(out_dir);
    Problem problem = load_problem(cfg);
    auto outcome = run_selection(cfg, problem, jobs);

    json doc;
    doc["method"] = cfg.method;
    doc["lambda_opt"] = outcome.lambda_opt;
    doc["lambda_max"] = outcome.lambda_max_value;
    doc["lambda_ratio"] = outcome.lambda_opt / outcome.lambda_max_value;
    doc["curve"] = outcome.curve;
    doc["n_sources"] = static_cast<int>(outcome.estimate.active_set.size());
    doc["active_set"] = outcome.estimate.active_set;
    doc["explained_variance"] =
        problem.meas.M.squaredNorm() > 0
            ? sis::explained_variance(problem.design, problem.meas,
                                      outcome.estimate.X)
            : 0.0;
    doc["config"] = cfg.resolved;
    write_json(out_dir / "selection.json", doc);
    if (outcome.estimate.X.size() > 0)
        sis::io::nmat_write(out_dir / "estimate.nmat", outcome.estimate.X);
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const fs::path& out_dir, int jobs) {
    if (!cfg.scenario)
        throw sis::ConfigError("sweep: scenario.type must be 'simulated'");
    fs::create_directories(out_dir);

    struct Task {
        std::string method;
        double amplitude;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& method : cfg.sweep_methods)
        for (double amp : cfg.sweep_amplitudes)
            for (int seed = 0; seed < cfg.sweep_n_seeds; ++seed)
                tasks.push_back({method, amp, static_cast<std::uint64_t>(seed)});

    std::vector<std::string> rows(tasks.size());
    sis::parallel_for(tasks.size(), jobs, [&](std::size_t i) {
        const Task& task = tasks[i];
        ExperimentConfig local = cfg;
        local.method = task.method;
        local.scenario->amplitude = task.amplitude;
        local.scenario->seed = cfg.scenario->seed + 1000 * task.seed;
        local.scenario->noise_seed = local.scenario->seed + 1;
        local.sure_seed = cfg.sure_seed + task.seed;
        local.cv_seed = cfg.cv_seed + task.seed;

        Problem problem = load_problem(local);
        auto outcome = run_selection(local, problem, 1);
        auto stats = sis::delta_stats(
            active_positions(problem.design, outcome.estimate),
            problem.truth->positions, cfg.delta_mm);
        const double ev = sis::explained_variance(problem.design, problem.meas,
                                                  outcome.estimate.X);
        const double risk =
            (problem.design.G * (outcome.estimate.X - problem.truth->X_true))
                .squaredNorm();
        char buf[320];
        std::snprintf(buf, sizeof buf,
                      "%s,%.17g,%llu,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g",
                      task.method.c_str(), task.amplitude,
                      static_cast<unsigned long long>(task.seed),
                      outcome.lambda_opt, outcome.lambda_max_value,
                      outcome.lambda_opt / outcome.lambda_max_value,
                      static_cast<int>(outcome.estimate.active_set.size()),
                      stats.precision, stats.recall, ev, risk);
        rows[i] = buf;
        sis::log::info("sweep %zu/%zu done: %s", i + 1, tasks.size(), buf);
    });

    std::ofstream out(out_dir / "results.csv");
    out << "method,amplitude,seed,lambda_opt,lambda_max,lambda_ratio,"
           "n_sources,precision,recall,explained_variance,true_risk\n";
    for (const auto& row : rows) out << row << "\n";
    return 0;
}

int cmd_report(const fs::path& results_path, const fs::path& out_dir) {
    std::ifstream in(results_path);
    if (!in)
        throw std::runtime_error("report: cannot open " + results_path.string());
    fs::create_directories(out_dir);

    std::string line;
    if (!std::getline(in, line) || line.rfind("method,", 0) != 0)
        throw std::runtime_error("report: bad results.csv header");
    std::map<std::string, std::vector<sis::RunResult>> by_method;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 11)
            throw std::runtime_error("report: short row in results.csv");
        sis::RunResult run;
        run.lambda_ratio = std::stod(cells[5]);
        run.n_sources = std::stoi(cells[6]);
        run.explained_variance = std::stod(cells[9]);
        by_method[cells[0]].push_back(run);
    }
    if (by_method.empty()) throw std::runtime_error("report: empty results.csv");

    json summary;
    std::ofstream table(out_dir / "table.csv");
    table << "method,lambda_ratio,explained_variance,n_sources,"
             "pct_zero,pct_one,pct_two,pct_more\n";
    for (const auto& [method, runs] : by_method) {
        const auto agg = sis::summarize(runs);
        summary[method] = {{"lambda_ratio", agg.mean_lambda_ratio},
                           {"explained_variance", agg.mean_explained_variance},
                           {"n_sources", agg.mean_n_sources},
                           {"pct_zero", agg.pct_zero},
                           {"pct_one", agg.pct_one},
                           {"pct_two", agg.pct_two},
                           {"pct_more", agg.pct_more},
                           {"n_runs", runs.size()}};
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g",
                      method.c_str(), agg.mean_lambda_ratio,
                      agg.mean_explained_variance, agg.mean_n_sources,
                      agg.pct_zero, agg.pct_one, agg.pct_two, agg.pct_more);
        table << buf << "\n";
    }
    summary["version"] = sis::version;
    write_json(out_dir / "summary.json", summary);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-sparse multi-task solvers with automatic "
                 "regularization selection"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string results_path;
    int jobs = 1;
    std::optional<std::uint64_t> seed_override;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "JSON experiment config")
                ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_override, "override scenario seed");
        sub->add_option("--jobs", jobs, "parallel worker threads");
    };

    auto* sim = app.add_subcommand("simulate", "generate a synthetic problem");
    add_common(sim, true);
    auto* sel = app.add_subcommand("select", "run one selection experiment");
    add_common(sel, true);
    auto* sweep = app.add_subcommand("sweep",
                                     "amplitude x method x seed grid of runs");
    add_common(sweep, true);
    auto* report = app.add_subcommand("report", "aggregate a sweep results.csv");
    report->add_option("results", results_path, "results.csv from sweep")
        ->required();
    report->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (report->parsed()) return cmd_report(results_path, out_dir);
        ExperimentConfig cfg = load_config(config_path);
        if (seed_override && cfg.scenario) {
            cfg.scenario->seed = *seed_override;
            cfg.scenario->noise_seed = *seed_override + 1;
            cfg.resolved["scenario"]["seed"] = *seed_override;
        }
        if (sim->parsed()) return cmd_simulate(cfg, out_dir);
        if (sel->parsed()) return cmd_select(cfg, out_dir, jobs);
        return cmd_sweep(cfg, out_dir, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
