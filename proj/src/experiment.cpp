#include "flr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "flr/errors.hpp"

namespace flr {

namespace {

SelectionConfig kv_config(const SelectionSettings& sel, double sigma2) {
    SelectionConfig cfg = SelectionConfig::known_variance(sigma2, sel.theta_kv);
    if (sel.max_dim_cap) cfg.set_max_dim_cap(*sel.max_dim_cap);
    return cfg;
}

SelectionConfig uv_config(const SelectionSettings& sel) {
    SelectionConfig cfg = SelectionConfig::unknown_variance(sel.theta_uv, sel.delta_uv);
    if (sel.max_dim_cap) cfg.set_max_dim_cap(*sel.max_dim_cap);
    return cfg;
}

RiskReport make_risk_report(const Curve& fitted, int selected_m, const Curve& true_beta,
                            const EigenSystem& sys, const FunctionalSample& sample,
                            const std::pair<int, double>& oracle) {
    const Curve diff = fitted - true_beta;
    RiskReport report;
    report.prediction_error = gamma_norm_sq(diff, sys);
    report.empirical_error = empirical_norm_sq(diff, sample);
    report.l2_error = norm_sq(diff);
    report.selected_m = selected_m;
    report.oracle_m = oracle.first;
    report.oracle_risk = oracle.second;
    return report;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (cells.empty()) throw ConfigError("experiment needs at least one cell");
    if (methods.empty()) throw ConfigError("experiment needs at least one method");
    if (replicates < 2) throw ConfigError("experiment needs replicates >= 2");
    for (const auto& cell : cells) {
        if (cell.n < 6) throw ConfigError("every cell needs n >= 6");
        if (!(cell.noise_variance > 0.0)) throw ConfigError("every cell needs sigma2 > 0");
    }
    // Constructing the configs validates theta/delta ranges.
    kv_config(selection, cells.front().noise_variance);
    uv_config(selection);
    if (cv_replicate_cap && *cv_replicate_cap < 2) {
        throw ConfigError("cv_replicate_cap must be >= 2");
    }
}

ExperimentConfig default_experiment_config() {
    ExperimentConfig cfg;
    for (const auto& process : {ProcessSpec::p1(), ProcessSpec::p2(), ProcessSpec::e()}) {
        for (const auto& slope : {SlopeSpec::beta1(), SlopeSpec::beta2()}) {
            for (int n : {200, 500, 1000}) {
                ScenarioSpec cell;
                cell.process = process;
                cell.slope = slope;
                cell.noise_variance = 0.01;
                cell.n = n;
                cfg.cells.push_back(cell);
            }
        }
    }
    cfg.methods = {Method::kv, Method::uv, Method::gcv, Method::cv};
    cfg.replicates = 200;
    return cfg;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    struct TaskOutcome {
        std::vector<std::pair<Method, RiskReport>> reports;
        std::string failure;  // empty = success
        double seconds = 0.0;
    };

    const size_t n_cells = cfg.cells.size();
    const size_t reps = static_cast<size_t>(cfg.replicates);
    std::vector<TaskOutcome> outcomes(n_cells * reps);

    auto run_task = [&](size_t task) {
        const size_t cell_idx = task / reps;
        const size_t rep_idx = task % reps;
        TaskOutcome& out = outcomes[task];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ScenarioSpec scenario = cfg.cells[cell_idx];
            scenario.seed = cfg.master_seed;
            const std::uint64_t stream =
                (static_cast<std::uint64_t>(cell_idx) << 32) | static_cast<std::uint64_t>(rep_idx);
            GeneratedData data = generate(scenario, stream);
            FpcaResult fpca = fit_fpca(data.sample);

            const SelectionConfig kv = kv_config(cfg.selection, scenario.noise_variance);
            const int oracle_max = max_dimension(fpca, kv, scenario.n);
            const auto oracle = oracle_dimension(fpca, data.true_beta, data.true_system, oracle_max);

            for (Method method : cfg.methods) {
                switch (method) {
                    case Method::kv: {
                        SelectionResult sel = select_dimension(data.sample, fpca, kv);
                        out.reports.emplace_back(
                            method, make_risk_report(sel.beta_hat, sel.selected_m, data.true_beta,
                                                     data.true_system, data.sample, oracle));
                        break;
                    }
                    case Method::uv: {
                        SelectionResult sel =
                            select_dimension(data.sample, fpca, uv_config(cfg.selection));
                        out.reports.emplace_back(
                            method, make_risk_report(sel.beta_hat, sel.selected_m, data.true_beta,
                                                     data.true_system, data.sample, oracle));
                        break;
                    }
                    case Method::gcv: {
                        BaselineTable table = gcv_select(data.sample, fpca, fpca.rank());
                        const Curve fitted = beta_hat(fpca, table.selected_m);
                        out.reports.emplace_back(
                            method, make_risk_report(fitted, table.selected_m, data.true_beta,
                                                     data.true_system, data.sample, oracle));
                        break;
                    }
                    case Method::cv: {
                        if (cfg.cv_replicate_cap &&
                            rep_idx >= static_cast<size_t>(*cfg.cv_replicate_cap)) {
                            break;
                        }
                        BaselineTable table = cv_select(data.sample, fpca.rank());
                        const Curve fitted = beta_hat(fpca, table.selected_m);
                        out.reports.emplace_back(
                            method, make_risk_report(fitted, table.selected_m, data.true_beta,
                                                     data.true_system, data.sample, oracle));
                        break;
                    }
                }
            }
        } catch (const std::exception& e) {
            out.reports.clear();
            out.failure = e.what();
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const size_t total_tasks = outcomes.size();
    int n_threads = cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min<int>(n_threads, static_cast<int>(total_tasks));

    if (n_threads == 1) {
        for (size_t task = 0; task < total_tasks; ++task) run_task(task);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            workers.emplace_back([&] {
                for (size_t task = next.fetch_add(1); task < total_tasks;
                     task = next.fetch_add(1)) {
                    run_task(task);
                }
            });
        }
        for (auto& worker : workers) worker.join();
    }

    // Deterministic assembly: config order for cells and methods, replicate
    // index within.
    ExperimentReport report;
    report.config = cfg;
    std::vector<ReplicateRecord> records;
    for (size_t cell_idx = 0; cell_idx < n_cells; ++cell_idx) {
        CellResult cell;
        cell.scenario = cfg.cells[cell_idx];
        cell.scenario.seed = cfg.master_seed;
        for (Method method : cfg.methods) {
            for (size_t rep_idx = 0; rep_idx < reps; ++rep_idx) {
                const TaskOutcome& out = outcomes[cell_idx * reps + rep_idx];
                for (const auto& [m, risk] : out.reports) {
                    if (m != method) continue;
                    ReplicateRecord rec;
                    rec.method = method_name(method);
                    rec.decay = cell.scenario.process.label();
                    rec.slope = cell.scenario.slope.label();
                    rec.n = cell.scenario.n;
                    rec.replicate_index = static_cast<int>(rep_idx);
                    rec.risk = risk;
                    cell.records.push_back(rec);
                }
            }
        }
        for (size_t rep_idx = 0; rep_idx < reps; ++rep_idx) {
            const TaskOutcome& out = outcomes[cell_idx * reps + rep_idx];
            cell.seconds += out.seconds;
            if (!out.failure.empty()) {
                ++cell.failed_replicates;
                cell.failures.push_back("replicate " + std::to_string(rep_idx) + ": " +
                                        out.failure);
            }
        }
        records.insert(records.end(), cell.records.begin(), cell.records.end());
        report.cells.push_back(std::move(cell));
    }
    report.summary = aggregate(records);
    for (const auto& cell : report.cells) {
        if (cell.failed_replicates > 0) {
            report.summary.warnings.push_back(
                "cell (" + cell.scenario.process.label() + "," + cell.scenario.slope.label() +
                ",n=" + std::to_string(cell.scenario.n) + "): " +
                std::to_string(cell.failed_replicates) + " failed replicates excluded");
        }
    }
    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

RateStudyResult run_rate_study(const ScenarioSpec& base, const std::vector<int>& n_list,
                               Method method, int replicates, const SelectionSettings& selection,
                               std::uint64_t master_seed, int threads) {
    if (n_list.size() < 3) throw ConfigError("rate study needs at least 3 sample sizes");
    ExperimentConfig cfg;
    for (int n : n_list) {
        if (n < 6) throw ConfigError("rate study needs n >= 6 for every size");
        ScenarioSpec cell = base;
        cell.n = n;
        cfg.cells.push_back(cell);
    }
    cfg.methods = {method};
    cfg.replicates = replicates;
    cfg.selection = selection;
    cfg.master_seed = master_seed;
    cfg.threads = threads;

    RateStudyResult result;
    result.report = run_experiment(cfg);
    result.summary = result.report.summary;

    std::vector<std::pair<double, double>> points;
    for (const auto& cell : result.summary.cells) {
        points.emplace_back(static_cast<double>(cell.n), cell.mean_risk);
    }
    std::tie(result.slope, result.intercept) = rate_fit(points);
    return result;
}

FitFileResult fit_file(const std::filesystem::path& curves, const std::filesystem::path& responses,
                       Method method, const SelectionSettings& selection,
                       std::optional<double> sigma2, double holdout_fraction, std::uint64_t seed) {
    if (holdout_fraction < 0.0 || holdout_fraction >= 1.0) {
        throw ConfigError("holdout fraction must be in [0, 1)");
    }
    FunctionalSample full = load_sample_csv(curves, responses);
    const int n = full.size();
    if (n < 6) {
        throw DomainError(curves.filename().string() + ": needs n >= 6 observations, got " +
                          std::to_string(n));
    }

    int n_test = static_cast<int>(std::lround(holdout_fraction * n));
    if (holdout_fraction > 0.0 && n_test == 0) n_test = 1;
    const int n_train = n - n_test;
    if (n_train < 6) {
        throw DomainError("held-out split leaves only " + std::to_string(n_train) +
                          " training observations; need at least 6");
    }

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed, 0);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }

    const int p = full.grid()->size();
    Eigen::MatrixXd train_X(n_train, p);
    Eigen::VectorXd train_y(n_train);
    for (int i = 0; i < n_train; ++i) {
        train_X.row(i) = full.curves().row(order[static_cast<size_t>(i)]);
        train_y(i) = full.response(order[static_cast<size_t>(i)]);
    }
    const Eigen::RowVectorXd mean_curve = train_X.colwise().mean();
    const double mean_y = train_y.mean();

    FunctionalSample train(full.grid(), std::move(train_X), std::move(train_y));
    FunctionalSample centred = center_sample(train);
    FpcaResult fpca = fit_fpca(centred);
    if (fpca.rank() < 1) throw DegenerateSampleError("training sample has rank 0");

    FitFileResult result;
    result.method = method;
    result.n_train = n_train;
    result.n_test = n_test;

    switch (method) {
        case Method::kv: {
            if (!sigma2) throw ConfigError("known-variance selection needs --sigma2");
            SelectionConfig cfg = SelectionConfig::known_variance(*sigma2, selection.theta_kv);
            if (selection.max_dim_cap) cfg.set_max_dim_cap(*selection.max_dim_cap);
            result.selection = select_dimension(centred, fpca, cfg);
            result.beta_hat = result.selection.beta_hat;
            break;
        }
        case Method::uv: {
            SelectionConfig cfg = uv_config(selection);
            result.selection = select_dimension(centred, fpca, cfg);
            result.beta_hat = result.selection.beta_hat;
            break;
        }
        case Method::gcv: {
            result.baseline = gcv_select(centred, fpca, fpca.rank());
            result.beta_hat = beta_hat(fpca, result.baseline.selected_m);
            break;
        }
        case Method::cv: {
            result.baseline = cv_select(centred, fpca.rank());
            result.beta_hat = beta_hat(fpca, result.baseline.selected_m);
            if (result.baseline.skipped_folds > 0) {
                result.warnings.push_back(std::to_string(result.baseline.skipped_folds) +
                                          " rank-deficient folds skipped in cv");
            }
            break;
        }
    }

    if (n_test > 0) {
        double sum_sq = 0.0;
        const double w = full.grid()->weight();
        for (int i = 0; i < n_test; ++i) {
            const int idx = order[static_cast<size_t>(n_train + i)];
            const Eigen::RowVectorXd centred_row = full.curves().row(idx) - mean_curve;
            const double predicted = mean_y + w * centred_row.dot(result.beta_hat.values);
            const double err = full.response(idx) - predicted;
            sum_sq += err * err;
        }
        result.held_out_mse = sum_sq / n_test;
    } else {
        result.held_out_mse = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

}  // namespace flr
