// flr: adaptive functional linear regression experiments.
//
// Subcommands: simulate (draw a dataset from a scenario file), fit (select a
// dimension on CSV data), experiment (Monte Carlo grid), rate (convergence
// slope study).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "flr/config.hpp"
#include "flr/csv.hpp"
#include "flr/errors.hpp"
#include "flr/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::vector<flr::Method> parse_method_list(const std::string& csv) {
    std::vector<flr::Method> methods;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) methods.push_back(flr::parse_method(token));
    }
    if (methods.empty()) throw flr::ConfigError("empty method list");
    return methods;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw flr::Error("cannot write " + path.string());
    out << content;
}

void write_curve_csv(const fs::path& path, const flr::Curve& curve) {
    std::vector<std::vector<double>> rows;
    rows.push_back(curve.grid->points());
    rows.emplace_back(curve.values.data(), curve.values.data() + curve.values.size());
    flr::write_numeric_csv(path, rows, 17);
}

int run_simulate(const fs::path& config_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed_override) {
    flr::ScenarioSpec scenario = flr::load_scenario_file(config_path);
    if (seed_override) scenario.seed = *seed_override;
    flr::GeneratedData data = flr::generate(scenario);
    fs::create_directories(out_dir);
    flr::save_sample_csv(data.sample, out_dir / "curves.csv", out_dir / "responses.csv");
    write_curve_csv(out_dir / "true_beta.csv", data.true_beta);
    write_text_file(out_dir / "scenario.json", flr::scenario_to_json(scenario).dump(2) + "\n");
    std::cout << "simulated n=" << scenario.n << " curves (decay " << scenario.process.label()
              << ", slope " << scenario.slope.label() << ") -> " << out_dir.string() << "\n";
    return 0;
}

int run_fit(const fs::path& curves, const fs::path& responses, const std::string& method_name,
            const flr::SelectionSettings& selection, std::optional<double> sigma2, double holdout,
            std::uint64_t seed, const fs::path& out_dir) {
    const flr::Method method = flr::parse_method(method_name);
    flr::FitFileResult result =
        flr::fit_file(curves, responses, method, selection, sigma2, holdout, seed);

    fs::create_directories(out_dir);
    write_curve_csv(out_dir / "beta_hat.csv", result.beta_hat);

    std::string table_csv;
    json table_json = json::array();
    if (method == flr::Method::kv || method == flr::Method::uv) {
        table_csv = "m,contrast,penalty,criterion,sigma2_m\n";
        for (const auto& rec : result.selection.table) {
            table_csv += std::to_string(rec.m) + "," + flr::format_double(rec.contrast) + "," +
                         flr::format_double(rec.penalty) + "," + flr::format_double(rec.criterion) +
                         "," + flr::format_double(rec.sigma2_m) + "\n";
            table_json.push_back({{"m", rec.m},
                                  {"contrast", rec.contrast},
                                  {"penalty", rec.penalty},
                                  {"criterion", rec.criterion},
                                  {"sigma2_m", rec.sigma2_m}});
        }
    } else {
        table_csv = "m,score\n";
        for (const auto& rec : result.baseline.table) {
            table_csv += std::to_string(rec.m) + "," + flr::format_double(rec.score) + "\n";
            table_json.push_back({{"m", rec.m}, {"score", rec.score}});
        }
    }
    write_text_file(out_dir / "selection.csv", table_csv);

    const int selected = (method == flr::Method::kv || method == flr::Method::uv)
                             ? result.selection.selected_m
                             : result.baseline.selected_m;
    json report;
    report["method"] = method_name;
    report["selected_m"] = selected;
    if (method == flr::Method::kv || method == flr::Method::uv) {
        report["max_dim"] = result.selection.max_dim;
    }
    report["n_train"] = result.n_train;
    report["n_test"] = result.n_test;
    if (result.n_test > 0) report["held_out_mse"] = result.held_out_mse;
    report["table"] = table_json;
    report["warnings"] = result.warnings;
    report["selection"] = {{"theta_kv", selection.theta_kv},
                           {"theta_uv", selection.theta_uv},
                           {"delta_uv", selection.delta_uv}};
    if (sigma2) report["sigma2"] = *sigma2;
    write_text_file(out_dir / "fit.json", report.dump(2) + "\n");

    std::cout << "selected m = " << selected << " (" << method_name << ", n_train "
              << result.n_train << ")";
    if (result.n_test > 0) std::cout << ", held-out mse = " << result.held_out_mse;
    std::cout << "\n";
    return 0;
}

int run_experiment_cmd(flr::ExperimentConfig cfg, const fs::path& out_dir) {
    flr::ExperimentReport report = flr::run_experiment(cfg);
    report.started_at = timestamp_now();
    flr::write_experiment_outputs(report, out_dir);
    std::cout << "wrote " << (out_dir / "summary.csv").string() << " ("
              << report.summary.cells.size() << " cells, " << report.total_seconds << " s)\n";
    for (const auto& warning : report.summary.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    return 0;
}

int run_rate_cmd(const std::string& decay, const std::string& slope, double sigma2,
                 const std::vector<int>& n_list, const std::string& method_name, int replicates,
                 const flr::SelectionSettings& selection, std::uint64_t seed, int threads,
                 const fs::path& out_dir) {
    flr::ScenarioSpec base;
    base.process = flr::parse_decay(decay);
    base.slope = flr::parse_slope(slope);
    base.noise_variance = sigma2;
    base.n = n_list.empty() ? 6 : n_list.front();

    flr::RateStudyResult result = flr::run_rate_study(base, n_list, flr::parse_method(method_name),
                                                      replicates, selection, seed, threads);
    result.report.started_at = timestamp_now();
    flr::write_experiment_outputs(result.report, out_dir);

    json rate;
    rate["slope"] = result.slope;
    rate["intercept"] = result.intercept;
    rate["method"] = method_name;
    rate["decay"] = decay;
    rate["slope_function"] = slope;
    json points = json::array();
    for (const auto& cell : result.summary.cells) {
        points.push_back({{"n", cell.n}, {"mean_risk", cell.mean_risk}});
    }
    rate["points"] = points;
    write_text_file(out_dir / "rate.json", rate.dump(2) + "\n");

    std::cout << "log-log slope = " << result.slope << " over n = {";
    for (size_t i = 0; i < n_list.size(); ++i) std::cout << (i ? "," : "") << n_list[i];
    std::cout << "}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive functional linear regression by penalized principal component selection"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "draw a dataset from a scenario JSON file");
    fs::path sim_config, sim_out = "sim_out";
    std::optional<std::uint64_t> sim_seed;
    simulate->add_option("--config", sim_config, "scenario JSON file")->required();
    simulate->add_option("--out", sim_out, "output directory");
    simulate->add_option("--seed", sim_seed, "override the scenario seed");

    // fit
    auto* fit = app.add_subcommand("fit", "fit CSV data and select a dimension");
    fs::path fit_curves, fit_responses, fit_out = "fit_out";
    std::string fit_method = "uv";
    flr::SelectionSettings fit_selection;
    std::optional<double> fit_sigma2;
    double fit_holdout = 0.2;
    std::uint64_t fit_seed = 1;
    int fit_max_dim = 0;
    fit->add_option("--curves", fit_curves, "curve CSV (header = grid)")->required();
    fit->add_option("--responses", fit_responses, "response CSV (one value per line)")->required();
    fit->add_option("--method", fit_method, "kv, uv, gcv or cv");
    fit->add_option("--sigma2", fit_sigma2, "noise variance (kv only)");
    fit->add_option("--theta-kv", fit_selection.theta_kv, "known-variance penalty constant");
    fit->add_option("--theta-uv", fit_selection.theta_uv, "unknown-variance penalty constant");
    fit->add_option("--delta", fit_selection.delta_uv, "unknown-variance slack constant");
    fit->add_option("--max-dim", fit_max_dim, "override the maximal dimension cap");
    fit->add_option("--holdout", fit_holdout, "held-out fraction (0 disables)");
    fit->add_option("--seed", fit_seed, "seed for the held-out split");
    fit->add_option("--out", fit_out, "output directory");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Monte Carlo study over a scenario grid");
    fs::path exp_config_path, exp_out = "experiment_out";
    std::optional<std::uint64_t> exp_seed;
    std::optional<int> exp_replicates;
    std::optional<std::string> exp_methods;
    std::optional<int> exp_cv_cap;
    bool exp_write_replicates = false;
    int exp_threads = 0;
    experiment->add_option("--config", exp_config_path, "experiment JSON config");
    experiment->add_option("--seed", exp_seed, "master seed");
    experiment->add_option("--replicates", exp_replicates, "replicates per cell");
    experiment->add_option("--methods", exp_methods, "comma list: kv,uv,gcv,cv");
    experiment->add_option("--out", exp_out, "output directory");
    experiment->add_option("--threads", exp_threads, "worker threads (0 = auto)")
        ->envname("FLR_THREADS");
    experiment->add_option("--cv-replicate-cap", exp_cv_cap, "cap cv to this many replicates");
    experiment->add_flag("--write-replicates", exp_write_replicates,
                         "emit per-replicate detail (replicates.csv)");

    // rate
    auto* rate = app.add_subcommand("rate", "convergence-rate study across sample sizes");
    std::string rate_decay = "P1", rate_slope = "ellipsoid:r=2,R=1", rate_method = "kv";
    std::vector<int> rate_n = {200, 500, 1000, 2000};
    double rate_sigma2 = 0.01;
    int rate_replicates = 100, rate_threads = 0;
    std::uint64_t rate_seed = 1;
    flr::SelectionSettings rate_selection;
    fs::path rate_out = "rate_out";
    rate->add_option("--decay", rate_decay, "P1, P2, E, poly:<a> or exp:<a>");
    rate->add_option("--slope", rate_slope, "beta1, beta2 or ellipsoid:r=<r>,R=<R>");
    rate->add_option("--sigma2", rate_sigma2, "noise variance");
    rate->add_option("--n", rate_n, "sample sizes (>= 3 values)")->delimiter(',');
    rate->add_option("--method", rate_method, "selection method");
    rate->add_option("--replicates", rate_replicates, "replicates per size");
    rate->add_option("--seed", rate_seed, "master seed");
    rate->add_option("--threads", rate_threads, "worker threads (0 = auto)")
        ->envname("FLR_THREADS");
    rate->add_option("--out", rate_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim_config, sim_out, sim_seed);
        if (fit->parsed()) {
            if (fit_max_dim > 0) fit_selection.max_dim_cap = fit_max_dim;
            return run_fit(fit_curves, fit_responses, fit_method, fit_selection, fit_sigma2,
                           fit_holdout, fit_seed, fit_out);
        }
        if (experiment->parsed()) {
            flr::ExperimentConfig cfg = exp_config_path.empty()
                                            ? flr::default_experiment_config()
                                            : flr::load_experiment_config_file(exp_config_path);
            if (exp_seed) cfg.master_seed = *exp_seed;
            if (exp_replicates) cfg.replicates = *exp_replicates;
            if (exp_methods) cfg.methods = parse_method_list(*exp_methods);
            if (exp_cv_cap) cfg.cv_replicate_cap = *exp_cv_cap;
            if (exp_threads > 0) cfg.threads = exp_threads;
            if (exp_write_replicates) cfg.write_replicates = true;
            cfg.validate();
            return run_experiment_cmd(std::move(cfg), exp_out);
        }
        if (rate->parsed()) {
            return run_rate_cmd(rate_decay, rate_slope, rate_sigma2, rate_n, rate_method,
                                rate_replicates, rate_selection, rate_seed, rate_threads, rate_out);
        }
    } catch (const flr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const flr::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const flr::GridMismatchError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const flr::InsufficientDataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const flr::DomainError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const flr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
