#include "flr/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "flr/errors.hpp"

namespace flr {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& j, const std::set<std::string>& known,
                           const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError(context + ": unknown field '" + key + "'");
        }
    }
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return j;
}

template <typename T>
T require_field(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key)) throw ConfigError(context + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(context + ": bad field '" + key + "': " + e.what());
    }
}

template <typename T>
T optional_field(const json& j, const std::string& key, T fallback, const std::string& context) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(context + ": bad field '" + key + "': " + e.what());
    }
}

}  // namespace

ScenarioSpec scenario_from_json(const json& j) {
    const std::string ctx = "scenario";
    reject_unknown_fields(j, {"decay", "J", "p", "slope", "sigma2", "n", "seed",
                              "beta2_exponent_sign"},
                          ctx);
    ScenarioSpec s;
    s.process = parse_decay(require_field<std::string>(j, "decay", ctx));
    s.process.truncation = optional_field<int>(j, "J", 150, ctx);
    s.process.grid_size = optional_field<int>(j, "p", 100, ctx);
    s.slope = parse_slope(require_field<std::string>(j, "slope", ctx));
    s.slope.beta2_exponent_sign = optional_field<int>(j, "beta2_exponent_sign", -1, ctx);
    if (s.slope.beta2_exponent_sign != -1 && s.slope.beta2_exponent_sign != 1) {
        throw ConfigError(ctx + ": beta2_exponent_sign must be -1 or +1");
    }
    s.noise_variance = require_field<double>(j, "sigma2", ctx);
    s.n = require_field<int>(j, "n", ctx);
    s.seed = optional_field<std::uint64_t>(j, "seed", 0, ctx);
    if (s.n < 6) throw ConfigError(ctx + ": n must be >= 6");
    if (!(s.noise_variance > 0.0)) throw ConfigError(ctx + ": sigma2 must be > 0");
    if (s.process.truncation < 1) throw ConfigError(ctx + ": J must be >= 1");
    if (s.process.grid_size < 2) throw ConfigError(ctx + ": p must be >= 2");
    return s;
}

json scenario_to_json(const ScenarioSpec& s) {
    json j;
    j["decay"] = s.process.label();
    j["J"] = s.process.truncation;
    j["p"] = s.process.grid_size;
    j["slope"] = s.slope.label();
    if (s.slope.kind == SlopeSpec::Kind::beta2 && s.slope.beta2_exponent_sign != -1) {
        j["beta2_exponent_sign"] = s.slope.beta2_exponent_sign;
    }
    j["sigma2"] = s.noise_variance;
    j["n"] = s.n;
    j["seed"] = s.seed;
    return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    const std::string ctx = "experiment config";
    reject_unknown_fields(j,
                          {"cells", "grid", "sigma2", "J", "p", "methods", "replicates",
                           "selection", "master_seed", "threads", "write_replicates",
                           "cv_replicate_cap"},
                          ctx);
    ExperimentConfig cfg;

    const double sigma2 = optional_field<double>(j, "sigma2", 0.01, ctx);
    const int truncation = optional_field<int>(j, "J", 150, ctx);
    const int grid_size = optional_field<int>(j, "p", 100, ctx);

    if (j.contains("cells") && j.contains("grid")) {
        throw ConfigError(ctx + ": give either 'cells' or 'grid', not both");
    }
    if (j.contains("cells")) {
        for (const auto& cell_json : j.at("cells")) {
            json filled = cell_json;
            if (!filled.contains("sigma2")) filled["sigma2"] = sigma2;
            if (!filled.contains("J")) filled["J"] = truncation;
            if (!filled.contains("p")) filled["p"] = grid_size;
            cfg.cells.push_back(scenario_from_json(filled));
        }
    } else if (j.contains("grid")) {
        const json& grid = j.at("grid");
        reject_unknown_fields(grid, {"decays", "slopes", "n"}, ctx + ".grid");
        const auto decays = require_field<std::vector<std::string>>(grid, "decays", ctx);
        const auto slopes = require_field<std::vector<std::string>>(grid, "slopes", ctx);
        const auto sizes = require_field<std::vector<int>>(grid, "n", ctx);
        for (const auto& decay : decays) {
            for (const auto& slope : slopes) {
                for (int n : sizes) {
                    ScenarioSpec cell;
                    cell.process = parse_decay(decay);
                    cell.process.truncation = truncation;
                    cell.process.grid_size = grid_size;
                    cell.slope = parse_slope(slope);
                    cell.noise_variance = sigma2;
                    cell.n = n;
                    cfg.cells.push_back(cell);
                }
            }
        }
    } else {
        throw ConfigError(ctx + ": needs 'cells' or 'grid'");
    }

    const auto method_names = optional_field<std::vector<std::string>>(
        j, "methods", {"kv", "uv", "gcv", "cv"}, ctx);
    for (const auto& name : method_names) cfg.methods.push_back(parse_method(name));

    cfg.replicates = optional_field<int>(j, "replicates", 200, ctx);
    cfg.master_seed = optional_field<std::uint64_t>(j, "master_seed", 1, ctx);
    cfg.threads = optional_field<int>(j, "threads", 0, ctx);
    cfg.write_replicates = optional_field<bool>(j, "write_replicates", false, ctx);
    if (j.contains("cv_replicate_cap") && !j.at("cv_replicate_cap").is_null()) {
        cfg.cv_replicate_cap = require_field<int>(j, "cv_replicate_cap", ctx);
    }

    if (j.contains("selection")) {
        const json& sel = j.at("selection");
        reject_unknown_fields(sel, {"theta_kv", "theta_uv", "delta_uv", "max_dim_cap"},
                              ctx + ".selection");
        cfg.selection.theta_kv = optional_field<double>(sel, "theta_kv", 3.725, ctx);
        cfg.selection.theta_uv = optional_field<double>(sel, "theta_uv", 4.5, ctx);
        cfg.selection.delta_uv = optional_field<double>(sel, "delta_uv", 0.05, ctx);
        if (sel.contains("max_dim_cap") && !sel.at("max_dim_cap").is_null()) {
            cfg.selection.max_dim_cap = require_field<int>(sel, "max_dim_cap", ctx);
        }
    }
    cfg.validate();
    return cfg;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
    json j;
    json cells = json::array();
    for (const auto& cell : cfg.cells) {
        json c = scenario_to_json(cell);
        c.erase("seed");  // master_seed governs experiment streams
        cells.push_back(c);
    }
    j["cells"] = cells;
    json methods = json::array();
    for (Method m : cfg.methods) methods.push_back(method_name(m));
    j["methods"] = methods;
    j["replicates"] = cfg.replicates;
    j["selection"] = {{"theta_kv", cfg.selection.theta_kv},
                      {"theta_uv", cfg.selection.theta_uv},
                      {"delta_uv", cfg.selection.delta_uv},
                      {"max_dim_cap", cfg.selection.max_dim_cap
                                          ? json(*cfg.selection.max_dim_cap)
                                          : json(nullptr)}};
    j["master_seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    j["write_replicates"] = cfg.write_replicates;
    j["cv_replicate_cap"] =
        cfg.cv_replicate_cap ? json(*cfg.cv_replicate_cap) : json(nullptr);
    return j;
}

json summary_to_json(const MonteCarloSummary& summary) {
    json rows = json::array();
    for (const auto& cell : summary.cells) {
        json row;
        row["method"] = cell.method;
        row["decay"] = cell.decay;
        row["slope"] = cell.slope;
        row["n"] = cell.n;
        row["mean_risk"] = cell.mean_risk;
        row["ci_halfwidth"] = cell.ci_halfwidth;
        row["replicates"] = cell.replicate_count;
        row["agreement_kv_uv"] =
            cell.agreement_rate_kv_uv ? json(*cell.agreement_rate_kv_uv) : json(nullptr);
        rows.push_back(row);
    }
    return rows;
}

json report_to_json(const ExperimentReport& report) {
    json j;
    j["version"] = report.version;
    j["generated_at"] = report.started_at;
    j["total_seconds"] = report.total_seconds;
    j["config"] = experiment_config_to_json(report.config);
    j["summary"] = summary_to_json(report.summary);
    j["warnings"] = report.summary.warnings;

    json cells = json::array();
    for (const auto& cell : report.cells) {
        json c;
        c["decay"] = cell.scenario.process.label();
        c["slope"] = cell.scenario.slope.label();
        c["n"] = cell.scenario.n;
        c["seconds"] = cell.seconds;
        c["failed_replicates"] = cell.failed_replicates;
        c["failures"] = cell.failures;
        if (report.config.write_replicates) {
            json reps = json::array();
            for (const auto& rec : cell.records) {
                reps.push_back({{"method", rec.method},
                                {"replicate", rec.replicate_index},
                                {"prediction_error", rec.risk.prediction_error},
                                {"empirical_error", rec.risk.empirical_error},
                                {"l2_error", rec.risk.l2_error},
                                {"selected_m", rec.risk.selected_m},
                                {"oracle_m", rec.risk.oracle_m},
                                {"oracle_risk", rec.risk.oracle_risk}});
            }
            c["replicates"] = reps;
        }
        cells.push_back(c);
    }
    j["cells"] = cells;
    return j;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
    return scenario_from_json(load_json_file(path));
}

ExperimentConfig load_experiment_config_file(const std::filesystem::path& path) {
    return experiment_config_from_json(load_json_file(path));
}

}  // namespace flr
