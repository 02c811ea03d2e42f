#include <fstream>
#include <nlohmann/json.hpp>

#include "flr/config.hpp"
#include "flr/csv.hpp"
#include "flr/errors.hpp"
#include "flr/experiment.hpp"

namespace flr {

namespace {

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path.string());
    out << content;
}

}  // namespace

void write_experiment_outputs(const ExperimentReport& report,
                              const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::string summary_csv = "decay,slope,n,method,mean_risk,ci_halfwidth,replicates,agreement_kv_uv\n";
    std::string table_csv = "decay,slope,n,method,mean_risk_x1e4,ci_halfwidth_x1e4\n";
    for (const auto& cell : report.summary.cells) {
        const std::string prefix =
            cell.decay + "," + cell.slope + "," + std::to_string(cell.n) + "," + cell.method;
        summary_csv += prefix + "," + format_double(cell.mean_risk) + "," +
                       format_double(cell.ci_halfwidth) + "," +
                       std::to_string(cell.replicate_count) + ",";
        if (cell.agreement_rate_kv_uv) summary_csv += format_double(*cell.agreement_rate_kv_uv);
        summary_csv += "\n";
        table_csv += prefix + "," + format_double(cell.mean_risk * 1e4) + "," +
                     format_double(cell.ci_halfwidth * 1e4) + "\n";
    }
    write_text(out_dir / "summary.csv", summary_csv);
    write_text(out_dir / "table.csv", table_csv);

    write_text(out_dir / "report.json", report_to_json(report).dump(2) + "\n");

    if (report.config.write_replicates) {
        std::string rep_csv =
            "decay,slope,n,method,replicate,prediction_error,empirical_error,l2_error,"
            "selected_m,oracle_m,oracle_risk\n";
        for (const auto& cell : report.cells) {
            for (const auto& rec : cell.records) {
                rep_csv += rec.decay + "," + rec.slope + "," + std::to_string(rec.n) + "," +
                           rec.method + "," + std::to_string(rec.replicate_index) + "," +
                           format_double(rec.risk.prediction_error) + "," +
                           format_double(rec.risk.empirical_error) + "," +
                           format_double(rec.risk.l2_error) + "," +
                           std::to_string(rec.risk.selected_m) + "," +
                           std::to_string(rec.risk.oracle_m) + "," +
                           format_double(rec.risk.oracle_risk) + "\n";
            }
        }
        write_text(out_dir / "replicates.csv", rep_csv);
    }
}

}  // namespace flr
