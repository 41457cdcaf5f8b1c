#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace cellbench::harness {

// One persisted score. fold is -1 for values not tied to a fold.
struct RawValue {
    std::string metric;
    std::string dataset;
    std::string target;
    int fold = 0;
    double value = 0.0; // NaN when undefined
};

struct SummaryRow {
    std::string metric;
    std::string dataset;
    std::string target;
    double mean = 0.0;
    double std = 0.0; // population std over the defined values
    std::size_t n = 0;
};

struct Report {
    std::string benchmark;
    std::string config_hash;
    std::string tool_version;
    std::map<std::string, std::string> tags;
    nlohmann::ordered_json config;
    std::vector<RawValue> raw;
    std::vector<SummaryRow> summary;
    std::vector<std::string> warnings;
};

/// Groups raw values by (metric, dataset, target) in order of first
/// appearance; NaN values are skipped.
std::vector<SummaryRow> summarize(const std::vector<RawValue> &raw);

std::string encode_raw_csv(const std::vector<RawValue> &raw);
std::vector<RawValue> parse_raw_csv(const std::string &text);

nlohmann::ordered_json to_json(const Report &report);
Report report_from_json(const nlohmann::json &j);
Report read_report(const std::filesystem::path &path);

enum class ReportFormat { CsvDir, JsonFile, PlotData };
ReportFormat parse_report_format(const std::string &text);

/// CsvDir: summary.csv plus <metric>.csv per metric family.
/// JsonFile: report.json. PlotData: see emit_plot_data.
void emit_report(const Report &report, ReportFormat format, const std::filesystem::path &out_dir);

/// bars.csv: one bar per model and score with its std as error column.
/// stages.csv: per (family, stage, score), min and max of the model means.
/// Models are identified by the "model", "family" and "stage" tags.
void emit_plot_data(const std::vector<Report> &reports, const std::filesystem::path &out_dir);

} // namespace cellbench::harness
