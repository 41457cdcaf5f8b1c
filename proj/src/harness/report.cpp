#include "cellbench/harness/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <tuple>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"

namespace cellbench::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return std::isnan(v) ? "nan" : io::format_double(v); }

ordered_json json_num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

double num_from_json(const json &j) { return j.is_null() ? kNaN : j.get<double>(); }

// Safe file stem for a metric name.
std::string stem(const std::string &metric) {
    std::string s;
    for (char c : metric)
        s += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
    return s.empty() ? "metric" : s;
}

std::string tag(const Report &r, const char *key) {
    const auto it = r.tags.find(key);
    return it == r.tags.end() ? "" : it->second;
}

void mean_std(const std::vector<double> &v, double &mean, double &std) {
    mean = kNaN;
    std = kNaN;
    if (v.empty()) return;
    double s = 0.0;
    for (double x : v) s += x;
    mean = s / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    std = std::sqrt(ss / static_cast<double>(v.size()));
}

} // namespace

std::vector<SummaryRow> summarize(const std::vector<RawValue> &raw) {
    using Key = std::tuple<std::string, std::string, std::string>;
    std::vector<Key> order;
    std::map<Key, std::vector<double>> values;
    for (const auto &r : raw) {
        Key key{r.metric, r.dataset, r.target};
        auto [it, inserted] = values.try_emplace(key);
        if (inserted) order.push_back(key);
        if (!std::isnan(r.value)) it->second.push_back(r.value);
    }
    std::vector<SummaryRow> out;
    for (const auto &key : order) {
        SummaryRow row{std::get<0>(key), std::get<1>(key), std::get<2>(key)};
        const auto &v = values.at(key);
        mean_std(v, row.mean, row.std);
        row.n = v.size();
        out.push_back(std::move(row));
    }
    return out;
}

std::string encode_raw_csv(const std::vector<RawValue> &raw) {
    std::string out = "metric,dataset,target,fold,value\n";
    for (const auto &r : raw)
        out += io::csv_row({r.metric, r.dataset, r.target, std::to_string(r.fold), num(r.value)});
    return out;
}

std::vector<RawValue> parse_raw_csv(const std::string &text) {
    const auto csv = io::parse_csv(text, "raw.csv");
    const auto cm = csv.column("metric"), cd = csv.column("dataset"), ct = csv.column("target"),
               cf = csv.column("fold"), cv = csv.column("value");
    std::vector<RawValue> out;
    for (const auto &row : csv.rows)
        out.push_back({row[cm], row[cd], row[ct], static_cast<int>(io::parse_int(row[cf], "fold")),
                       row[cv] == "nan" ? kNaN : io::parse_double(row[cv], "value")});
    return out;
}

ordered_json to_json(const Report &r) {
    ordered_json j;
    j["tool"] = "cellbench";
    j["tool_version"] = r.tool_version;
    j["benchmark"] = r.benchmark;
    j["config_hash"] = r.config_hash;
    j["tags"] = r.tags;
    j["config"] = r.config;
    auto &summary = j["summary"] = ordered_json::array();
    for (const auto &s : r.summary)
        summary.push_back({{"metric", s.metric},
                           {"dataset", s.dataset},
                           {"target", s.target},
                           {"mean", json_num(s.mean)},
                           {"std", json_num(s.std)},
                           {"n", s.n}});
    auto &raw = j["raw"] = ordered_json::array();
    for (const auto &v : r.raw)
        raw.push_back({{"metric", v.metric},
                       {"dataset", v.dataset},
                       {"target", v.target},
                       {"fold", v.fold},
                       {"value", json_num(v.value)}});
    j["warnings"] = r.warnings;
    return j;
}

Report report_from_json(const json &j) {
    Report r;
    try {
        r.tool_version = j.at("tool_version").get<std::string>();
        r.benchmark = j.at("benchmark").get<std::string>();
        r.config_hash = j.at("config_hash").get<std::string>();
        r.tags = j.at("tags").get<std::map<std::string, std::string>>();
        if (j.contains("config")) r.config = ordered_json::parse(j.at("config").dump());
        for (const auto &s : j.at("summary"))
            r.summary.push_back({s.at("metric").get<std::string>(), s.at("dataset").get<std::string>(),
                                 s.at("target").get<std::string>(), num_from_json(s.at("mean")),
                                 num_from_json(s.at("std")), s.at("n").get<std::size_t>()});
        for (const auto &v : j.at("raw"))
            r.raw.push_back({v.at("metric").get<std::string>(), v.at("dataset").get<std::string>(),
                             v.at("target").get<std::string>(), v.at("fold").get<int>(),
                             num_from_json(v.at("value"))});
        if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
    } catch (const json::exception &e) {
        throw DataError(DataErrorCode::BadFormat, std::string("report: ") + e.what());
    }
    return r;
}

Report read_report(const std::filesystem::path &path) {
    try {
        return report_from_json(json::parse(io::read_file(path)));
    } catch (const json::parse_error &e) {
        throw DataError(DataErrorCode::BadFormat, path.string() + ": invalid JSON: " + e.what());
    }
}

ReportFormat parse_report_format(const std::string &text) {
    if (text == "csv") return ReportFormat::CsvDir;
    if (text == "json") return ReportFormat::JsonFile;
    if (text == "plot") return ReportFormat::PlotData;
    throw ConfigError("unknown report format '" + text + "' (expected csv|json|plot)");
}

void emit_report(const Report &report, ReportFormat format, const std::filesystem::path &out_dir) {
    switch (format) {
    case ReportFormat::JsonFile:
        io::write_file_atomic(out_dir / "report.json", to_json(report).dump(2) + "\n");
        return;
    case ReportFormat::PlotData:
        emit_plot_data({report}, out_dir);
        return;
    case ReportFormat::CsvDir:
        break;
    }
    std::string summary = "metric,dataset,target,mean,std,n\n";
    for (const auto &s : report.summary)
        summary += io::csv_row({s.metric, s.dataset, s.target, num(s.mean), num(s.std), std::to_string(s.n)});
    io::write_file_atomic(out_dir / "summary.csv", summary);

    std::vector<std::string> metrics;
    std::map<std::string, std::string> files;
    for (const auto &r : report.raw) {
        auto [it, inserted] = files.try_emplace(r.metric, "dataset,target,fold,value\n");
        if (inserted) metrics.push_back(r.metric);
        it->second += io::csv_row({r.dataset, r.target, std::to_string(r.fold), num(r.value)});
    }
    for (const auto &m : metrics)
        io::write_file_atomic(out_dir / (stem(m) + ".csv"), files.at(m));
}

void emit_plot_data(const std::vector<Report> &reports, const std::filesystem::path &out_dir) {
    std::string bars = "model,family,stage,metric,dataset,target,mean,std,lower,upper,n\n";
    using Key = std::tuple<std::string, std::string, std::string, std::string, std::string>;
    std::vector<Key> order;
    std::map<Key, std::vector<double>> by_stage;
    for (const auto &r : reports) {
        const std::string model = tag(r, "model"), family = tag(r, "family"), stage = tag(r, "stage");
        for (const auto &s : r.summary) {
            bars += io::csv_row({model, family, stage, s.metric, s.dataset, s.target, num(s.mean), num(s.std),
                                 num(s.mean - s.std), num(s.mean + s.std), std::to_string(s.n)});
            if (std::isnan(s.mean)) continue;
            Key key{family, stage, s.metric, s.dataset, s.target};
            auto [it, inserted] = by_stage.try_emplace(key);
            if (inserted) order.push_back(key);
            it->second.push_back(s.mean);
        }
    }
    std::string stages = "family,stage,metric,dataset,target,min,max,n_models\n";
    for (const auto &key : order) {
        const auto &v = by_stage.at(key);
        double lo = v.front(), hi = v.front();
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        stages += io::csv_row({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key),
                               std::get<4>(key), num(lo), num(hi), std::to_string(v.size())});
    }
    io::write_file_atomic(out_dir / "bars.csv", bars);
    io::write_file_atomic(out_dir / "stages.csv", stages);
}

} // namespace cellbench::harness
