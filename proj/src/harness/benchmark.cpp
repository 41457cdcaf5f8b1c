#include "cellbench/harness/benchmark.hpp"

#include <cmath>
#include <set>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"
#include "cellbench/evalmetrics/knn_probe.hpp"
#include "cellbench/evalmetrics/retrieval.hpp"
#include "cellbench/evalmetrics/similarity.hpp"
#include "cellbench/harness/folds.hpp"
#include "cellbench/harness/interchange.hpp"
#include "cellbench/harness/profiles.hpp"
#include "cellbench/regress/pipeline.hpp"
#include "cellbench/tissuegraph/spots.hpp"

namespace cellbench::harness {

namespace {

ProfileOptions profile_options(const ProfileSection &s) {
    ProfileOptions o;
    o.center = parse_centering(s.center);
    o.aggregate = parse_aggregate(s.aggregate);
    o.plate_key = s.plate_key;
    o.control_key = s.control_key;
    o.negative_value = s.negative_value;
    return o;
}

// Rows of each fold, in table order.
std::vector<std::vector<std::size_t>> fold_rows(const EmbeddingTable &table, const FoldSpec &folds) {
    std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(folds.n_folds));
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto it = folds.fold_of.find(table.ids[i]);
        if (it != folds.fold_of.end()) rows[static_cast<std::size_t>(it->second)].push_back(i);
    }
    return rows;
}

void run_retrieval(const RunConfig &c, Report &report) {
    const auto &s = c.retrieval;
    if (s.pairs.empty()) throw ConfigError("retrieval.pairs is required");
    if (!(s.q > 0.0 && s.q < 1.0)) throw ConfigError("retrieval.q must be in (0, 1)");
    metrics::Tail tail;
    if (s.tail == "top") tail = metrics::Tail::Top;
    else if (s.tail == "bottom") tail = metrics::Tail::Bottom;
    else throw ConfigError("retrieval.tail must be top or bottom");
    metrics::RecallMode mode;
    if (s.mode == "global") mode = metrics::RecallMode::Global;
    else if (s.mode == "per_query") mode = metrics::RecallMode::PerQuery;
    else throw ConfigError("retrieval.mode must be global or per_query");
    const ProfileOptions popts = profile_options(c.profiles);

    const EmbeddingTable table = read_table(c.resolve(c.table));
    const auto pair_sets = metrics::read_pairs(c.resolve(s.pairs));
    const FoldSpec folds = make_folds(table, PerGeneSubsample{s.n_per, s.folds, s.gene_key}, c.seed);
    report.warnings.insert(report.warnings.end(), folds.warnings.begin(), folds.warnings.end());
    const std::string metric = tail == metrics::Tail::Top ? "recall_top" : "recall_bottom";

    const auto rows = fold_rows(table, folds);
    for (int f = 0; f < folds.n_folds; ++f) {
        const auto profiles = build_profiles(table.subset(rows[static_cast<std::size_t>(f)]), s.gene_key, popts);
        const auto sim = metrics::cosine_matrix(profiles);
        for (const auto &ps : pair_sets) {
            const auto r = metrics::recall_at_tail(sim, ps, s.q, tail, mode);
            report.raw.push_back({metric, "", ps.source, f, r.recall});
            if (!r.unresolved_ids.empty())
                report.warnings.push_back("fold " + std::to_string(f) + ", " + ps.source + ": " +
                                          std::to_string(r.unresolved_ids.size()) + " ids without a profile");
        }
    }
}

void run_map(const RunConfig &c, Report &report) {
    const auto &s = c.map;
    const ProfileOptions popts = profile_options(c.profiles);
    const std::set<std::string> excluded(s.exclude_labels.begin(), s.exclude_labels.end());

    const EmbeddingTable table = read_table(c.resolve(c.table));
    std::vector<std::vector<std::size_t>> rows;
    if (s.folds > 0) {
        const FoldSpec folds = make_folds(table, PlateGrouped{s.folds, s.plates_per_lab, popts.plate_key, s.lab_key}, c.seed);
        report.warnings.insert(report.warnings.end(), folds.warnings.begin(), folds.warnings.end());
        rows = fold_rows(table, folds);
    } else {
        rows.emplace_back();
        for (std::size_t i = 0; i < table.size(); ++i) rows.back().push_back(i);
    }

    for (std::size_t f = 0; f < rows.size(); ++f) {
        const EmbeddingTable sub = table.subset(rows[f]);
        Matrix values;
        std::vector<std::string> labels;
        if (!s.profile_key.empty()) {
            const auto profiles = build_profiles(sub, s.profile_key, popts);
            values = profiles.matrix();
            for (std::size_t i = 0; i < profiles.size(); ++i) labels.push_back(profiles.require_meta(i, s.label_key));
        } else {
            values = popts.center == Centering::NegControlPerPlate ? center_on_negative_controls(sub, popts) : sub.matrix();
            for (std::size_t i = 0; i < sub.size(); ++i) labels.push_back(sub.require_meta(i, s.label_key));
        }
        for (auto &l : labels)
            if (excluded.count(l)) l.clear();

        const auto result = metrics::map_retrieval(values, labels);
        const int fold = static_cast<int>(f);
        for (const auto &[group, ap] : result.group_ap) report.raw.push_back({"ap", "", group, fold, ap});
        report.raw.push_back({"map", "", "", fold, result.mean_ap});
        for (const auto &g : result.excluded_groups)
            report.warnings.push_back("fold " + std::to_string(f) + ": group '" + g + "' has a single member");
    }
}

void run_regression(const RunConfig &c, Report &report) {
    const auto &s = c.regression;
    if (s.targets.empty()) throw ConfigError("regression.targets is required");
    if (!(s.alpha >= 0.0)) throw ConfigError("regression.alpha must be >= 0");
    if (s.components == 0) throw ConfigError("regression.components must be positive");

    const EmbeddingTable table = read_table(c.resolve(c.table));
    std::vector<std::string> genes;
    const auto targets = graph::read_targets(c.resolve(s.targets), genes);

    const Matrix x = table.matrix();
    Matrix y(x.rows(), static_cast<Eigen::Index>(genes.size()));
    std::vector<int> fold_of_row(table.size(), -1);
    std::vector<std::string> dataset_of_row(table.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto *fold = table.meta_value(i, s.fold_key);
        if (!fold) continue;
        const auto it = targets.find(table.ids[i]);
        if (it == targets.end())
            throw DataError(DataErrorCode::UnresolvedIds, "no targets for item '" + table.ids[i] + "'");
        for (std::size_t g = 0; g < genes.size(); ++g)
            y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(g)) = it->second[g];
        fold_of_row[i] = static_cast<int>(io::parse_int(*fold, s.fold_key));
        if (const auto *ds = table.meta_value(i, s.dataset_key)) dataset_of_row[i] = *ds;
        ++assigned;
    }
    if (assigned == 0)
        throw DataError(DataErrorCode::MissingKey, "no item carries the fold key '" + s.fold_key + "'");
    // Unassigned rows never enter the pipeline; keep their targets finite.
    for (std::size_t i = 0; i < table.size(); ++i)
        if (fold_of_row[i] < 0) y.row(static_cast<Eigen::Index>(i)).setZero();

    const auto result = regress::hest_pipeline(x, y, fold_of_row, dataset_of_row, genes,
                                               {s.components, s.alpha, s.fit_intercept});
    for (const auto &fo : result.folds) {
        for (std::size_t g = 0; g < genes.size(); ++g) report.raw.push_back({"pcc", fo.dataset, genes[g], fo.fold, fo.pcc[g]});
        report.raw.push_back({"fold_pcc", fo.dataset, "", fo.fold, fo.mean_pcc()});
        if (fo.pca.capped)
            report.warnings.push_back("dataset '" + fo.dataset + "' fold " + std::to_string(fo.fold) + ": PCA capped at " +
                                      std::to_string(fo.pca.components.rows()) + " components");
    }
}

void run_knn(const RunConfig &c, Report &report) {
    const auto &s = c.knn;
    if (s.test_table.empty()) throw ConfigError("knn.test_table is required");
    if (s.k == 0) throw ConfigError("knn.k must be positive");
    const EmbeddingTable train = read_table(c.resolve(c.table));
    const EmbeddingTable test = read_table(c.resolve(s.test_table));
    std::vector<std::string> train_labels, test_labels;
    for (std::size_t i = 0; i < train.size(); ++i) train_labels.push_back(train.require_meta(i, s.label_key));
    for (std::size_t i = 0; i < test.size(); ++i) test_labels.push_back(test.require_meta(i, s.label_key));
    const auto r = metrics::knn_probe(train.matrix(), train_labels, test.matrix(), test_labels, s.k);
    report.raw.push_back({"knn_accuracy", "", "", 0, r.accuracy});
}

void add_global_pcc(Report &report) {
    std::vector<double> dataset_means;
    for (const auto &row : report.summary)
        if (row.metric == "fold_pcc" && row.n > 0) dataset_means.push_back(row.mean);
    SummaryRow global{"global_pcc", "", "", std::nan(""), std::nan(""), dataset_means.size()};
    if (!dataset_means.empty()) {
        double s = 0.0;
        for (double m : dataset_means) s += m;
        global.mean = s / static_cast<double>(dataset_means.size());
        double ss = 0.0;
        for (double m : dataset_means) ss += (m - global.mean) * (m - global.mean);
        global.std = std::sqrt(ss / static_cast<double>(dataset_means.size()));
    }
    report.summary.push_back(global);
}

} // namespace

Report run_benchmark(const RunConfig &config) {
    Report report;
    report.benchmark = to_string(config.kind);
    report.config = to_json(config);
    report.config_hash = config_hash(config);
    report.tool_version = kToolVersion;
    report.tags = config.tags;
    if (!report.tags.count("model")) report.tags["model"] = table_prefix(config.table).filename().string();

    const std::string context = std::string(report.benchmark) + ": ";
    try {
        switch (config.kind) {
        case BenchmarkKind::Retrieval: run_retrieval(config, report); break;
        case BenchmarkKind::Map: run_map(config, report); break;
        case BenchmarkKind::Regression: run_regression(config, report); break;
        case BenchmarkKind::Knn: run_knn(config, report); break;
        }
    } catch (const DataError &e) {
        throw DataError(e.code(), context + e.what());
    } catch (const ConfigError &e) {
        throw ConfigError(context + e.what());
    }
    report.summary = summarize(report.raw);
    if (config.kind == BenchmarkKind::Regression) add_global_pcc(report);
    return report;
}

Report run_benchmark(const RunConfig &config, const std::filesystem::path &out_dir) {
    Report report = run_benchmark(config);
    io::write_file_atomic(out_dir / "raw.csv", encode_raw_csv(report.raw));
    emit_report(report, ReportFormat::JsonFile, out_dir);
    return report;
}

} // namespace cellbench::harness
