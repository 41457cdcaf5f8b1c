#include "cellbench/regress/pipeline.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "cellbench/core/errors.hpp"
#include "cellbench/evalmetrics/correlation.hpp"

namespace cellbench::regress {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Matrix take_rows(const Matrix &m, const std::vector<Eigen::Index> &rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
        out.row(static_cast<Eigen::Index>(r)) = m.row(rows[r]);
    return out;
}

} // namespace

double FoldOutcome::mean_pcc() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : pcc)
        if (!std::isnan(v)) {
            sum += v;
            ++n;
        }
    return n ? sum / static_cast<double>(n) : kNaN;
}

FoldOutcome evaluate_fold(const Matrix &x_train, const Matrix &y_train, const Matrix &x_test, const Matrix &y_test,
                          const PipelineConfig &config) {
    if (x_train.rows() != y_train.rows() || x_test.rows() != y_test.rows())
        throw DataError(DataErrorCode::CountMismatch, "evaluate_fold: embedding/target row counts differ");
    if (y_train.cols() != y_test.cols() || x_train.cols() != x_test.cols())
        throw DataError(DataErrorCode::DimMismatch, "evaluate_fold: train/test widths differ");

    FoldOutcome out;
    out.n_train = static_cast<std::size_t>(x_train.rows());
    out.n_test = static_cast<std::size_t>(x_test.rows());
    out.pca = pca_fit(x_train, config.components);
    const Matrix z_train = pca_transform(out.pca, x_train);
    out.ridge = ridge_fit(z_train, y_train, config.alpha, config.fit_intercept);

    out.pcc.assign(static_cast<std::size_t>(y_test.cols()), kNaN);
    if (x_test.rows() < 2)
        return out;
    const Matrix pred = ridge_predict(out.ridge, pca_transform(out.pca, x_test));
    for (Eigen::Index g = 0; g < y_test.cols(); ++g) {
        const Vector p = pred.col(g);
        const Vector t = y_test.col(g);
        const auto r = metrics::pearson_r({p.data(), static_cast<std::size_t>(p.size())},
                                          {t.data(), static_cast<std::size_t>(t.size())});
        if (r.defined)
            out.pcc[static_cast<std::size_t>(g)] = r.value;
    }
    return out;
}

RegressionReport hest_pipeline(const Matrix &x, const Matrix &y, const std::vector<int> &fold_of_row,
                               const std::vector<std::string> &dataset_of_row, std::vector<std::string> genes,
                               const PipelineConfig &config) {
    const auto n = static_cast<std::size_t>(x.rows());
    if (static_cast<std::size_t>(y.rows()) != n || fold_of_row.size() != n || dataset_of_row.size() != n)
        throw DataError(DataErrorCode::CountMismatch, "hest_pipeline: row counts of inputs differ");
    if (genes.size() != static_cast<std::size_t>(y.cols()))
        throw DataError(DataErrorCode::DimMismatch, "hest_pipeline: gene names do not match target columns");

    RegressionReport report;
    report.genes = std::move(genes);

    std::set<std::string> datasets;
    for (std::size_t i = 0; i < n; ++i)
        if (fold_of_row[i] >= 0)
            datasets.insert(dataset_of_row[i]);

    double global_sum = 0.0;
    std::size_t global_n = 0;
    for (const auto &ds : datasets) {
        std::set<int> folds;
        for (std::size_t i = 0; i < n; ++i)
            if (fold_of_row[i] >= 0 && dataset_of_row[i] == ds)
                folds.insert(fold_of_row[i]);
        std::vector<double> fold_scores;
        for (int f : folds) {
            std::vector<Eigen::Index> train, test;
            for (std::size_t i = 0; i < n; ++i) {
                if (fold_of_row[i] < 0 || dataset_of_row[i] != ds)
                    continue;
                (fold_of_row[i] == f ? test : train).push_back(static_cast<Eigen::Index>(i));
            }
            if (train.size() < 2)
                throw DataError(DataErrorCode::DegenerateInput,
                                "hest_pipeline: dataset '" + ds + "' fold " + std::to_string(f) + " has < 2 training rows");
            FoldOutcome outcome =
                evaluate_fold(take_rows(x, train), take_rows(y, train), take_rows(x, test), take_rows(y, test), config);
            outcome.dataset = ds;
            outcome.fold = f;
            const double score = outcome.mean_pcc();
            if (!std::isnan(score))
                fold_scores.push_back(score);
            report.folds.push_back(std::move(outcome));
        }
        DatasetSummary summary;
        summary.folds = fold_scores.size();
        if (!fold_scores.empty()) {
            for (double s : fold_scores)
                summary.mean += s;
            summary.mean /= static_cast<double>(fold_scores.size());
            for (double s : fold_scores)
                summary.std += (s - summary.mean) * (s - summary.mean);
            summary.std = std::sqrt(summary.std / static_cast<double>(fold_scores.size()));
            global_sum += summary.mean;
            ++global_n;
        } else {
            summary.mean = summary.std = kNaN;
        }
        report.datasets[ds] = summary;
    }
    report.global_mean = global_n ? global_sum / static_cast<double>(global_n) : kNaN;
    return report;
}

} // namespace cellbench::regress
