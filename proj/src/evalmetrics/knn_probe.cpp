#include "cellbench/evalmetrics/knn_probe.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cellbench/core/errors.hpp"

namespace cellbench::metrics {

namespace {

Matrix unit_rows(const Matrix &m) {
    Matrix out = m;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).norm();
        if (norm > 0.0)
            out.row(i) /= norm;
        else
            out.row(i).setZero();
    }
    return out;
}

} // namespace

KnnProbeResult knn_probe(const Matrix &train, const std::vector<std::string> &train_labels, const Matrix &test,
                         const std::vector<std::string> &test_labels, std::size_t k) {
    if (train.rows() == 0)
        throw DataError(DataErrorCode::DegenerateInput, "knn_probe: empty train set");
    if (k < 1)
        throw ConfigError("knn_probe: k must be >= 1");
    if (static_cast<std::size_t>(train.rows()) != train_labels.size() ||
        static_cast<std::size_t>(test.rows()) != test_labels.size())
        throw DataError(DataErrorCode::CountMismatch, "knn_probe: label count differs from row count");
    if (train.cols() != test.cols())
        throw DataError(DataErrorCode::DimMismatch, "knn_probe: train/test dimensions differ");

    const std::size_t n_train = train_labels.size();
    const std::size_t kk = std::min(k, n_train);
    const Matrix a = unit_rows(train);
    const Matrix b = unit_rows(test);

    KnnProbeResult result;
    result.predictions.reserve(test_labels.size());
    std::vector<double> dist(n_train);
    std::vector<std::size_t> order(n_train);
    std::size_t correct = 0;
    for (Eigen::Index t = 0; t < b.rows(); ++t) {
        const Vector sims = a * b.row(t).transpose();
        for (std::size_t i = 0; i < n_train; ++i)
            dist[i] = 1.0 - sims(static_cast<Eigen::Index>(i));
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                          [&](std::size_t x, std::size_t y) { return dist[x] < dist[y] || (dist[x] == dist[y] && x < y); });

        std::map<std::string, std::pair<std::size_t, double>> votes; // label -> (count, distance sum)
        for (std::size_t r = 0; r < kk; ++r) {
            auto &v = votes[train_labels[order[r]]];
            ++v.first;
            v.second += dist[order[r]];
        }
        const std::string *best = nullptr;
        std::size_t best_count = 0;
        double best_mean = 0.0;
        for (const auto &[label, v] : votes) { // map order = label order
            const double mean = v.second / static_cast<double>(v.first);
            if (!best || v.first > best_count || (v.first == best_count && mean < best_mean)) {
                best = &label;
                best_count = v.first;
                best_mean = mean;
            }
        }
        result.predictions.push_back(*best);
        correct += (*best == test_labels[static_cast<std::size_t>(t)]);
    }
    result.accuracy = test_labels.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test_labels.size());
    return result;
}

} // namespace cellbench::metrics
