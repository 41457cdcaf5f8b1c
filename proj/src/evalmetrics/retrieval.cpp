#include "cellbench/evalmetrics/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cellbench/core/errors.hpp"
#include "cellbench/evalmetrics/similarity.hpp"

namespace cellbench::metrics {

double average_precision(const std::vector<bool> &relevant_in_rank_order) {
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t r = 0; r < relevant_in_rank_order.size(); ++r) {
        if (relevant_in_rank_order[r]) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(r + 1);
        }
    }
    return hits ? sum / static_cast<double>(hits) : 0.0;
}

MapResult map_retrieval(const Matrix &rows, const std::vector<std::string> &labels) {
    const auto n = static_cast<std::size_t>(rows.rows());
    if (labels.size() != n)
        throw DataError(DataErrorCode::CountMismatch, "map_retrieval: label count differs from row count");

    std::vector<std::size_t> active;
    std::map<std::string, std::size_t> group_size;
    for (std::size_t i = 0; i < n; ++i)
        if (!labels[i].empty()) {
            active.push_back(i);
            ++group_size[labels[i]];
        }
    if (group_size.size() < 2)
        throw DataError(DataErrorCode::DegenerateInput, "map_retrieval: need at least 2 groups");

    MapResult result;
    for (const auto &[g, size] : group_size)
        if (size < 2)
            result.excluded_groups.push_back(g);
    if (result.excluded_groups.size() == group_size.size())
        throw DataError(DataErrorCode::DegenerateInput, "map_retrieval: every group is a singleton");

    std::vector<std::string> ids(n);
    const SimilarityMatrix sim = cosine_matrix(rows, ids);

    result.query_ap.assign(n, std::numeric_limits<double>::quiet_NaN());
    std::map<std::string, std::pair<double, std::size_t>> acc;
    std::vector<std::size_t> order;
    std::vector<bool> relevant;
    for (std::size_t q : active) {
        if (group_size[labels[q]] < 2)
            continue;
        order.clear();
        for (std::size_t c : active)
            if (c != q)
                order.push_back(c);
        const auto row = sim.values.row(static_cast<Eigen::Index>(q));
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return row(static_cast<Eigen::Index>(a)) > row(static_cast<Eigen::Index>(b));
        });
        relevant.assign(order.size(), false);
        for (std::size_t r = 0; r < order.size(); ++r)
            relevant[r] = labels[order[r]] == labels[q];
        const double ap = average_precision(relevant);
        result.query_ap[q] = ap;
        auto &[sum, count] = acc[labels[q]];
        sum += ap;
        ++count;
    }
    double total = 0.0;
    for (const auto &[g, sc] : acc) {
        result.group_ap[g] = sc.first / static_cast<double>(sc.second);
        total += result.group_ap[g];
    }
    result.mean_ap = total / static_cast<double>(result.group_ap.size());
    return result;
}

MapResult map_retrieval(const EmbeddingTable &table, const std::map<std::string, std::string> &labels) {
    std::vector<std::string> per_row(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto it = labels.find(table.ids[i]);
        if (it != labels.end())
            per_row[i] = it->second;
    }
    return map_retrieval(table.matrix(), per_row);
}

} // namespace cellbench::metrics
