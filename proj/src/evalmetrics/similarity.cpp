#include "cellbench/evalmetrics/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"

namespace cellbench::metrics {

SimilarityMatrix cosine_matrix(const Matrix &rows, std::vector<std::string> ids) {
    if (static_cast<std::size_t>(rows.rows()) != ids.size())
        throw DataError(DataErrorCode::CountMismatch, "cosine_matrix: id count differs from row count");
    SimilarityMatrix s;
    s.ids = std::move(ids);
    Matrix unit = rows;
    for (Eigen::Index i = 0; i < unit.rows(); ++i) {
        const double norm = unit.row(i).norm();
        if (norm > 0.0) {
            unit.row(i) /= norm;
        } else {
            unit.row(i).setZero();
            s.zero_rows.push_back(static_cast<std::size_t>(i));
        }
    }
    s.values = unit * unit.transpose();
    // Exact symmetry and unit diagonal regardless of GEMM blocking.
    for (Eigen::Index i = 0; i < s.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < i; ++j)
            s.values(i, j) = s.values(j, i);
        s.values(i, i) = 1.0;
    }
    for (auto z : s.zero_rows) {
        s.values.row(static_cast<Eigen::Index>(z)).setZero();
        s.values.col(static_cast<Eigen::Index>(z)).setZero();
    }
    return s;
}

SimilarityMatrix cosine_matrix(const EmbeddingTable &table) { return cosine_matrix(table.matrix(), table.ids); }

std::vector<PairSet> read_pairs(const std::filesystem::path &path) {
    const auto csv = io::read_csv(path);
    const auto c_a = csv.column("id_a"), c_b = csv.column("id_b"), c_s = csv.column("source");
    std::vector<PairSet> sets;
    for (const auto &row : csv.rows) {
        auto it = std::find_if(sets.begin(), sets.end(), [&](const PairSet &p) { return p.source == row[c_s]; });
        if (it == sets.end()) {
            sets.push_back({row[c_s], {}});
            it = sets.end() - 1;
        }
        it->pairs.emplace_back(row[c_a], row[c_b]);
    }
    return sets;
}

std::size_t tail_size(double q, std::size_t total) {
    if (!(q > 0.0 && q < 1.0))
        throw ConfigError("tail fraction q must lie in (0, 1)");
    const double t = q * static_cast<double>(total);
    const auto size = static_cast<std::size_t>(std::ceil(t - 1e-9 * std::max(1.0, t)));
    return std::clamp<std::size_t>(size, total ? 1 : 0, total);
}

namespace {

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    // Row-major over i < j.
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Indices of the first `count` entries under the tail order (ties by index).
std::vector<std::size_t> tail_indices(const std::vector<double> &values, std::size_t count, Tail tail) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    auto cmp = [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b])
            return tail == Tail::Top ? values[a] > values[b] : values[a] < values[b];
        return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(), cmp);
    order.resize(count);
    return order;
}

} // namespace

std::vector<double> pair_similarities(const SimilarityMatrix &similarity) {
    const auto n = static_cast<std::size_t>(similarity.values.rows());
    std::vector<double> out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.push_back(similarity.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    return out;
}

RecallResult recall_at_tail(const SimilarityMatrix &similarity, const PairSet &truth, double q, Tail tail,
                            RecallMode mode) {
    const std::size_t n = similarity.ids.size();
    if (n < 2)
        throw DataError(DataErrorCode::DegenerateInput, "recall_at_tail: need at least 2 items");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i)
        index.emplace(similarity.ids[i], i);

    RecallResult result;
    std::set<std::string> unresolved;
    std::set<std::pair<std::size_t, std::size_t>> resolved;
    for (const auto &[a, b] : truth.pairs) {
        const auto ia = index.find(a), ib = index.find(b);
        if (ia == index.end())
            unresolved.insert(a);
        if (ib == index.end())
            unresolved.insert(b);
        if (ia == index.end() || ib == index.end() || ia->second == ib->second)
            continue;
        resolved.emplace(std::min(ia->second, ib->second), std::max(ia->second, ib->second));
    }
    result.unresolved_ids.assign(unresolved.begin(), unresolved.end());
    if (resolved.empty()) {
        std::string listed;
        for (std::size_t i = 0; i < result.unresolved_ids.size() && i < 20; ++i)
            listed += (i ? ", " : "") + result.unresolved_ids[i];
        throw DataError(DataErrorCode::UnresolvedIds,
                        "recall_at_tail: no truth pair of '" + truth.source + "' resolves; unresolved ids: " + listed);
    }

    if (mode == RecallMode::Global) {
        const auto values = pair_similarities(similarity);
        result.selected = tail_size(q, values.size());
        std::vector<char> in_tail(values.size(), 0);
        for (auto idx : tail_indices(values, result.selected, tail))
            in_tail[idx] = 1;
        for (const auto &[i, j] : resolved)
            result.hits += in_tail[pair_index(i, j, n)];
        result.truth_size = resolved.size();
    } else {
        result.selected = tail_size(q, n - 1);
        std::vector<std::vector<char>> selected(n);
        std::vector<double> row(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            // Candidates in index order, skipping the query itself.
            for (std::size_t j = 0, c = 0; j < n; ++j)
                if (j != i)
                    row[c++] = similarity.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            selected[i].assign(n, 0);
            for (auto c : tail_indices(row, result.selected, tail))
                selected[i][c < i ? c : c + 1] = 1;
        }
        for (const auto &[i, j] : resolved)
            result.hits += selected[i][j] + selected[j][i];
        result.truth_size = 2 * resolved.size();
    }
    result.recall = static_cast<double>(result.hits) / static_cast<double>(result.truth_size);
    return result;
}

} // namespace cellbench::metrics
