#include "cellbench/evalmetrics/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cellbench/core/errors.hpp"

namespace cellbench::metrics {

Correlation pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DataError(DataErrorCode::DimMismatch, "pearson_r: length mismatch");
    if (x.size() < 2)
        throw DataError(DataErrorCode::DegenerateInput, "pearson_r: need at least 2 observations");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        return {0.0, false};
    return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), true};
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]])
            ++j;
        // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
        const double rank = 0.5 * static_cast<double>(i + j + 2);
        for (std::size_t t = i; t <= j; ++t)
            ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

Correlation spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DataError(DataErrorCode::DimMismatch, "spearman_rho: length mismatch");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson_r(rx, ry);
}

Dendrogram average_linkage(const Matrix &distance, const std::vector<std::string> &names) {
    const auto n = static_cast<std::size_t>(distance.rows());
    if (distance.cols() != distance.rows() || names.size() != n)
        throw DataError(DataErrorCode::DimMismatch, "average_linkage: distance matrix / names mismatch");
    Dendrogram out;
    if (n == 0)
        return out;

    struct Cluster {
        std::size_t node;
        std::size_t size;
        std::string name;
        std::vector<std::size_t> leaves; // in-order
    };
    std::vector<Cluster> active;
    for (std::size_t i = 0; i < n; ++i)
        active.push_back({i, 1, names[i], {i}});
    Matrix d = distance;

    while (active.size() > 1) {
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        std::pair<std::string, std::string> best_key;
        for (std::size_t i = 0; i < active.size(); ++i)
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double dij = d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                auto key = std::minmax(active[i].name, active[j].name);
                std::pair<std::string, std::string> k{key.first, key.second};
                if (dij < best || (dij == best && k < best_key)) {
                    best = dij;
                    bi = i;
                    bj = j;
                    best_key = k;
                }
            }
        Cluster &a = active[bi];
        Cluster &b = active[bj];
        const bool a_left = a.name <= b.name;
        Cluster &l = a_left ? a : b;
        Cluster &r = a_left ? b : a;

        Cluster merged;
        merged.node = n + out.merges.size();
        merged.size = a.size + b.size;
        merged.name = l.name;
        merged.leaves = l.leaves;
        merged.leaves.insert(merged.leaves.end(), r.leaves.begin(), r.leaves.end());
        out.merges.push_back({l.node, r.node, best, merged.size});

        // Lance-Williams update for average linkage, stored in slot bi.
        const double wa = static_cast<double>(a.size), wb = static_cast<double>(b.size);
        for (std::size_t k = 0; k < active.size(); ++k) {
            if (k == bi || k == bj)
                continue;
            const auto ki = static_cast<Eigen::Index>(k);
            const double v = (wa * d(ki, static_cast<Eigen::Index>(bi)) + wb * d(ki, static_cast<Eigen::Index>(bj))) / (wa + wb);
            d(ki, static_cast<Eigen::Index>(bi)) = v;
            d(static_cast<Eigen::Index>(bi), ki) = v;
        }
        active[bi] = std::move(merged);
        // Drop slot bj from both the list and the matrix.
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
        const auto m = static_cast<Eigen::Index>(d.rows());
        const auto j = static_cast<Eigen::Index>(bj);
        Matrix reduced(m - 1, m - 1);
        for (Eigen::Index r = 0, rr = 0; r < m; ++r) {
            if (r == j)
                continue;
            for (Eigen::Index c = 0, cc = 0; c < m; ++c) {
                if (c == j)
                    continue;
                reduced(rr, cc++) = d(r, c);
            }
            ++rr;
        }
        d = std::move(reduced);
    }
    out.leaf_order = active.front().leaves;
    return out;
}

RsaResult rsa_matrix(const std::vector<std::vector<double>> &rankings, const std::vector<std::string> &names) {
    const std::size_t m = rankings.size();
    if (names.size() != m)
        throw DataError(DataErrorCode::CountMismatch, "rsa_matrix: one name per ranking required");
    if (m == 0)
        throw DataError(DataErrorCode::DegenerateInput, "rsa_matrix: no rankings");
    for (const auto &r : rankings)
        if (r.size() != rankings.front().size())
            throw DataError(DataErrorCode::DimMismatch, "rsa_matrix: rankings cover different pair universes");

    std::vector<std::vector<double>> ranks;
    ranks.reserve(m);
    for (const auto &r : rankings)
        ranks.push_back(average_ranks(r));

    RsaResult out;
    out.names = names;
    out.correlation = Matrix::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double rho = pearson_r(ranks[i], ranks[j]).value;
            out.correlation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho;
            out.correlation(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rho;
        }
    const Matrix distance = Matrix::Ones(out.correlation.rows(), out.correlation.cols()) - out.correlation;
    out.dendrogram = average_linkage(distance, names);
    return out;
}

} // namespace cellbench::metrics
