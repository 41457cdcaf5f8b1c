#pragma once

#include <span>
#include <string>
#include <vector>

#include "cellbench/core/table.hpp"

namespace cellbench::metrics {

struct Correlation {
    double value = 0.0;
    bool defined = true; // false when either side has zero variance (value is then 0)
};

Correlation pearson_r(std::span<const double> x, std::span<const double> y);

// 1-based ranks, tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> x);

// Pearson correlation of average ranks.
Correlation spearman_rho(std::span<const double> x, std::span<const double> y);

// One agglomeration step; nodes 0..n-1 are leaves, node n + s is the result of step s.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double distance = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::vector<Merge> merges;
    std::vector<std::size_t> leaf_order;
};

/// UPGMA (average linkage) on a symmetric distance matrix. The closest pair
/// merges first; equal distances go to the pair with the smaller names, where
/// a cluster's name is the smallest leaf name in it. The left child is the
/// cluster with the smaller name; leaf_order is the in-order traversal.
Dendrogram average_linkage(const Matrix &distance, const std::vector<std::string> &names);

struct RsaResult {
    std::vector<std::string> names;
    Matrix correlation;
    Dendrogram dendrogram;
};

/// Pairwise Spearman correlation between models' similarity rankings, then
/// average-linkage clustering on 1 - rho.
RsaResult rsa_matrix(const std::vector<std::vector<double>> &rankings, const std::vector<std::string> &names);

} // namespace cellbench::metrics
