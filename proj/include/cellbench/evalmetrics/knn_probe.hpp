#pragma once

#include <string>
#include <vector>

#include "cellbench/core/table.hpp"

namespace cellbench::metrics {

struct KnnProbeResult {
    double accuracy = 0.0;
    std::vector<std::string> predictions;
};

/// k-nearest-neighbor classification under cosine distance (1 - cos).
/// Neighbors are ordered by (distance, train index); the vote goes to the most
/// frequent label, ties to the smaller mean neighbor distance, then to the
/// lexicographically smaller label.
KnnProbeResult knn_probe(const Matrix &train, const std::vector<std::string> &train_labels, const Matrix &test,
                         const std::vector<std::string> &test_labels, std::size_t k);

} // namespace cellbench::metrics
