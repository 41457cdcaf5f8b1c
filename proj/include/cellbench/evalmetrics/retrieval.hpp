#pragma once

#include <map>
#include <string>
#include <vector>

#include "cellbench/core/table.hpp"

namespace cellbench::metrics {

// AP of a ranked relevance list: mean of precision@rank over relevant ranks.
// Zero when nothing is relevant.
double average_precision(const std::vector<bool> &relevant_in_rank_order);

struct MapResult {
    std::map<std::string, double> group_ap; // mean AP over the group's queries
    double mean_ap = 0.0;                   // mean over groups
    std::vector<double> query_ap;           // per row; NaN for rows that are not queries
    std::vector<std::string> excluded_groups; // singletons
};

/// Replicate retrieval. Every labeled row queries all other labeled rows
/// ranked by cosine similarity (descending, ties by row order); positives share
/// its label. Rows with an empty label are ignored. Singleton groups are not
/// queried but remain candidates. Needs >= 2 groups.
MapResult map_retrieval(const Matrix &rows, const std::vector<std::string> &labels);
MapResult map_retrieval(const EmbeddingTable &table, const std::map<std::string, std::string> &labels);

} // namespace cellbench::metrics
