#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cellbench/core/table.hpp"

namespace cellbench::metrics {

struct SimilarityMatrix {
    std::vector<std::string> ids;
    Matrix values;
    std::vector<std::size_t> zero_rows; // rows with zero norm; their similarities are 0
};

// S_ij = <a_i, a_j> / (|a_i| |a_j|).
SimilarityMatrix cosine_matrix(const Matrix &rows, std::vector<std::string> ids);
SimilarityMatrix cosine_matrix(const EmbeddingTable &table);

// Unordered id pairs with a shared provenance (e.g. CORUM, HuMAP).
struct PairSet {
    std::string source;
    std::vector<std::pair<std::string, std::string>> pairs;
};

// `id_a,id_b,source` CSV, one PairSet per source in order of first appearance.
std::vector<PairSet> read_pairs(const std::filesystem::path &path);

enum class Tail { Top, Bottom };
enum class RecallMode {
    Global,   // tail of all n(n-1)/2 unordered pair similarities
    PerQuery, // tail of each item's n-1 similarities; truth pairs count in both directions
};

struct RecallResult {
    double recall = 0.0;
    std::size_t hits = 0;
    std::size_t truth_size = 0; // resolved pairs (directed count in PerQuery mode)
    std::size_t selected = 0;   // tail size per ranking
    std::vector<std::string> unresolved_ids;
};

// ceil(q * total), guarded against representation error in q * total.
std::size_t tail_size(double q, std::size_t total);

/// Fraction of truth pairs inside the q-tail of the pair-similarity ranking.
/// Ties are broken by pair index (row-major over i < j). Pairs naming unknown
/// ids are skipped and listed; if none resolve, DataError(UnresolvedIds).
RecallResult recall_at_tail(const SimilarityMatrix &similarity, const PairSet &truth, double q,
                            Tail tail = Tail::Top, RecallMode mode = RecallMode::Global);

// Upper-triangle similarities in row-major pair order; length n(n-1)/2.
std::vector<double> pair_similarities(const SimilarityMatrix &similarity);

} // namespace cellbench::metrics
