#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "cellbench/core/folds.hpp"
#include "cellbench/core/table.hpp"

namespace cellbench::harness {

// Per gene, n_per items per fold drawn without replacement.
struct PerGeneSubsample {
    std::size_t n_per = 10;
    int folds = 3;
    std::string gene_key = "gene";
};

// Per lab, plates_per_lab whole plates per fold; every item on a chosen
// plate joins that fold.
struct PlateGrouped {
    int folds = 5;
    std::size_t plates_per_lab = 4;
    std::string plate_key = "plate";
    std::string lab_key = "lab";
};

using FoldScheme = std::variant<PerGeneSubsample, PlateGrouped>;

/// Deterministic for a given seed and table. When a gene or lab cannot
/// fill every fold, its available units are split as evenly as possible
/// across folds (still disjoint) and a warning is recorded.
FoldSpec make_folds(const EmbeddingTable &table, const FoldScheme &scheme, std::uint64_t seed);

} // namespace cellbench::harness
